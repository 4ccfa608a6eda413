#pragma once

// Six-cities ground truth, the pairwise noise protocol that turns it into
// several unreliable "participant" views, and the equal-weight baseline.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mvmds/core.hpp"
#include "mvmds/solver.hpp"

namespace mvmds {

struct NoiseSpec {
  int k = 0;          // number of perturbed unordered pairs
  double sigma = 0.0; // standard deviation relative to the true distance
  std::uint64_t seed = 0;
};

inline constexpr std::array<std::string_view, 6> kCityNames = {"LA", "SFO", "CHI",
                                                               "HOU", "NY", "WC"};

/// True pairwise distances between LA, SFO, CHI, HOU, NY and WC (in that order).
DistanceView six_cities();

/// Replaces k distinct pairs, chosen uniformly, with Normal(delta, sigma*delta)
/// draws clamped at zero.
DistanceView perturb_view(const DistanceView& truth, const NoiseSpec& spec);

/// The four (K, sigma) settings (4, .3), (4, .7), (8, .3), (8, .7); view v uses
/// a seed derived from `seed` and v.
std::vector<NoiseSpec> default_city_specs(std::uint64_t seed);

MultiViewProblem make_city_problem(const std::vector<NoiseSpec>& specs);

/// Element-wise mean of the view matrices. All views must be fully observed.
DistanceView mean_view(const MultiViewProblem& problem);

/// Single-view MDS on the element-wise mean of the views.
SolveReport lc_mds_baseline(const MultiViewProblem& problem, const SolverConfig& cfg);

/// Labels plus views for retrieval / clustering benchmarks.
struct LabeledProblem {
  MultiViewProblem problem;
  std::vector<int> labels;
};

/// Two views of n objects in `classes` classes: view 0 holds distances between
/// points drawn from well-separated Gaussian blobs (one per class), view 1
/// holds distances between label-independent Gaussian points of similar scale.
LabeledProblem make_informative_noise_problem(int n, int classes, std::uint64_t seed);

// SplitMix64 finalizer used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mvmds
