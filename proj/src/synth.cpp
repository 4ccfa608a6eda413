#include "mvmds/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace mvmds {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DistanceView six_cities() {
  // Lower triangle, rows/cols in kCityNames order.
  Matrix d = Matrix::Zero(6, 6);
  const double lower[6][6] = {
      {0, 0, 0, 0, 0, 0},
      {380, 0, 0, 0, 0, 0},
      {2034, 2148, 0, 0, 0, 0},
      {1566, 1945, 1085, 0, 0, 0},
      {2824, 2946, 821, 1653, 0, 0},
      {2689, 2840, 715, 1414, 237, 0},
  };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < i; ++j) d(i, j) = d(j, i) = lower[i][j];
  return validate_view(d);
}

DistanceView perturb_view(const DistanceView& truth, const NoiseSpec& spec) {
  const Eigen::Index n = truth.n();
  const long pairs = static_cast<long>(n) * (n - 1) / 2;
  if (spec.k < 0 || spec.k > pairs) {
    throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(spec.k) + " with " +
                                            std::to_string(pairs) + " pairs");
  }
  if (!(spec.sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma must be >= 0");

  std::vector<std::pair<Eigen::Index, Eigen::Index>> all;
  all.reserve(static_cast<std::size_t>(pairs));
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) all.emplace_back(i, j);

  std::mt19937_64 rng(spec.seed);
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (int s = 0; s < spec.k; ++s) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(s), all.size() - 1);
    std::swap(all[static_cast<std::size_t>(s)], all[pick(rng)]);
  }

  Matrix delta = truth.delta();
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < spec.k; ++s) {
    const auto [i, j] = all[static_cast<std::size_t>(s)];
    if (!truth.observed(i, j)) continue;
    const double mean = truth.delta(i, j);
    const double draw = mean + spec.sigma * mean * unit(rng);
    delta(i, j) = delta(j, i) = std::max(0.0, draw);
  }
  return validate_view(delta, truth.mask());
}

std::vector<NoiseSpec> default_city_specs(std::uint64_t seed) {
  const std::array<std::pair<int, double>, 4> setup = {{{4, 0.3}, {4, 0.7}, {8, 0.3}, {8, 0.7}}};
  std::vector<NoiseSpec> specs;
  for (std::size_t v = 0; v < setup.size(); ++v) {
    specs.push_back(NoiseSpec{setup[v].first, setup[v].second, mix_seed(seed, v)});
  }
  return specs;
}

MultiViewProblem make_city_problem(const std::vector<NoiseSpec>& specs) {
  const DistanceView truth = six_cities();
  std::vector<DistanceView> views;
  views.reserve(specs.size());
  for (const auto& spec : specs) views.push_back(perturb_view(truth, spec));
  return MultiViewProblem(std::move(views));
}

DistanceView mean_view(const MultiViewProblem& problem) {
  if (!problem.fully_observed()) {
    throw Error(ErrorCode::InvalidMask, "equal-weight baseline needs fully observed views");
  }
  Matrix sum = Matrix::Zero(problem.n(), problem.n());
  for (const auto& view : problem.views()) sum += view.delta();
  return validate_view(sum / static_cast<double>(problem.m()));
}

SolveReport lc_mds_baseline(const MultiViewProblem& problem, const SolverConfig& cfg) {
  return solve_single_view(mean_view(problem), cfg);
}

LabeledProblem make_informative_noise_problem(int n, int classes, std::uint64_t seed) {
  if (n < 2 || classes < 1 || classes > n) {
    throw Error(ErrorCode::InvalidConfig, "need n >= 2 and 1 <= classes <= n");
  }
  constexpr int kFeatureDim = 10;
  constexpr double kCenterSpread = 3.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  Matrix centers(classes, kFeatureDim);
  for (int c = 0; c < classes; ++c)
    for (int k = 0; k < kFeatureDim; ++k) centers(c, k) = kCenterSpread * unit(rng);

  std::vector<int> labels(static_cast<std::size_t>(n));
  Matrix informative(n, kFeatureDim);
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = i % classes;
    for (int k = 0; k < kFeatureDim; ++k) {
      informative(i, k) = centers(i % classes, k) + unit(rng);
    }
  }
  // Noise points have per-coordinate variance matching the informative view's
  // marginal (center spread plus unit blob noise).
  const double noise_scale = std::sqrt(kCenterSpread * kCenterSpread + 1.0);
  Matrix noise(n, kFeatureDim);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < kFeatureDim; ++k) noise(i, k) = noise_scale * unit(rng);

  auto distances = [n](const Matrix& pts) {
    Matrix d = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) d(i, j) = d(j, i) = (pts.row(i) - pts.row(j)).norm();
    return d;
  };
  std::vector<DistanceView> views;
  views.push_back(validate_view(distances(informative)));
  views.push_back(validate_view(distances(noise)));
  return LabeledProblem{MultiViewProblem(std::move(views)), std::move(labels)};
}

}  // namespace mvmds
