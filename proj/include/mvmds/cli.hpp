#pragma once

// Command-line front end and the experiment pipelines behind it. The
// pipelines are exposed so tests can drive them without going through argv.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvmds/core.hpp"
#include "mvmds/metrics.hpp"
#include "mvmds/solver.hpp"

namespace mvmds::cli {

/// Parses argv (without the program name) and runs the chosen subcommand.
/// Returns 0 on success, 1 on any failure; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct MethodEmbedding {
  std::string name;
  SolveReport report;
};

/// "View1".."ViewM" (single-view MDS), "LC_MDS" (when every view is fully
/// observed) and "MVMDS", in that order.
std::vector<MethodEmbedding> embed_methods(const MultiViewProblem& problem,
                                           const SolverConfig& cfg);

struct MethodRetrieval {
  std::string name;
  RetrievalScores scores;
};

std::vector<MethodRetrieval> evaluate_retrieval(const std::vector<MethodEmbedding>& methods,
                                                const std::vector<int>& labels);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct ClusterSummary {
  MeanSd acc, nmi, purity;
};

/// k-means with k = number of distinct labels, `repeats` times with seeds
/// derived from `seed`; sample standard deviation (0 for a single repeat).
ClusterSummary repeated_clustering(const Matrix& x, const std::vector<int>& labels, int repeats,
                                   std::uint64_t seed);

struct MethodClustering {
  std::string name;
  ClusterSummary summary;
};

std::vector<MethodClustering> evaluate_clustering(const std::vector<MethodEmbedding>& methods,
                                                  const std::vector<int>& labels, int repeats,
                                                  std::uint64_t seed);

/// One replicate of the six-cities experiment.
struct CityTrial {
  std::vector<std::string> methods;  // View1..View4, LC_MDS, MVMDS@g...
  std::vector<double> truth_stress;  // parallel to methods
  std::vector<SolveReport> reports;  // parallel to methods
};

inline const std::vector<double> kCityGammas = {1.5, 5.0, 10.0};

CityTrial run_city_trial(std::uint64_t seed, const std::vector<double>& gammas = kCityGammas,
                         int dim = 2);

}  // namespace mvmds::cli
