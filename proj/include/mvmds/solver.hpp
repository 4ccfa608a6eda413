#pragma once

// Alternating optimizer for metric MDS over several distance views: a
// majorized (Guttman-style) configuration update followed by a closed-form
// simplex weight update, repeated until the objective stops decreasing.

#include <functional>
#include <vector>

#include "mvmds/core.hpp"

namespace mvmds {

struct IterationRecord {
  int iter = 0;
  double objective_value = 0.0;
  ViewWeights alpha;
  Vector per_view_stress;
};

struct SolveReport {
  Configuration config_out;
  ViewWeights weights_out;
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations_used = 0;
  // Objective at the initial configuration with uniform weights.
  double initial_objective = 0.0;
};

// Called after every sweep with the record and the configuration it refers to.
using IterationObserver =
    std::function<void(const IterationRecord&, const Configuration&)>;

/// V: off-diagonal -sum_v alpha_v^gamma w_ij, diagonal the negated row sum.
Matrix build_v_matrix(const MultiViewProblem& problem, const ViewWeights& weights,
                      double gamma);

/// B(Z): off-diagonal -sum_v alpha_v^gamma w_ij delta_ij / d_ij(Z), or 0 where
/// d_ij(Z) = 0; diagonal the negated row sum.
Matrix build_b_matrix(const MultiViewProblem& problem, const ViewWeights& weights,
                      const Configuration& z, double gamma);

/// Moore-Penrose inverse of a symmetric PSD matrix via eigendecomposition.
/// Eigenvalues below 1e-10 * max|lambda| are treated as zero.
Matrix pseudoinverse(const Matrix& v);

/// One majorization step from the previous iterate z. Uses B Z / (N s) when
/// every pair of every view is observed, V^+ B Z otherwise.
Configuration update_configuration(const MultiViewProblem& problem,
                                   const ViewWeights& weights,
                                   const Configuration& z, double gamma);

/// Closed-form minimizer of sum_v alpha_v^gamma J_v over the simplex.
ViewWeights update_weights(const Vector& per_view_stress, double gamma);

/// Classical (Torgerson) MDS of a full dissimilarity matrix into p dimensions.
/// Columns beyond the number of positive eigenvalues are zero.
Matrix classical_mds(const Matrix& delta, int p);

/// Starting configuration for solve().
Configuration initialize(const MultiViewProblem& problem, const SolverConfig& cfg);

SolveReport solve(const MultiViewProblem& problem, const SolverConfig& cfg,
                  const IterationObserver& observer = {});

SolveReport solve_single_view(const DistanceView& view, const SolverConfig& cfg,
                              const IterationObserver& observer = {});

}  // namespace mvmds
