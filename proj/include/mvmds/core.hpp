#pragma once

// Domain types shared by the solver, the synthetic experiment, evaluation
// and I/O: validated distance views, multi-view problems, configurations,
// simplex weights, and the stress / multi-view objective evaluators.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mvmds/error.hpp"

namespace mvmds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kSimplexTolerance = 1e-12;

/// A validated N x N dissimilarity matrix with a binary observation mask.
///
/// Only the lower triangle of the mask is consulted; it is mirrored on
/// construction. Entries of delta at unobserved pairs are stored as 0 so two
/// views that differ only at masked pairs compare equal.
class DistanceView {
 public:
  const Matrix& delta() const noexcept { return delta_; }
  const Matrix& mask() const noexcept { return mask_; }
  Eigen::Index n() const noexcept { return delta_.rows(); }

  double delta(Eigen::Index i, Eigen::Index j) const { return delta_(i, j); }
  bool observed(Eigen::Index i, Eigen::Index j) const {
    return mask_(i, j) != 0.0;
  }
  // True when every off-diagonal pair is observed.
  bool fully_observed() const noexcept { return fully_observed_; }
  Eigen::Index observed_pairs() const noexcept { return observed_pairs_; }

 private:
  friend DistanceView validate_view(const Matrix& raw,
                                    const std::optional<Matrix>& mask);
  DistanceView(Matrix delta, Matrix mask);

  Matrix delta_;
  Matrix mask_;
  bool fully_observed_ = true;
  Eigen::Index observed_pairs_ = 0;
};

/// Validates a raw square matrix (and optional mask) into a DistanceView.
/// Observed pairs differing from their transpose by at most 1e-9 are averaged;
/// larger asymmetry is an error. The diagonal is zeroed.
DistanceView validate_view(const Matrix& raw,
                           const std::optional<Matrix>& mask = std::nullopt);

/// M aligned views over the same N objects.
class MultiViewProblem {
 public:
  explicit MultiViewProblem(std::vector<DistanceView> views);

  const std::vector<DistanceView>& views() const noexcept { return views_; }
  const DistanceView& view(std::size_t v) const { return views_.at(v); }
  std::size_t m() const noexcept { return views_.size(); }
  Eigen::Index n() const noexcept { return views_.front().n(); }
  bool fully_observed() const noexcept;

 private:
  std::vector<DistanceView> views_;
};

/// An N x P embedding. Rows are points.
struct Configuration {
  Matrix x;

  Configuration() = default;
  explicit Configuration(Matrix coords);

  Eigen::Index n() const noexcept { return x.rows(); }
  Eigen::Index p() const noexcept { return x.cols(); }
  double distance(Eigen::Index i, Eigen::Index j) const {
    return (x.row(i) - x.row(j)).norm();
  }
};

/// Point on the probability simplex, one entry per view.
class ViewWeights {
 public:
  // The single-view weight vector (1).
  ViewWeights() : alpha_(Vector::Ones(1)) {}
  explicit ViewWeights(Vector alpha);
  static ViewWeights uniform(std::size_t m);
  static ViewWeights one_hot(std::size_t m, std::size_t index);

  const Vector& alpha() const noexcept { return alpha_; }
  double operator[](std::size_t v) const { return alpha_(static_cast<Eigen::Index>(v)); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(alpha_.size()); }

 private:
  Vector alpha_;
};

enum class InitMode { Classical, Random };

struct SolverConfig {
  int p = 2;
  double gamma = 5.0;
  double tol = 1e-6;
  int max_iter = 500;
  InitMode init = InitMode::Classical;
  std::uint64_t seed = 0;
  // When set, the weight update is skipped and these weights are used for
  // every sweep.
  std::optional<ViewWeights> fixed_weights;

  // Throws InvalidConfig / GammaBelowOne.
  void validate() const;
};

/// Sum over observed pairs i<j of (delta_ij - d_ij(X))^2.
double stress(const DistanceView& view, const Configuration& config);

/// Stress of every view against one configuration.
Vector per_view_stress(const MultiViewProblem& problem,
                       const Configuration& config);

/// Sum over views of alpha_v^gamma * stress_v.
double objective(const MultiViewProblem& problem, const ViewWeights& weights,
                 const Configuration& config, double gamma);

// alpha_v^gamma; 0^gamma = 0 for every gamma >= 1.
Vector weight_powers(const ViewWeights& weights, double gamma);

}  // namespace mvmds
