#include "mvmds/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mvmds {

namespace {

void check_weights(const MultiViewProblem& problem, const ViewWeights& weights,
                   double gamma) {
  if (weights.size() != problem.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "weights have " + std::to_string(weights.size()) +
                    " entries for " + std::to_string(problem.m()) + " views");
  }
  if (!(gamma >= 1.0)) throw Error(ErrorCode::GammaBelowOne, "gamma must be >= 1");
}

// alpha_v^gamma divided by the largest of them, computed in log space. The
// majorization step is invariant to a common positive factor on all view
// coefficients, and the rescaling keeps it well defined when alpha^gamma
// underflows for large gamma.
Vector relative_powers(const ViewWeights& weights, double gamma) {
  const Vector& alpha = weights.alpha();
  const double top = alpha.maxCoeff();
  return alpha.unaryExpr([gamma, top](double a) {
    return a == 0.0 ? 0.0 : std::exp(gamma * (std::log(a) - std::log(top)));
  });
}

Matrix v_from_coefficients(const MultiViewProblem& problem, const Vector& coeff) {
  const Eigen::Index n = problem.n();
  Matrix v = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < problem.m(); ++k) {
    const double c = coeff(static_cast<Eigen::Index>(k));
    if (c == 0.0) continue;
    v.noalias() -= c * problem.view(k).mask();
  }
  v.diagonal().setZero();
  v.diagonal() = -v.rowwise().sum();
  return v;
}

Matrix b_from_coefficients(const MultiViewProblem& problem, const Vector& coeff,
                           const Configuration& z) {
  const Eigen::Index n = problem.n();
  Matrix b = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = z.distance(i, j);
      if (d == 0.0) continue;
      double numerator = 0.0;
      for (std::size_t k = 0; k < problem.m(); ++k) {
        const auto& view = problem.view(k);
        if (!view.observed(i, j)) continue;
        numerator += coeff(static_cast<Eigen::Index>(k)) * view.delta(i, j);
      }
      b(i, j) = b(j, i) = -numerator / d;
    }
  }
  b.diagonal() = -b.rowwise().sum();
  return b;
}

void check_z(const MultiViewProblem& problem, const Configuration& z) {
  if (z.n() != problem.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "configuration has " + std::to_string(z.n()) + " rows, problem has " +
                    std::to_string(problem.n()) + " objects");
  }
}

bool shares_one_mask(const MultiViewProblem& problem) {
  for (std::size_t k = 1; k < problem.m(); ++k)
    if (problem.view(k).mask() != problem.view(0).mask()) return false;
  return true;
}

// Precomputed pieces reused across sweeps of one solve.
class MajorizationStep {
 public:
  explicit MajorizationStep(const MultiViewProblem& problem)
      : problem_(problem),
        complete_(problem.fully_observed()),
        shared_mask_(shares_one_mask(problem)) {
    if (!complete_ && shared_mask_) {
      // V = (sum_v c_v) L for the common mask Laplacian L.
      Vector ones = Vector::Zero(static_cast<Eigen::Index>(problem.m()));
      ones(0) = 1.0;
      laplacian_pinv_ = invert(v_from_coefficients(problem, ones));
    }
  }

  Configuration operator()(const ViewWeights& weights, const Configuration& z,
                           double gamma) const {
    const Vector coeff = relative_powers(weights, gamma);
    const double total = coeff.sum();
    const Matrix b = b_from_coefficients(problem_, coeff, z);
    if (complete_) {
      return Configuration(b * z.x / (static_cast<double>(problem_.n()) * total));
    }
    if (shared_mask_) {
      return Configuration(laplacian_pinv_ * (b * z.x) / total);
    }
    return Configuration(invert(v_from_coefficients(problem_, coeff)) * (b * z.x));
  }

 private:
  static Matrix invert(const Matrix& v) {
    try {
      return pseudoinverse(v);
    } catch (const Error& e) {
      throw Error(ErrorCode::SingularUpdate, e.what());
    }
  }

  const MultiViewProblem& problem_;
  bool complete_;
  bool shared_mask_;
  Matrix laplacian_pinv_;
};

double mean_observed(const MultiViewProblem& problem) {
  double sum = 0.0;
  long count = 0;
  for (const auto& view : problem.views()) {
    for (Eigen::Index i = 1; i < view.n(); ++i)
      for (Eigen::Index j = 0; j < i; ++j)
        if (view.observed(i, j)) {
          sum += view.delta(i, j);
          ++count;
        }
  }
  if (count == 0) throw Error(ErrorCode::AllPairsMissing, "no observed pairs in any view");
  return sum / static_cast<double>(count);
}

}  // namespace

Matrix build_v_matrix(const MultiViewProblem& problem, const ViewWeights& weights,
                      double gamma) {
  check_weights(problem, weights, gamma);
  return v_from_coefficients(problem, weight_powers(weights, gamma));
}

Matrix build_b_matrix(const MultiViewProblem& problem, const ViewWeights& weights,
                      const Configuration& z, double gamma) {
  check_weights(problem, weights, gamma);
  check_z(problem, z);
  return b_from_coefficients(problem, weight_powers(weights, gamma), z);
}

Configuration update_configuration(const MultiViewProblem& problem,
                                   const ViewWeights& weights,
                                   const Configuration& z, double gamma) {
  check_weights(problem, weights, gamma);
  check_z(problem, z);
  return MajorizationStep(problem)(weights, z, gamma);
}

ViewWeights update_weights(const Vector& per_view_stress, double gamma) {
  if (!(gamma >= 1.0)) throw Error(ErrorCode::GammaBelowOne, "gamma must be >= 1");
  const Eigen::Index m = per_view_stress.size();
  if (m == 0) throw Error(ErrorCode::EmptyInput, "no view stresses");
  for (Eigen::Index v = 0; v < m; ++v) {
    if (!std::isfinite(per_view_stress(v))) {
      throw Error(ErrorCode::NonFiniteEntry, "stress of view " + std::to_string(v));
    }
    if (per_view_stress(v) < 0.0) {
      throw Error(ErrorCode::NegativeStress, "stress of view " + std::to_string(v));
    }
  }

  if (gamma == 1.0) {
    Eigen::Index best = 0;
    for (Eigen::Index v = 1; v < m; ++v)
      if (per_view_stress(v) < per_view_stress(best)) best = v;
    return ViewWeights::one_hot(static_cast<std::size_t>(m), static_cast<std::size_t>(best));
  }

  const double eps = 1e-12 * std::max(1.0, per_view_stress.maxCoeff());
  Vector alpha = Vector::Zero(m);
  if ((per_view_stress.array() <= eps).any()) {
    // Limit of the closed form as the smallest stresses go to zero.
    for (Eigen::Index v = 0; v < m; ++v)
      if (per_view_stress(v) <= eps) alpha(v) = 1.0;
  } else {
    const double exponent = 1.0 / (1.0 - gamma);
    Vector log_terms = per_view_stress.array().log() * exponent;
    const double top = log_terms.maxCoeff();
    alpha = (log_terms.array() - top).exp();
  }
  alpha /= alpha.sum();
  return ViewWeights(std::move(alpha));
}

Configuration initialize(const MultiViewProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = problem.n();

  if (cfg.init == InitMode::Random) {
    const double scale = mean_observed(problem) / std::sqrt(static_cast<double>(cfg.p));
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(n, cfg.p);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < cfg.p; ++k) x(i, k) = normal(rng) * scale;
    return Configuration(std::move(x));
  }

  // Per-pair mean over the views that observe the pair; pairs no view
  // observes take the global observed mean.
  const double fill = mean_observed(problem);
  Matrix mean = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      double sum = 0.0;
      int count = 0;
      for (const auto& view : problem.views()) {
        if (!view.observed(i, j)) continue;
        sum += view.delta(i, j);
        ++count;
      }
      mean(i, j) = mean(j, i) = count > 0 ? sum / count : fill;
    }
  }
  return Configuration(classical_mds(mean, cfg.p));
}

SolveReport solve(const MultiViewProblem& problem, const SolverConfig& cfg,
                  const IterationObserver& observer) {
  cfg.validate();
  if (cfg.fixed_weights && cfg.fixed_weights->size() != problem.m()) {
    throw Error(ErrorCode::DimensionMismatch, "fixed weights do not match the view count");
  }

  const MajorizationStep step(problem);
  ViewWeights alpha = cfg.fixed_weights ? *cfg.fixed_weights : ViewWeights::uniform(problem.m());
  Configuration z = initialize(problem, cfg);

  SolveReport report;
  report.initial_objective = objective(problem, alpha, z, cfg.gamma);
  double previous = report.initial_objective;

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    Configuration x = step(alpha, z, cfg.gamma);
    Vector stresses = per_view_stress(problem, x);
    if (!cfg.fixed_weights) alpha = update_weights(stresses, cfg.gamma);
    const double current = weight_powers(alpha, cfg.gamma).dot(stresses);

    report.trace.push_back(IterationRecord{iter, current, alpha, std::move(stresses)});
    if (observer) observer(report.trace.back(), x);
    z = std::move(x);
    report.iterations_used = iter;

    const double relative =
        (previous - current) / std::max(previous, 1e-30);
    if (relative <= cfg.tol) {
      report.converged = true;
      break;
    }
    previous = current;
  }

  report.config_out = std::move(z);
  report.weights_out = alpha;
  return report;
}

SolveReport solve_single_view(const DistanceView& view, const SolverConfig& cfg,
                              const IterationObserver& observer) {
  return solve(MultiViewProblem({view}), cfg, observer);
}

}  // namespace mvmds
