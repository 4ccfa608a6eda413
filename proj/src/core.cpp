#include "mvmds/core.hpp"

#include <cmath>
#include <sstream>

namespace mvmds {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::AsymmetryExceedsTolerance: return "AsymmetryExceedsTolerance";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::MaskShapeMismatch: return "MaskShapeMismatch";
    case ErrorCode::InvalidMask: return "InvalidMask";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::GammaBelowOne: return "GammaBelowOne";
    case ErrorCode::NegativeStress: return "NegativeStress";
    case ErrorCode::SingularUpdate: return "SingularUpdate";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::AllPairsMissing: return "AllPairsMissing";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::SingletonClass: return "SingletonClass";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

namespace {

std::string at(Eigen::Index i, Eigen::Index j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

}  // namespace

DistanceView::DistanceView(Matrix delta, Matrix mask)
    : delta_(std::move(delta)), mask_(std::move(mask)) {
  const Eigen::Index n = delta_.rows();
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (mask_(i, j) != 0.0) {
        ++observed_pairs_;
      } else {
        fully_observed_ = false;
      }
    }
  }
}

DistanceView validate_view(const Matrix& raw, const std::optional<Matrix>& mask) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorCode::NonSquare, "distance matrix is " +
                                          std::to_string(raw.rows()) + "x" +
                                          std::to_string(raw.cols()));
  }
  const Eigen::Index n = raw.rows();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "distance matrix is empty");
  if (mask && (mask->rows() != n || mask->cols() != n)) {
    throw Error(ErrorCode::MaskShapeMismatch,
                "mask is " + std::to_string(mask->rows()) + "x" +
                    std::to_string(mask->cols()) + ", expected " +
                    std::to_string(n) + "x" + std::to_string(n));
  }
  if (!raw.allFinite()) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (!std::isfinite(raw(i, j)))
          throw Error(ErrorCode::NonFiniteEntry, "entry " + at(i, j));
  }

  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double m = mask ? (*mask)(i, j) : 1.0;
      if (m != 0.0 && m != 1.0) {
        throw Error(ErrorCode::InvalidMask, "mask entry " + at(i, j) + " is not 0 or 1");
      }
      w(i, j) = w(j, i) = m;
    }
  }

  Matrix delta = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (w(i, j) == 0.0) continue;
      const double lower = raw(i, j);
      const double upper = raw(j, i);
      if (std::abs(lower - upper) > kSymmetryTolerance) {
        throw Error(ErrorCode::AsymmetryExceedsTolerance,
                    "entries " + at(i, j) + " and " + at(j, i) + " differ");
      }
      if (lower < 0.0 || upper < 0.0) {
        throw Error(ErrorCode::NegativeEntry, "entry " + at(i, j));
      }
      delta(i, j) = delta(j, i) = 0.5 * (lower + upper);
    }
  }
  return DistanceView(std::move(delta), std::move(w));
}

MultiViewProblem::MultiViewProblem(std::vector<DistanceView> views)
    : views_(std::move(views)) {
  if (views_.empty()) throw Error(ErrorCode::EmptyInput, "problem has no views");
  const Eigen::Index n = views_.front().n();
  for (std::size_t v = 1; v < views_.size(); ++v) {
    if (views_[v].n() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "view " + std::to_string(v) + " has " +
                      std::to_string(views_[v].n()) + " objects, expected " +
                      std::to_string(n));
    }
  }
}

bool MultiViewProblem::fully_observed() const noexcept {
  for (const auto& view : views_)
    if (!view.fully_observed()) return false;
  return true;
}

Configuration::Configuration(Matrix coords) : x(std::move(coords)) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::NonFiniteEntry, "configuration has non-finite coordinates");
  }
}

ViewWeights::ViewWeights(Vector alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() == 0) throw Error(ErrorCode::InvalidWeights, "empty weight vector");
  for (Eigen::Index v = 0; v < alpha_.size(); ++v) {
    if (!(alpha_(v) >= 0.0 && alpha_(v) <= 1.0)) {
      throw Error(ErrorCode::InvalidWeights,
                  "weight " + std::to_string(v) + " outside [0, 1]");
    }
  }
  if (std::abs(alpha_.sum() - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::InvalidWeights, "weights do not sum to 1");
  }
}

ViewWeights ViewWeights::uniform(std::size_t m) {
  return ViewWeights(Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m)));
}

ViewWeights ViewWeights::one_hot(std::size_t m, std::size_t index) {
  Vector alpha = Vector::Zero(static_cast<Eigen::Index>(m));
  alpha(static_cast<Eigen::Index>(index)) = 1.0;
  return ViewWeights(std::move(alpha));
}

void SolverConfig::validate() const {
  if (!(gamma >= 1.0)) {
    throw Error(ErrorCode::GammaBelowOne, "gamma must be >= 1, got " + std::to_string(gamma));
  }
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerance must be > 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidConfig, "max_iter must be >= 1");
}

double stress(const DistanceView& view, const Configuration& config) {
  if (config.n() != view.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "configuration has " + std::to_string(config.n()) +
                    " rows, view has " + std::to_string(view.n()));
  }
  const Eigen::Index n = view.n();
  double total = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (!view.observed(i, j)) continue;
      const double r = view.delta(i, j) - config.distance(i, j);
      total += r * r;
    }
  }
  return total;
}

Vector per_view_stress(const MultiViewProblem& problem, const Configuration& config) {
  Vector j(static_cast<Eigen::Index>(problem.m()));
  for (std::size_t v = 0; v < problem.m(); ++v) {
    j(static_cast<Eigen::Index>(v)) = stress(problem.view(v), config);
  }
  return j;
}

Vector weight_powers(const ViewWeights& weights, double gamma) {
  return weights.alpha().unaryExpr(
      [gamma](double a) { return a == 0.0 ? 0.0 : std::pow(a, gamma); });
}

double objective(const MultiViewProblem& problem, const ViewWeights& weights,
                 const Configuration& config, double gamma) {
  if (weights.size() != problem.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "weights have " + std::to_string(weights.size()) +
                    " entries for " + std::to_string(problem.m()) + " views");
  }
  if (!(gamma >= 1.0)) throw Error(ErrorCode::GammaBelowOne, "gamma must be >= 1");
  return weight_powers(weights, gamma).dot(per_view_stress(problem, config));
}

}  // namespace mvmds
