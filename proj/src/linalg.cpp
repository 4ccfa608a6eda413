#include <algorithm>
#include <cmath>

#include "mvmds/solver.hpp"

namespace mvmds {

Matrix pseudoinverse(const Matrix& v) {
  if (v.rows() != v.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "pseudoinverse needs a square matrix");
  }
  if (v.size() == 0) return v;
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::AsymmetryExceedsTolerance, "pseudoinverse input is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(v);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "symmetric eigendecomposition did not converge");
  }
  const Vector& lambda = eig.eigenvalues();
  const double lambda_max = lambda.cwiseAbs().maxCoeff();
  if (lambda_max == 0.0) return Matrix::Zero(v.rows(), v.cols());

  const double cutoff = 1e-10 * lambda_max;
  Vector inv = lambda.unaryExpr(
      [cutoff](double l) { return std::abs(l) < cutoff ? 0.0 : 1.0 / l; });
  const Matrix& q = eig.eigenvectors();
  return q * inv.asDiagonal() * q.transpose();
}

Matrix classical_mds(const Matrix& delta, int p) {
  if (delta.rows() != delta.cols()) {
    throw Error(ErrorCode::NonSquare, "classical MDS needs a square matrix");
  }
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be >= 1");
  const Eigen::Index n = delta.rows();
  Matrix coords = Matrix::Zero(n, p);
  if (n == 0) return coords;

  const Matrix centering =
      Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  Matrix gram = -0.5 * centering * delta.cwiseProduct(delta) * centering;
  gram = 0.5 * (gram + gram.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "classical MDS eigendecomposition did not converge");
  }
  // Eigenvalues come back ascending.
  const Eigen::Index used = std::min<Eigen::Index>(p, n);
  for (Eigen::Index k = 0; k < used; ++k) {
    const Eigen::Index src = n - 1 - k;
    const double lambda = std::max(0.0, eig.eigenvalues()(src));
    Vector u = eig.eigenvectors().col(src);
    // Fix the sign so the largest-magnitude component is positive.
    Eigen::Index pivot = 0;
    u.cwiseAbs().maxCoeff(&pivot);
    if (u(pivot) < 0.0) u = -u;
    coords.col(k) = u * std::sqrt(lambda);
  }
  return coords;
}

}  // namespace mvmds
