#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "mvmds/core.hpp"
#include "mvmds/synth.hpp"

using namespace mvmds;

namespace {

Matrix two_point(double d) {
  Matrix m(2, 2);
  m << 0, d, d, 0;
  return m;
}

Configuration points(std::initializer_list<std::pair<double, double>> pts) {
  Matrix x(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::Index i = 0;
  for (auto [a, b] : pts) {
    x(i, 0) = a;
    x(i, 1) = b;
    ++i;
  }
  return Configuration(x);
}

Matrix random_distance_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 5.0);
  Matrix d = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) d(i, j) = d(j, i) = u(rng);
  return d;
}

void expect_error(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(ValidateView, AcceptsSymmetric) {
  const DistanceView v = validate_view(two_point(1.0));
  EXPECT_EQ(v.n(), 2);
  EXPECT_EQ(v.delta(0, 1), 1.0);
  EXPECT_TRUE(v.fully_observed());
}

TEST(ValidateView, RejectsAsymmetry) {
  Matrix m(2, 2);
  m << 0, 1, 2, 0;
  expect_error(ErrorCode::AsymmetryExceedsTolerance, [&] { validate_view(m); });
}

TEST(ValidateView, SymmetrizesSmallAsymmetryAndZeroesDiagonal) {
  Matrix m(2, 2);
  m << 0.25, 1.0, 1.0 + 5e-10, 0.5;
  const DistanceView v = validate_view(m);
  EXPECT_DOUBLE_EQ(v.delta(0, 1), 1.0 + 2.5e-10);
  EXPECT_EQ(v.delta(0, 1), v.delta(1, 0));
  EXPECT_EQ(v.delta(0, 0), 0.0);
  EXPECT_EQ(v.delta(1, 1), 0.0);
}

TEST(ValidateView, ErrorPaths) {
  expect_error(ErrorCode::NonSquare, [] { validate_view(Matrix::Zero(2, 3)); });
  expect_error(ErrorCode::NegativeEntry, [] { validate_view(two_point(-1.0)); });
  expect_error(ErrorCode::NonFiniteEntry, [] { validate_view(two_point(std::nan(""))); });
  expect_error(ErrorCode::NonFiniteEntry,
               [] { validate_view(two_point(std::numeric_limits<double>::infinity())); });
  expect_error(ErrorCode::MaskShapeMismatch,
               [] { validate_view(two_point(1.0), Matrix::Ones(3, 3)); });
  Matrix bad_mask = Matrix::Ones(2, 2);
  bad_mask(1, 0) = 0.5;
  expect_error(ErrorCode::InvalidMask, [&] { validate_view(two_point(1.0), bad_mask); });
}

TEST(ValidateView, SixCitiesTable) {
  const DistanceView v = validate_view(six_cities().delta());
  EXPECT_EQ(v.n(), 6);
  EXPECT_EQ(v.delta(4, 5), 237.0);  // NY-WC
  EXPECT_EQ(v.delta(5, 4), 237.0);
}

TEST(ValidateView, MaskUsesLowerTriangleAndZeroesMaskedEntries) {
  Matrix d(3, 3);
  d << 0, 1, -7, 1, 0, 2, 9, 2, 0;  // (0,2)/(2,0) masked: asymmetric and negative
  Matrix w = Matrix::Ones(3, 3);
  w(2, 0) = 0.0;
  const DistanceView v = validate_view(d, w);
  EXPECT_FALSE(v.fully_observed());
  EXPECT_EQ(v.observed_pairs(), 2);
  EXPECT_FALSE(v.observed(0, 2));
  EXPECT_EQ(v.delta(0, 2), 0.0);
  EXPECT_EQ(v.delta(2, 0), 0.0);
}

TEST(ValidateView, Idempotent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix d = random_distance_matrix(7, rng);
    d(3, 1) += 4e-10;
    Matrix w = Matrix::Ones(7, 7);
    w(4, 2) = w(2, 4) = 0.0;
    const DistanceView once = validate_view(d, w);
    const DistanceView twice = validate_view(once.delta(), once.mask());
    EXPECT_EQ(once.delta(), twice.delta());
    EXPECT_EQ(once.mask(), twice.mask());
  }
}

TEST(Stress, ExactEmbeddingIsZero) {
  EXPECT_EQ(stress(validate_view(two_point(1.0)), points({{0, 0}, {1, 0}})), 0.0);
}

TEST(Stress, DirectSum) {
  EXPECT_DOUBLE_EQ(stress(validate_view(two_point(1.0)), points({{0, 0}, {3, 0}})), 4.0);
}

TEST(Stress, MaskedPairExcluded) {
  const DistanceView v = validate_view(two_point(1.0), Matrix::Zero(2, 2));
  EXPECT_EQ(stress(v, points({{0, 0}, {3, 0}})), 0.0);
}

TEST(Stress, DimensionMismatch) {
  expect_error(ErrorCode::DimensionMismatch,
               [] { stress(validate_view(two_point(1.0)), points({{0, 0}, {1, 0}, {2, 0}})); });
}

TEST(Stress, RigidMotionInvariance) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8;
    const DistanceView view = validate_view(random_distance_matrix(n, rng));
    Matrix x(n, 3);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 3; ++k) x(i, k) = g(rng);
    Matrix a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) a(i, k) = g(rng);
    const Matrix rot = Eigen::HouseholderQR<Matrix>(a).householderQ();
    Eigen::RowVectorXd t(3);
    t << g(rng) * 10, g(rng) * 10, g(rng) * 10;
    const double s0 = stress(view, Configuration(x));
    const double s1 = stress(view, Configuration((x * rot).rowwise() + t));
    EXPECT_LE(std::abs(s0 - s1), 1e-9 * (1 + s0));
  }
}

TEST(Stress, ZeroIffDistancesMatch) {
  const Configuration x = points({{0, 0}, {3, 0}, {0, 4}});
  Matrix d(3, 3);
  d << 0, 3, 4, 3, 0, 5, 4, 5, 0;
  EXPECT_NEAR(stress(validate_view(d), x), 0.0, 1e-24);
  d(1, 2) = d(2, 1) = 5.5;
  EXPECT_GT(stress(validate_view(d), x), 0.0);
}

TEST(Objective, SingleViewEqualsStress) {
  const DistanceView v = validate_view(two_point(1.0));
  const MultiViewProblem p({v});
  const Configuration x = points({{0, 0}, {3, 0}});
  for (double g : {1.0, 2.0, 7.5}) {
    EXPECT_DOUBLE_EQ(objective(p, ViewWeights::uniform(1), x, g), stress(v, x));
  }
}

TEST(Objective, DuplicatedViewsHalfWeights) {
  const DistanceView v = validate_view(two_point(1.0));
  const MultiViewProblem p({v, v});
  const Configuration x = points({{0, 0}, {3, 0}});
  // 2 * 0.25 * stress
  EXPECT_DOUBLE_EQ(objective(p, ViewWeights::uniform(2), x, 2.0), 0.5 * stress(v, x));
}

TEST(Objective, ZeroWeightAnnihilatesView) {
  const MultiViewProblem p({validate_view(two_point(1.0)), validate_view(two_point(9.0))});
  const Configuration x = points({{0, 0}, {3, 0}});
  EXPECT_DOUBLE_EQ(objective(p, ViewWeights::one_hot(2, 0), x, 2.0), 4.0);
}

TEST(Objective, UniformWeightsMatchAveragedMatrix) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 9, m = 3;
    const double gamma = 1.0 + trial * 0.7;
    std::vector<DistanceView> views;
    Matrix mean = Matrix::Zero(n, n);
    std::vector<Matrix> raw;
    for (int v = 0; v < m; ++v) {
      raw.push_back(random_distance_matrix(n, rng));
      views.push_back(validate_view(raw.back()));
      mean += raw.back() / m;
    }
    const MultiViewProblem p(views);
    Matrix x(n, 2);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = g(rng);
      x(i, 1) = g(rng);
    }
    const Configuration cfg(x);
    const double c = std::pow(1.0 / m, gamma);
    double spread = 0.0;
    for (int v = 0; v < m; ++v)
      for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) spread += std::pow(raw[v](i, j) - mean(i, j), 2);
    const double lhs = objective(p, ViewWeights::uniform(m), cfg, gamma);
    const double rhs = m * c * stress(validate_view(mean), cfg) + c * spread;
    EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(lhs)));
  }
}

TEST(ViewWeightsTest, Invariants) {
  expect_error(ErrorCode::InvalidWeights, [] { ViewWeights(Vector::Constant(2, 0.6)); });
  Vector neg(2);
  neg << 1.5, -0.5;
  expect_error(ErrorCode::InvalidWeights, [&] { ViewWeights w(neg); });
  EXPECT_NO_THROW(ViewWeights::uniform(7));
}

TEST(SolverConfigTest, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.gamma = 0.5;
  expect_error(ErrorCode::GammaBelowOne, [&] { cfg.validate(); });
  cfg.gamma = 1.0;
  cfg.p = 0;
  expect_error(ErrorCode::InvalidConfig, [&] { cfg.validate(); });
}

TEST(MultiViewProblemTest, DimensionMismatch) {
  expect_error(ErrorCode::DimensionMismatch, [] {
    MultiViewProblem({validate_view(two_point(1.0)), validate_view(Matrix::Zero(3, 3))});
  });
  expect_error(ErrorCode::EmptyInput, [] { MultiViewProblem(std::vector<DistanceView>{}); });
}
