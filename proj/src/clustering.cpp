#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "mvmds/metrics.hpp"
#include "mvmds/synth.hpp"

namespace mvmds {

namespace {

struct Lloyd {
  const Matrix& x;
  int k;

  double assign(const Matrix& centroids, std::vector<int>& assignment) const {
    double wcss = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (x.row(i) - centroids.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      assignment[static_cast<std::size_t>(i)] = arg;
      wcss += best;
    }
    return wcss;
  }

  // Recomputes centroids; empty clusters take the point farthest from its
  // centroid.
  void update(Matrix& centroids, std::vector<int>& assignment) const {
    for (;;) {
      std::vector<int> count(static_cast<std::size_t>(k), 0);
      for (int a : assignment) ++count[static_cast<std::size_t>(a)];
      auto empty = std::find(count.begin(), count.end(), 0);
      if (empty == count.end()) break;

      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int a = assignment[static_cast<std::size_t>(i)];
        if (count[static_cast<std::size_t>(a)] < 2) continue;
        const double d = (x.row(i) - centroids.row(a)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      const int target = static_cast<int>(empty - count.begin());
      assignment[static_cast<std::size_t>(far)] = target;
      centroids.row(target) = x.row(far);
    }
    centroids.setZero();
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const int a = assignment[static_cast<std::size_t>(i)];
      centroids.row(a) += x.row(i);
      ++count[static_cast<std::size_t>(a)];
    }
    for (int c = 0; c < k; ++c) centroids.row(c) /= count[static_cast<std::size_t>(c)];
  }
};

Matrix plus_plus_seeds(const Matrix& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  Matrix centroids(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centroids.row(0) = x.row(first(rng));
  Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    for (Eigen::Index i = 0; i < n; ++i)
      nearest(i) = std::min(nearest(i), (x.row(i) - centroids.row(c - 1)).squaredNorm());
    const double total = nearest.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= nearest(i);
        if (target < 0.0 && nearest(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centroids.row(c) = x.row(pick);
  }
  return centroids;
}

double entropy(const std::map<int, int>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int restarts) {
  const Eigen::Index n = x.rows();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(k) + " for " +
                                            std::to_string(n) + " points");
  }
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be >= 1");

  constexpr int kMaxLloydIterations = 300;
  const Lloyd lloyd{x, k};
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    Matrix centroids = plus_plus_seeds(x, k, rng);
    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    lloyd.assign(centroids, assignment);
    for (int it = 0; it < kMaxLloydIterations; ++it) {
      lloyd.update(centroids, assignment);
      std::vector<int> next(assignment.size());
      lloyd.assign(centroids, next);
      if (next == assignment) break;
      assignment = std::move(next);
    }
    lloyd.update(centroids, assignment);
    double wcss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      wcss += (x.row(i) - centroids.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();

    if (wcss < best.wcss) {
      best.assignment = std::move(assignment);
      best.centroids = std::move(centroids);
      best.wcss = wcss;
    }
  }
  return best;
}

std::vector<int> max_weight_assignment(const Matrix& benefit) {
  const int rows = static_cast<int>(benefit.rows());
  const int cols = static_cast<int>(benefit.cols());
  const int n = std::max(rows, cols);
  if (n == 0) return {};
  const double top = benefit.size() ? benefit.maxCoeff() : 0.0;

  // Shortest augmenting path Hungarian method on the 1-indexed square cost
  // matrix top - benefit, padded with zeros.
  auto cost = [&](int i, int j) {
    if (i > rows || j > cols) return 0.0;
    return top - benefit(i - 1, j - 1);
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= n; ++j) {
    const int i = match[j];
    if (i >= 1 && i <= rows && j <= cols) result[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return result;
}

ClusteringScores clustering_scores(const std::vector<int>& pred,
                                   const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(pred.size()) +
                                               " predictions for " +
                                               std::to_string(truth.size()) + " labels");
  }
  if (pred.empty()) throw Error(ErrorCode::EmptyInput, "no points to score");

  std::map<int, int> cluster_index, class_index;
  for (int c : pred) cluster_index.emplace(c, 0);
  for (int c : truth) class_index.emplace(c, 0);
  int next = 0;
  for (auto& [id, idx] : cluster_index) idx = next++;
  next = 0;
  for (auto& [id, idx] : class_index) idx = next++;

  Matrix confusion = Matrix::Zero(static_cast<Eigen::Index>(cluster_index.size()),
                                  static_cast<Eigen::Index>(class_index.size()));
  std::map<int, int> pred_counts, truth_counts;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    confusion(cluster_index[pred[i]], class_index[truth[i]]) += 1.0;
    ++pred_counts[pred[i]];
    ++truth_counts[truth[i]];
  }
  const double n = static_cast<double>(pred.size());

  ClusteringScores scores;
  const std::vector<int> matching = max_weight_assignment(confusion);
  double matched = 0.0;
  for (std::size_t r = 0; r < matching.size(); ++r)
    if (matching[r] >= 0) matched += confusion(static_cast<Eigen::Index>(r), matching[r]);
  scores.acc = matched / n;

  scores.purity = confusion.rowwise().maxCoeff().sum() / n;

  double mutual = 0.0;
  for (Eigen::Index r = 0; r < confusion.rows(); ++r) {
    const double pr = confusion.row(r).sum() / n;
    for (Eigen::Index c = 0; c < confusion.cols(); ++c) {
      const double joint = confusion(r, c) / n;
      if (joint == 0.0) continue;
      const double pc = confusion.col(c).sum() / n;
      mutual += joint * std::log(joint / (pr * pc));
    }
  }
  const double denom = std::sqrt(entropy(pred_counts, n) * entropy(truth_counts, n));
  scores.nmi = denom > 0.0 ? std::clamp(mutual / denom, 0.0, 1.0) : 0.0;
  return scores;
}

}  // namespace mvmds
