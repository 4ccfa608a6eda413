#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mvmds/metrics.hpp"

namespace mvmds {

LabeledEmbedding::LabeledEmbedding(Matrix coords, std::vector<int> class_ids)
    : x(std::move(coords)), labels(std::move(class_ids)) {
  if (static_cast<Eigen::Index>(labels.size()) != x.rows()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(labels.size()) + " labels for " +
                    std::to_string(x.rows()) + " points");
  }
}

RetrievalScores retrieval_scores(const LabeledEmbedding& emb) {
  const Eigen::Index n = emb.x.rows();
  if (n < 2) throw Error(ErrorCode::EmptyInput, "retrieval needs at least two points");

  std::map<int, int> class_size;
  for (int label : emb.labels) ++class_size[label];

  double nn = 0.0, ft = 0.0, st = 0.0, dcg = 0.0;
  int ranked_queries = 0;
  int singletons = 0;

  std::vector<std::pair<double, Eigen::Index>> ranking;
  ranking.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index q = 0; q < n; ++q) {
    ranking.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == q) continue;
      ranking.emplace_back((emb.x.row(q) - emb.x.row(j)).squaredNorm(), j);
    }
    std::sort(ranking.begin(), ranking.end());

    const int label = emb.labels[static_cast<std::size_t>(q)];
    auto relevant = [&](std::size_t rank) {
      return emb.labels[static_cast<std::size_t>(ranking[rank].second)] == label;
    };
    if (relevant(0)) nn += 1.0;

    const int others = class_size[label] - 1;
    if (others == 0) {
      ++singletons;
      continue;
    }
    ++ranked_queries;

    int hits_first = 0, hits_second = 0;
    double gain = 0.0;
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      if (!relevant(r)) continue;
      if (r < static_cast<std::size_t>(others)) ++hits_first;
      if (r < static_cast<std::size_t>(2 * others)) ++hits_second;
      gain += r == 0 ? 1.0 : 1.0 / std::log2(static_cast<double>(r + 1));
    }
    double ideal = 1.0;
    for (int r = 2; r <= others; ++r) ideal += 1.0 / std::log2(static_cast<double>(r));

    ft += static_cast<double>(hits_first) / others;
    st += std::min(1.0, static_cast<double>(hits_second) / others);
    dcg += gain / ideal;
  }

  RetrievalScores scores;
  scores.nn = nn / static_cast<double>(n);
  if (ranked_queries > 0) {
    scores.ft = ft / ranked_queries;
    scores.st = st / ranked_queries;
    scores.dcg = dcg / ranked_queries;
  }
  scores.singleton_queries = singletons;
  return scores;
}

}  // namespace mvmds
