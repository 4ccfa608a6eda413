#pragma once

// Retrieval (NN / FT / ST / DCG) and clustering (k-means, ACC / NMI / Purity)
// evaluation of labeled embeddings.

#include <cstdint>
#include <vector>

#include "mvmds/core.hpp"

namespace mvmds {

struct LabeledEmbedding {
  Matrix x;
  std::vector<int> labels;

  LabeledEmbedding(Matrix coords, std::vector<int> class_ids);
};

struct RetrievalScores {
  double nn = 0.0;
  double ft = 0.0;
  double st = 0.0;
  double dcg = 0.0;
  // Queries whose class has no other member; they count towards NN only.
  int singleton_queries = 0;
};

/// Mean retrieval scores over every point used as a query against all other
/// points, ranked by Euclidean distance with ties broken by ascending index.
///
/// For a query with class size C: NN is 1 when the nearest point shares its
/// class; FT and ST are the fraction of the C-1 relevant points found in the
/// top C-1 and top 2(C-1); DCG is the binary-relevance DCG of the full ranking
/// over the ideal DCG with C-1 relevant points.
RetrievalScores retrieval_scores(const LabeledEmbedding& emb);

struct KMeansResult {
  std::vector<int> assignment;
  Matrix centroids;
  double wcss = 0.0;
};

/// Lloyd's algorithm from k-means++ seeds; the best of `restarts` runs by
/// within-cluster sum of squares. An empty cluster is refilled with the point
/// farthest from its current centroid.
KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int restarts = 10);

struct ClusteringScores {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

/// ACC uses the best one-to-one cluster/class matching (Hungarian algorithm);
/// NMI is I(pred; truth) / sqrt(H(pred) H(truth)) with 0/0 taken as 0.
ClusteringScores clustering_scores(const std::vector<int>& pred,
                                   const std::vector<int>& truth);

/// Maximum-weight perfect matching on a rectangular benefit matrix; returns,
/// for each row, its matched column or -1 when there are more rows than columns.
std::vector<int> max_weight_assignment(const Matrix& benefit);

}  // namespace mvmds
