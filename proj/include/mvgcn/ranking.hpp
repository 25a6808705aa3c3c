// Copyright 2026 The mvgcn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Manifold ranking over the merged Laplacian and salient-edge augmentation
// of the most informative view.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvgcn/fusion.hpp"
#include "mvgcn/graph.hpp"
#include "mvgcn/linalg.hpp"

namespace mvgcn {

/// Which matrix enters f* = (I - beta M)^{-1} q.
enum class RankingMatrix {
  kLaplacian,   // M = L_mod as written
  kSimilarity,  // M = I - L_mod / ||L_mod||_2
  kShifted,     // M = I - (L_mod - l_min I) / (l_max - l_min)
};

std::string_view to_string(RankingMatrix m);
RankingMatrix ranking_matrix_from_string(std::string_view s);

struct RankingConfig {
  double beta = 0.99;
  Index num_centroids = 10;
  Index add_per_centroid = 5;
  Index prune_per_centroid = 5;
  int kmeans_restarts = 10;
  std::uint64_t seed = 0;
  RankingMatrix matrix = RankingMatrix::kLaplacian;
  /// Retry with kSimilarity when the Laplacian system is ill-conditioned.
  bool fallback_to_similarity = true;
  double max_condition = 1e12;

  void validate(Index n) const;
};

struct ClusteringResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // K x dim
  double inertia = 0.0;
};

/// Clustering backend for centroid selection.
class Clusterer {
 public:
  virtual ~Clusterer() = default;
  virtual ClusteringResult cluster(const Eigen::MatrixXd& points, Index k,
                                   std::uint64_t seed) const = 0;
};

/// Lloyd iterations from k-means++ seeds; best of `restarts` by inertia.
class KMeans final : public Clusterer {
 public:
  explicit KMeans(int restarts = 10, int max_iterations = 300)
      : restarts_(restarts), max_iterations_(max_iterations) {}

  ClusteringResult cluster(const Eigen::MatrixXd& points, Index k,
                           std::uint64_t seed) const override;

 private:
  int restarts_;
  int max_iterations_;
};

/// Clusters the rows of `embedding` (normalized to unit length, zero rows
/// kept at zero) into K groups and returns, per group, the member nearest
/// the group mean. Output is sorted ascending. Throws InvalidArgument when K
/// exceeds the number of distinct rows.
std::vector<Vertex> select_centroids(const Eigen::MatrixXd& embedding, Index k,
                                     std::uint64_t seed, int restarts = 10);
std::vector<Vertex> select_centroids(const ModifiedLaplacian& lmod, Index k,
                                     std::uint64_t seed, int restarts = 10);

/// Factors I - beta M once and answers ranking queries against it.
class ManifoldRanker {
 public:
  /// Throws ConditioningError when the system is singular or its condition
  /// estimate exceeds `max_condition`.
  ManifoldRanker(const Eigen::MatrixXd& lmod, double beta, RankingMatrix matrix,
                 double max_condition = 1e12);

  Eigen::VectorXd rank(const Eigen::VectorXd& query) const;
  /// One query per column.
  Eigen::MatrixXd rank_all(const Eigen::MatrixXd& queries) const;

  double condition_estimate() const { return condition_; }
  RankingMatrix matrix() const { return matrix_; }

 private:
  RankingMatrix matrix_;
  std::optional<SymmetricIndefiniteSolver> solver_;
  double condition_ = 0.0;
};

/// f* = (I - beta M)^{-1} q by symmetric solve.
Eigen::VectorXd manifold_rank(const Eigen::MatrixXd& lmod,
                              const Eigen::VectorXd& query, double beta,
                              RankingMatrix matrix = RankingMatrix::kLaplacian,
                              double max_condition = 1e12);

struct MergedGraph {
  SparseSymGraph adjacency;      // A_mod
  std::vector<Edge> salient;     // E_s, added
  std::vector<Edge> pruned;      // E_ns, removed
  std::vector<Vertex> centroids;
  Eigen::MatrixXd scores;        // n x K, column i ranks centroid i
  RankingMatrix matrix_used = RankingMatrix::kLaplacian;
  double condition_estimate = 0.0;
};

/// Ranks every vertex against each centroid, adds the Y best-ranked
/// non-neighbors and prunes the Z worst-ranked view-0 neighbors. Score ties
/// break by ascending vertex index. The result is checked with
/// check_augmentation before it is returned.
MergedGraph augment_graph(const MultiViewGraph& g, const ModifiedLaplacian& lmod,
                          const RankingConfig& cfg);

/// Post-hoc contract: E_s disjoint from A_1, E_ns inside A_1, and
/// A_mod == (A_1 + E_s) - E_ns. Throws Error describing the first violation.
void check_augmentation(const SparseSymGraph& base, const MergedGraph& merged);

/// Writes `<stem>.tsv` (A_mod) and `<stem>.json` (centroids, E_s, E_ns,
/// config).
void export_merged_graph(const std::filesystem::path& stem,
                         const MergedGraph& merged, const RankingConfig& cfg);

}  // namespace mvgcn
