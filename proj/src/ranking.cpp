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

#include "mvgcn/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "json.hpp"
#include "mvgcn/error.hpp"

namespace mvgcn {

std::string_view to_string(RankingMatrix m) {
  switch (m) {
    case RankingMatrix::kLaplacian:
      return "laplacian";
    case RankingMatrix::kSimilarity:
      return "similarity";
    case RankingMatrix::kShifted:
      return "shifted";
  }
  return "laplacian";
}

RankingMatrix ranking_matrix_from_string(std::string_view s) {
  if (s == "laplacian") return RankingMatrix::kLaplacian;
  if (s == "similarity") return RankingMatrix::kSimilarity;
  if (s == "shifted") return RankingMatrix::kShifted;
  throw ConfigError(
      "ranking-matrix must be `laplacian`, `similarity` or `shifted`, got `" +
                    std::string(s) + "`");
}

void RankingConfig::validate(Index n) const {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("ranking: beta must lie in (0, 1)");
  }
  if (num_centroids < 1 || num_centroids > n) {
    throw InvalidArgument("ranking: need 1 <= K <= n, got K=" +
                          std::to_string(num_centroids));
  }
  if (add_per_centroid < 0 || prune_per_centroid < 0) {
    throw InvalidArgument("ranking: Y and Z must be >= 0");
  }
  if (kmeans_restarts < 1) {
    throw InvalidArgument("ranking: kmeans_restarts must be >= 1");
  }
}

// ---------------------------------------------------------------------------
// k-means

namespace {

int nearest_center(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& p,
                   double* distance) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centers.rows(); ++c) {
    const double d = (centers.row(c) - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (distance) *distance = best_d;
  return best;
}

ClusteringResult lloyd(const Eigen::MatrixXd& points, Index k,
                       std::mt19937_64& rng, int max_iterations) {
  const Index n = points.rows();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // k-means++ seeding.
  Eigen::MatrixXd centers(k, points.cols());
  std::uniform_int_distribution<Index> first(0, n - 1);
  centers.row(0) = points.row(first(rng));
  Eigen::VectorXd d2(n);
  for (Index i = 0; i < n; ++i) {
    d2[i] = (points.row(i) - centers.row(0)).squaredNorm();
  }
  for (Index c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
      while (d2[pick] <= 0.0) --pick;
    }
    centers.row(c) = points.row(pick);
    for (Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(i) - centers.row(c)).squaredNorm());
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  Eigen::VectorXd dist(n);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const int c = nearest_center(centers, points.row(i), &dist[i]);
      if (c != labels[i]) {
        labels[i] = c;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: move it onto the point worst served by its center.
      Index far = 0;
      for (Index i = 1; i < n; ++i) {
        if (dist[i] > dist[far]) far = i;
      }
      centers.row(c) = points.row(far);
      dist[far] = 0.0;
      labels[far] = static_cast<int>(c);
    }
  }

  ClusteringResult r;
  r.labels = std::move(labels);
  r.centers = std::move(centers);
  r.inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    r.inertia += (points.row(i) - r.centers.row(r.labels[i])).squaredNorm();
  }
  return r;
}

}  // namespace

ClusteringResult KMeans::cluster(const Eigen::MatrixXd& points, Index k,
                                 std::uint64_t seed) const {
  if (k < 1 || k > points.rows()) {
    throw InvalidArgument("k-means: need 1 <= K <= number of points");
  }
  std::mt19937_64 rng(seed);
  ClusteringResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts_; ++r) {
    ClusteringResult candidate = lloyd(points, k, rng, max_iterations_);
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

std::vector<Vertex> select_centroids(const Eigen::MatrixXd& embedding, Index k,
                                     std::uint64_t seed, int restarts) {
  const Index n = embedding.rows();
  Eigen::MatrixXd points = embedding;
  for (Index i = 0; i < n; ++i) {
    const double norm = points.row(i).norm();
    if (norm > 0.0) points.row(i) /= norm;
  }
  require_finite(points, "centroid selection");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto row_less = [&](Index a, Index b) {
    for (Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  Index distinct = n > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (row_less(order[i - 1], order[i])) ++distinct;
  }
  if (k > distinct) {
    throw InvalidArgument("centroid selection: K=" + std::to_string(k) +
                          " exceeds " + std::to_string(distinct) +
                          " distinct embedding rows");
  }

  const ClusteringResult clusters = KMeans(restarts).cluster(points, k, seed);
  std::vector<Vertex> centroids(static_cast<std::size_t>(k), -1);
  std::vector<double> best(static_cast<std::size_t>(k),
                           std::numeric_limits<double>::infinity());
  for (Index i = 0; i < n; ++i) {
    const int c = clusters.labels[i];
    const double d = (points.row(i) - clusters.centers.row(c)).squaredNorm();
    if (d < best[c]) {
      best[c] = d;
      centroids[c] = static_cast<Vertex>(i);
    }
  }
  std::sort(centroids.begin(), centroids.end());
  return centroids;
}

std::vector<Vertex> select_centroids(const ModifiedLaplacian& lmod, Index k,
                                     std::uint64_t seed, int restarts) {
  return select_centroids(lmod.merged_basis, k, seed, restarts);
}

// ---------------------------------------------------------------------------
// Ranking

ManifoldRanker::ManifoldRanker(const Eigen::MatrixXd& lmod, double beta,
                               RankingMatrix matrix, double max_condition)
    : matrix_(matrix) {
  if (lmod.rows() != lmod.cols()) {
    throw InvalidArgument("ranking: matrix not square");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("ranking: beta must lie in (0, 1)");
  }
  Eigen::MatrixXd system;
  if (matrix == RankingMatrix::kLaplacian) {
    system = -beta * lmod;
  } else if (matrix == RankingMatrix::kSimilarity) {
    const Eigen::VectorXd eig = symmetric_eigenvalues(lmod);
    const double norm =
        eig.size() == 0 ? 0.0 : std::max(std::abs(eig[0]), std::abs(eig[eig.size() - 1]));
    const double scale = norm > 0.0 ? 1.0 / norm : 0.0;
    // I - beta (I - L / ||L||)
    system = (beta * scale) * lmod;
    system.diagonal().array() -= beta;
  } else {
    const Eigen::VectorXd eig = symmetric_eigenvalues(lmod);
    const double lo = eig.size() == 0 ? 0.0 : eig[0];
    const double span = eig.size() == 0 ? 0.0 : eig[eig.size() - 1] - lo;
    const double scale = span > 0.0 ? 1.0 / span : 0.0;
    // I - beta (I - (L - lo I) / span); S has spectrum in [0, 1].
    system = (beta * scale) * lmod;
    system.diagonal().array() -= beta * (1.0 + scale * lo);
  }
  system.diagonal().array() += 1.0;

  solver_.emplace(system);
  const double rcond = solver_->rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (solver_->singular() || !(condition_ <= max_condition)) {
    throw ConditioningError(
        "ranking: I - beta*M is singular or ill-conditioned (condition " +
            std::to_string(condition_) + " > " + std::to_string(max_condition) +
            "); reduce beta or use ranking-matrix=similarity",
        condition_);
  }
}

Eigen::VectorXd ManifoldRanker::rank(const Eigen::VectorXd& query) const {
  return solver_->solve(query);
}

Eigen::MatrixXd ManifoldRanker::rank_all(const Eigen::MatrixXd& queries) const {
  Eigen::MatrixXd f = solver_->solve(queries);
  require_finite(f, "ranking scores");
  return f;
}

Eigen::VectorXd manifold_rank(const Eigen::MatrixXd& lmod,
                              const Eigen::VectorXd& query, double beta,
                              RankingMatrix matrix, double max_condition) {
  if (query.size() != lmod.rows()) {
    throw InvalidArgument("ranking: query length differs from n");
  }
  return ManifoldRanker(lmod, beta, matrix, max_condition).rank(query);
}

// ---------------------------------------------------------------------------
// Augmentation

namespace {

std::pair<Vertex, Vertex> key(Vertex a, Vertex b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

MergedGraph augment_graph(const MultiViewGraph& g, const ModifiedLaplacian& lmod,
                          const RankingConfig& cfg) {
  const Index n = g.num_vertices();
  if (lmod.num_vertices() != n) {
    throw InvalidArgument("augment: modified Laplacian size differs from graph");
  }
  cfg.validate(n);
  const SparseSymGraph& base = g.view(0);

  MergedGraph out;
  out.centroids = select_centroids(lmod, cfg.num_centroids, cfg.seed,
                                   cfg.kmeans_restarts);

  std::optional<ManifoldRanker> ranker;
  try {
    ranker.emplace(lmod.matrix, cfg.beta, cfg.matrix, cfg.max_condition);
  } catch (const ConditioningError&) {
    if (cfg.matrix != RankingMatrix::kLaplacian || !cfg.fallback_to_similarity) {
      throw;
    }
    ranker.emplace(lmod.matrix, cfg.beta, RankingMatrix::kSimilarity,
                   cfg.max_condition);
  }
  out.matrix_used = ranker->matrix();
  out.condition_estimate = ranker->condition_estimate();

  const Index k = static_cast<Index>(out.centroids.size());
  Eigen::MatrixXd queries = Eigen::MatrixXd::Zero(n, k);
  for (Index i = 0; i < k; ++i) queries(out.centroids[i], i) = 1.0;
  out.scores = ranker->rank_all(queries);

  std::set<std::pair<Vertex, Vertex>> added_seen;
  std::set<std::pair<Vertex, Vertex>> pruned_seen;
  std::vector<Vertex> candidates;
  for (Index i = 0; i < k; ++i) {
    const Vertex c = out.centroids[i];
    const auto score = out.scores.col(i);

    candidates.clear();
    for (Vertex v = 0; v < n; ++v) {
      if (v != c && !base.has_edge(c, v)) candidates.push_back(v);
    }
    const auto take_add = std::min<std::size_t>(
        candidates.size(), static_cast<std::size_t>(cfg.add_per_centroid));
    std::partial_sort(candidates.begin(), candidates.begin() + take_add,
                      candidates.end(), [&](Vertex a, Vertex b) {
                        return score[a] != score[b] ? score[a] > score[b] : a < b;
                      });
    for (std::size_t j = 0; j < take_add; ++j) {
      const auto e = key(c, candidates[j]);
      if (added_seen.insert(e).second) out.salient.push_back({e.first, e.second, 1.0});
    }

    const auto neigh = base.neighbors(c);
    candidates.assign(neigh.begin(), neigh.end());
    const auto take_prune = std::min<std::size_t>(
        candidates.size(), static_cast<std::size_t>(cfg.prune_per_centroid));
    std::partial_sort(candidates.begin(), candidates.begin() + take_prune,
                      candidates.end(), [&](Vertex a, Vertex b) {
                        return score[a] != score[b] ? score[a] < score[b] : a < b;
                      });
    for (std::size_t j = 0; j < take_prune; ++j) {
      const auto e = key(c, candidates[j]);
      if (pruned_seen.insert(e).second) {
        out.pruned.push_back({e.first, e.second, *base.weight(e.first, e.second)});
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(base.num_edges() + out.salient.size());
  for (const Edge& e : base.edges()) {
    if (!pruned_seen.contains({e.u, e.v})) edges.push_back(e);
  }
  edges.insert(edges.end(), out.salient.begin(), out.salient.end());
  out.adjacency = SparseSymGraph(n, std::move(edges));

  check_augmentation(base, out);
  return out;
}

void check_augmentation(const SparseSymGraph& base, const MergedGraph& merged) {
  const auto edge_name = [](const Edge& e) {
    return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
  };
  if (merged.adjacency.num_vertices() != base.num_vertices()) {
    throw Error("augmentation contract: vertex count changed");
  }
  std::set<std::pair<Vertex, Vertex>> added;
  std::set<std::pair<Vertex, Vertex>> removed;
  for (const Edge& e : merged.salient) {
    if (e.u >= e.v) throw Error("augmentation contract: non-canonical E_s edge");
    if (base.has_edge(e.u, e.v)) {
      throw Error("augmentation contract: salient edge " + edge_name(e) +
                  " already in A_1");
    }
    added.insert({e.u, e.v});
  }
  for (const Edge& e : merged.pruned) {
    if (e.u >= e.v) throw Error("augmentation contract: non-canonical E_ns edge");
    if (!base.has_edge(e.u, e.v)) {
      throw Error("augmentation contract: pruned edge " + edge_name(e) +
                  " not in A_1");
    }
    removed.insert({e.u, e.v});
  }
  std::size_t expected = 0;
  for (const Edge& e : base.edges()) {
    if (removed.contains({e.u, e.v})) {
      if (merged.adjacency.has_edge(e.u, e.v)) {
        throw Error("augmentation contract: pruned edge " + edge_name(e) +
                    " still in A_mod");
      }
      continue;
    }
    const auto w = merged.adjacency.weight(e.u, e.v);
    if (!w || *w != e.w) {
      throw Error("augmentation contract: A_1 edge " + edge_name(e) +
                  " missing or reweighted in A_mod");
    }
    ++expected;
  }
  for (const auto& [u, v] : added) {
    if (!merged.adjacency.has_edge(u, v)) {
      throw Error("augmentation contract: salient edge missing from A_mod");
    }
  }
  expected += added.size();
  if (merged.adjacency.num_edges() != expected) {
    throw Error("augmentation contract: A_mod has " +
                std::to_string(merged.adjacency.num_edges()) +
                " edges, expected " + std::to_string(expected));
  }
}

void export_merged_graph(const std::filesystem::path& stem,
                         const MergedGraph& merged, const RankingConfig& cfg) {
  std::filesystem::path tsv = stem;
  tsv += ".tsv";
  std::filesystem::path sidecar = stem;
  sidecar += ".json";
  write_edge_list(tsv, merged.adjacency);

  const auto edges_json = [](const std::vector<Edge>& edges) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Edge& e : edges) arr.push_back({e.u, e.v});
    return arr;
  };
  nlohmann::json j;
  j["adjacency"] = tsv.filename().string();
  j["num_vertices"] = merged.adjacency.num_vertices();
  j["num_edges"] = merged.adjacency.num_edges();
  j["centroids"] = merged.centroids;
  j["salient_edges"] = edges_json(merged.salient);
  j["pruned_edges"] = edges_json(merged.pruned);
  j["ranking_matrix_used"] = std::string(to_string(merged.matrix_used));
  j["condition_estimate"] = merged.condition_estimate;
  j["config"] = {
      {"beta", cfg.beta},
      {"num_centroids", cfg.num_centroids},
      {"add_per_centroid", cfg.add_per_centroid},
      {"prune_per_centroid", cfg.prune_per_centroid},
      {"kmeans_restarts", cfg.kmeans_restarts},
      {"seed", cfg.seed},
      {"ranking_matrix", std::string(to_string(cfg.matrix))},
      {"fallback_to_similarity", cfg.fallback_to_similarity},
      {"max_condition", cfg.max_condition},
  };
  std::ofstream out(sidecar);
  if (!out) throw IoError(sidecar.string(), 0, "cannot open for writing");
  out << j.dump(2) << '\n';
}

}  // namespace mvgcn
