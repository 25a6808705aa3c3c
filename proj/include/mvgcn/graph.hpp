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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mvgcn {

using Vertex = std::int32_t;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Throws InvalidArgument naming `what` if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m,
                    std::string_view what);

/// One undirected edge. Stored canonically with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph on vertices [0, n). Each edge is stored once
/// (u < v) and stands for both directions. Immutable after construction.
class SparseSymGraph {
 public:
  SparseSymGraph() = default;

  /// Canonicalizes (u, v) order and sorts. Rejects self-loops, duplicate
  /// pairs, out-of-range indices, and non-positive or non-finite weights.
  SparseSymGraph(Index n, std::vector<Edge> edges);

  Index num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  bool has_edge(Vertex u, Vertex v) const;
  std::optional<double> weight(Vertex u, Vertex v) const;

  /// Neighbors of u in ascending order.
  std::span<const Vertex> neighbors(Vertex u) const;
  Index degree_count(Vertex u) const;

  /// Full symmetric adjacency (both triangles).
  SparseMatrix adjacency() const;

  friend bool operator==(const SparseSymGraph& a, const SparseSymGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Index> offsets_;
  std::vector<Vertex> neighbors_;
};

/// Shared vertex set with an ordered list of views. View 0 is the most
/// informative layer and is the one augmented by the ranking stage.
class MultiViewGraph {
 public:
  MultiViewGraph() = default;
  explicit MultiViewGraph(std::vector<SparseSymGraph> views);

  Index num_vertices() const { return n_; }
  std::size_t num_views() const { return views_.size(); }
  const SparseSymGraph& view(std::size_t i) const { return views_.at(i); }
  std::span<const SparseSymGraph> views() const { return views_; }

 private:
  Index n_ = 0;
  std::vector<SparseSymGraph> views_;
};

/// Weighted degree of every vertex; isolated vertices get 0.
Eigen::VectorXd degree_vector(const SparseSymGraph& g);

/// L = D^{-1/2} (D - W) D^{-1/2}, with D^{-1/2} = 0 on isolated vertices so
/// their rows and columns are zero.
SparseMatrix normalized_laplacian(const SparseSymGraph& g);

/// First-order GCN propagation operator D~^{-1/2} (A + I) D~^{-1/2}.
SparseMatrix renormalized_propagation(const SparseSymGraph& g);

/// Edge present iff present in any view; weight is the maximum across views.
SparseSymGraph union_views(const MultiViewGraph& g);

struct EdgeListOptions {
  /// Keep the third column as weight. When false every edge gets weight 1.
  bool keep_weights = false;
  /// Vertex count to use when the file has no `n=` header.
  std::optional<Index> num_vertices;
};

/// Parses the TSV edge-list format (`n=<count>` header, `u<TAB>v[<TAB>w]`
/// lines, `#` comments). Self-loops are dropped; everything else malformed
/// is an IoError with file and line.
SparseSymGraph read_edge_list(const std::filesystem::path& path,
                              const EdgeListOptions& options = {});

void write_edge_list(const std::filesystem::path& path,
                     const SparseSymGraph& g);

}  // namespace mvgcn
