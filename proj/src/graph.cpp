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

#include "mvgcn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "mvgcn/error.hpp"
#include "text_util.hpp"

namespace mvgcn {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m,
                    std::string_view what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

SparseSymGraph::SparseSymGraph(Index n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw InvalidArgument("graph: negative vertex count");
  for (Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InvalidArgument("graph: edge (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + ") out of range for n=" +
                            std::to_string(n));
    }
    if (e.u == e.v) {
      throw InvalidArgument("graph: self-loop at vertex " +
                            std::to_string(e.u));
    }
    if (!std::isfinite(e.w) || e.w <= 0.0) {
      throw InvalidArgument("graph: edge (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) +
                            ") has non-positive or non-finite weight");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw InvalidArgument("graph: duplicate edge (" +
                            std::to_string(edges_[i].u) + "," +
                            std::to_string(edges_[i].v) + ")");
    }
  }

  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (Index i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  neighbors_.resize(2 * edges_.size());
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    neighbors_[fill[e.u]++] = e.v;
    neighbors_[fill[e.v]++] = e.u;
  }
  for (Index i = 0; i < n; ++i) {
    std::sort(neighbors_.begin() + offsets_[i],
              neighbors_.begin() + offsets_[i + 1]);
  }
}

namespace {

std::vector<Edge>::const_iterator find_edge(const std::vector<Edge>& edges,
                                            Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(
      edges.begin(), edges.end(), Edge{u, v, 0.0},
      [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
      });
  if (it != edges.end() && it->u == u && it->v == v) return it;
  return edges.end();
}

}  // namespace

bool SparseSymGraph::has_edge(Vertex u, Vertex v) const {
  return find_edge(edges_, u, v) != edges_.end();
}

std::optional<double> SparseSymGraph::weight(Vertex u, Vertex v) const {
  auto it = find_edge(edges_, u, v);
  if (it == edges_.end()) return std::nullopt;
  return it->w;
}

std::span<const Vertex> SparseSymGraph::neighbors(Vertex u) const {
  if (u < 0 || u >= n_) throw InvalidArgument("graph: vertex out of range");
  return std::span<const Vertex>(neighbors_.data() + offsets_[u],
                                 neighbors_.data() + offsets_[u + 1]);
}

Index SparseSymGraph::degree_count(Vertex u) const {
  return static_cast<Index>(neighbors(u).size());
}

SparseMatrix SparseSymGraph::adjacency() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges_.size());
  for (const Edge& e : edges_) {
    triplets.emplace_back(e.u, e.v, e.w);
    triplets.emplace_back(e.v, e.u, e.w);
  }
  SparseMatrix a(n_, n_);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

MultiViewGraph::MultiViewGraph(std::vector<SparseSymGraph> views)
    : views_(std::move(views)) {
  if (views_.empty()) throw InvalidArgument("multi-view graph: no views");
  n_ = views_.front().num_vertices();
  for (std::size_t i = 1; i < views_.size(); ++i) {
    if (views_[i].num_vertices() != n_) {
      throw InvalidArgument("multi-view graph: view " + std::to_string(i) +
                            " has " + std::to_string(views_[i].num_vertices()) +
                            " vertices, expected " + std::to_string(n_));
    }
  }
}

Eigen::VectorXd degree_vector(const SparseSymGraph& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.num_vertices());
  for (const Edge& e : g.edges()) {
    d[e.u] += e.w;
    d[e.v] += e.w;
  }
  return d;
}

namespace {

Eigen::VectorXd inverse_sqrt(const Eigen::VectorXd& d) {
  Eigen::VectorXd s(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    s[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
  }
  return s;
}

}  // namespace

SparseMatrix normalized_laplacian(const SparseSymGraph& g) {
  const Eigen::VectorXd d = degree_vector(g);
  const Eigen::VectorXd s = inverse_sqrt(d);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.num_edges() + g.num_vertices());
  for (Index i = 0; i < g.num_vertices(); ++i) {
    if (d[i] > 0.0) triplets.emplace_back(i, i, 1.0);
  }
  for (const Edge& e : g.edges()) {
    const double value = -e.w * s[e.u] * s[e.v];
    triplets.emplace_back(e.u, e.v, value);
    triplets.emplace_back(e.v, e.u, value);
  }
  SparseMatrix l(g.num_vertices(), g.num_vertices());
  l.setFromTriplets(triplets.begin(), triplets.end());
  return l;
}

SparseMatrix renormalized_propagation(const SparseSymGraph& g) {
  const Eigen::VectorXd d = degree_vector(g).array() + 1.0;
  const Eigen::VectorXd s = inverse_sqrt(d);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.num_edges() + g.num_vertices());
  for (Index i = 0; i < g.num_vertices(); ++i) {
    triplets.emplace_back(i, i, s[i] * s[i]);
  }
  for (const Edge& e : g.edges()) {
    const double value = e.w * s[e.u] * s[e.v];
    triplets.emplace_back(e.u, e.v, value);
    triplets.emplace_back(e.v, e.u, value);
  }
  SparseMatrix a(g.num_vertices(), g.num_vertices());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

SparseSymGraph union_views(const MultiViewGraph& g) {
  std::map<std::pair<Vertex, Vertex>, double> merged;
  for (const SparseSymGraph& view : g.views()) {
    for (const Edge& e : view.edges()) {
      auto [it, inserted] = merged.try_emplace({e.u, e.v}, e.w);
      if (!inserted) it->second = std::max(it->second, e.w);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, w] : merged) edges.push_back({key.first, key.second, w});
  return SparseSymGraph(g.num_vertices(), std::move(edges));
}

SparseSymGraph read_edge_list(const std::filesystem::path& path,
                              const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), 0, "cannot open edge list",
                        IoError::Kind::kUnreadable);
  const std::string file = path.string();

  std::optional<Index> n = options.num_vertices;
  bool header_seen = false;
  std::vector<Edge> edges;
  std::vector<std::size_t> line_of;
  Vertex max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.starts_with("n=")) {
      if (header_seen || !edges.empty()) {
        throw IoError(file, line_no, "`n=` header must come first, once");
      }
      long long count = 0;
      if (!detail::parse_int(text.substr(2), count) || count < 0) {
        throw IoError(file, line_no, "bad vertex count header");
      }
      if (options.num_vertices && *options.num_vertices != count) {
        throw IoError(file, line_no,
                      "header n=" + std::to_string(count) +
                          " disagrees with expected " +
                          std::to_string(*options.num_vertices));
      }
      n = count;
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(text, '\t');
    if (fields.size() != 2 && fields.size() != 3) {
      throw IoError(file, line_no, "expected `u<TAB>v[<TAB>weight]`");
    }
    long long u = 0;
    long long v = 0;
    if (!detail::parse_int(fields[0], u) || !detail::parse_int(fields[1], v)) {
      throw IoError(file, line_no, "bad vertex index");
    }
    double w = 1.0;
    if (fields.size() == 3 && !detail::parse_double(fields[2], w)) {
      throw IoError(file, line_no, "bad weight");
    }
    if (!std::isfinite(w) || w <= 0.0) {
      throw IoError(file, line_no, "weight must be positive and finite");
    }
    if (u < 0 || v < 0 || (n && (u >= *n || v >= *n))) {
      throw IoError(file, line_no, "vertex index out of range",
                    IoError::Kind::kOutOfRange);
    }
    if (u > INT32_MAX || v > INT32_MAX) {
      throw IoError(file, line_no, "vertex index too large");
    }
    if (u == v) continue;
    if (!options.keep_weights) w = 1.0;
    edges.push_back({static_cast<Vertex>(std::min(u, v)),
                     static_cast<Vertex>(std::max(u, v)), w});
    line_of.push_back(line_no);
    max_index = std::max<Vertex>(max_index, static_cast<Vertex>(std::max(u, v)));
  }
  const Index count = n.value_or(static_cast<Index>(max_index) + 1);

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a].u != edges[b].u ? edges[a].u < edges[b].u
                                    : edges[a].v < edges[b].v;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Edge& a = edges[order[i - 1]];
    const Edge& b = edges[order[i]];
    if (a.u == b.u && a.v == b.v) {
      throw IoError(file, line_of[order[i]],
                    "duplicate edge (" + std::to_string(b.u) + "," +
                        std::to_string(b.v) + "), first seen on line " +
                        std::to_string(line_of[order[i - 1]]));
    }
  }
  return SparseSymGraph(count, std::move(edges));
}

void write_edge_list(const std::filesystem::path& path,
                     const SparseSymGraph& g) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  out << "n=" << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.u << '\t' << e.v << '\t' << detail::format_double(e.w) << '\n';
  }
  if (!out) throw IoError(path.string(), 0, "write failed");
}

}  // namespace mvgcn
