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
#include <string>
#include <vector>

#include "mvgcn/gcn.hpp"
#include "mvgcn/graph.hpp"

namespace mvgcn {

/// A multi-view graph with node features and (possibly partial) labels.
///
/// On disk a dataset is a directory:
///
///   meta.json      {"name", "n", "num_views", "C", "F"}
///   view1.tsv ...  one edge list per view, 1-based file numbering
///   features.csv   n rows of F comma-separated reals
///   labels.csv     `vertex,class` rows; absent vertices are unlabeled
struct Dataset {
  std::string name;
  MultiViewGraph graph;
  Eigen::MatrixXd features;
  std::vector<int> labels;  // -1 for unlabeled
  int num_classes = 0;

  Index num_vertices() const { return graph.num_vertices(); }
  void validate() const;
};

Dataset load_dataset(const std::filesystem::path& dir,
                     const EdgeListOptions& edge_options = {});
void save_dataset(const Dataset& d, const std::filesystem::path& dir);

/// Edge (u, v) iff cosine(X_u, X_v) > threshold. Rows are L2-normalized
/// first; all-zero rows have similarity 0 with everything.
SparseSymGraph build_similarity_view(const Eigen::MatrixXd& x, double threshold);

/// per_class training vertices from every class, then val_size and
/// test_size from the remaining labeled vertices. Deterministic in seed.
LabeledSplit make_split(const Dataset& d, Index per_class, Index val_size,
                        Index test_size, std::uint64_t seed);

/// JSON `{"train": [...], "val": [...], "test": [...]}`; labels are taken
/// from the dataset. Overlapping index sets are rejected.
LabeledSplit read_split_file(const std::filesystem::path& path, const Dataset& d);
void write_split_file(const std::filesystem::path& path, const LabeledSplit& s);

struct ViewProbabilities {
  double p_intra = 0.1;
  double p_inter = 0.01;
  /// Class id -> block id for this view; classes sharing a block are
  /// indistinguishable in it. Empty means every class is its own block.
  std::vector<int> groups;
  /// Sampling seed for this view; derived from the dataset seed when unset.
  std::optional<std::uint64_t> seed;
};

/// Planted partition: n vertices in num_classes equal contiguous blocks.
struct SyntheticSpec {
  Index n = 200;
  int num_classes = 2;
  std::vector<ViewProbabilities> views;
  double feature_noise = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Each view sampled independently from its probability pair. Features are
/// one-hot block ids plus N(0, feature_noise^2) per entry.
Dataset generate_synthetic(const SyntheticSpec& spec);

struct LinqsConversion {
  Dataset dataset;
  std::size_t citation_lines = 0;   // raw lines in the .cites file
  std::size_t unknown_ids = 0;      // lines naming papers absent from .content
  std::size_t self_citations = 0;
  std::size_t reciprocal_duplicates = 0;
};

/// Converts the LINQS citation text format (`<id> <binary words...> <label>`
/// per line in `.content`, `<cited> <citing>` per line in `.cites`) into a
/// two-view dataset: citations, then feature cosine similarity above
/// `similarity_threshold`. Vertex order follows `.content`; class ids follow
/// the sorted label names.
LinqsConversion convert_linqs(const std::filesystem::path& content,
                              const std::filesystem::path& cites,
                              const std::string& name,
                              double similarity_threshold = 0.8);

}  // namespace mvgcn
