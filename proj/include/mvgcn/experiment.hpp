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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvgcn/dataset.hpp"
#include "mvgcn/fusion.hpp"
#include "mvgcn/gcn.hpp"
#include "mvgcn/ranking.hpp"

namespace mvgcn {

enum class Method { kGcnView1, kGcnView2, kGcnUnion, kMultiGcn };
enum class FeatureSource { kProvided, kAdjacencyView1 };

std::string_view to_string(Method m);
std::string_view to_string(FeatureSource f);
Method method_from_string(std::string_view s);
FeatureSource feature_source_from_string(std::string_view s);

struct SplitSpec {
  Index per_class = 20;
  Index val_size = 500;
  Index test_size = 1000;
};

struct ExperimentConfig {
  /// Exactly one of `dataset_dir` and `synthetic` is set.
  std::filesystem::path dataset_dir;
  std::optional<SyntheticSpec> synthetic;

  Method method = Method::kMultiGcn;
  FeatureSource feature_source = FeatureSource::kProvided;
  /// Scale each feature row to unit L1 norm before training.
  bool normalize_features = true;

  /// Subspace dimension; 0 means 2 * C.
  Index fusion_k = 0;
  /// One weight per view, or a single weight for all; empty means 0.5.
  std::vector<double> alphas;
  EigenSolverOptions eigen;

  /// num_centroids 0 means 10 * C; the ranking seed is the base seed.
  RankingConfig ranking{.num_centroids = 0};
  TrainConfig train;
  SplitSpec split;
  int num_repeats = 10;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Canonical JSON; parsing it back yields an equal configuration.
std::string experiment_config_json(const ExperimentConfig& cfg);

Dataset load_experiment_dataset(const ExperimentConfig& cfg);

/// Fusion settings with defaults resolved against the dataset.
FusionConfig resolve_fusion(const ExperimentConfig& cfg, const Dataset& d);
RankingConfig resolve_ranking(const ExperimentConfig& cfg, const Dataset& d);

Eigen::MatrixXd experiment_features(const Dataset& d, FeatureSource source,
                                    bool normalize);

struct RepeatResult {
  int repeat = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double test_accuracy = 0.0;
  double val_accuracy = 0.0;
  int best_epoch = 0;
  std::string error;
};

struct AugmentationSummary {
  std::size_t edges_added = 0;
  std::size_t edges_removed = 0;
  std::size_t base_edges = 0;
  std::size_t merged_edges = 0;
  RankingMatrix matrix_used = RankingMatrix::kLaplacian;
  double condition_estimate = 0.0;
  std::vector<Vertex> centroids;
};

/// The training graph for cfg.method: view 1, view 2, the view union, or
/// the augmented graph.
SparseSymGraph build_method_graph(const ExperimentConfig& cfg, const Dataset& d,
                                  std::optional<AugmentationSummary>* summary = nullptr);

struct ExperimentReport {
  std::string dataset;
  Method method = Method::kMultiGcn;
  FeatureSource feature_source = FeatureSource::kProvided;
  std::string protocol;  // "random-splits" or "predefined-split"
  std::vector<RepeatResult> repeats;
  double mean_test_accuracy = 0.0;
  /// Sample standard deviation over successful repeats / sqrt(count).
  double stderr_test_accuracy = 0.0;
  double mean_val_accuracy = 0.0;
  bool partial = false;
  std::optional<AugmentationSummary> augmentation;
  std::string config_json;

  /// Seconds per stage and in total; excluded from the deterministic report.
  std::map<std::string, double> stage_seconds;
  double total_seconds = 0.0;

  std::vector<double> test_accuracies() const;
};

/// Deterministic JSON: identical configs give identical bytes.
std::string report_json(const ExperimentReport& r);
std::string timing_json(const ExperimentReport& r);
/// `repeat,seed,ok,test_acc,val_acc,best_epoch,error`
void write_repeats_csv(const std::filesystem::path& path, const ExperimentReport& r);

/// Repeat r uses seed + r for its split and training. A numerical failure
/// aborts that repeat only and marks the report partial; other errors
/// propagate.
ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& d);

ExperimentReport run_predefined_split(const ExperimentConfig& cfg,
                                      const std::filesystem::path& split_file);
ExperimentReport run_predefined_split(const ExperimentConfig& cfg,
                                      const Dataset& d, const LabeledSplit& split);

struct AlphaTrial {
  double alpha = 0.0;
  double mean_val_accuracy = 0.0;
  double mean_test_accuracy = 0.0;
  bool partial = false;
};

struct AlphaSearchResult {
  std::vector<AlphaTrial> table;  // grid order
  double best_alpha = 0.0;
};

/// Multi-GCN per alpha (shared by all views) under the repeated random
/// split protocol; argmax of mean validation accuracy, ties to the
/// smallest alpha.
AlphaSearchResult grid_search_alpha(const ExperimentConfig& cfg, const Dataset& d,
                                    const std::vector<double>& grid);
std::string alpha_search_json(const AlphaSearchResult& r);

/// Binary PPM. View-1 entries red, view-2 blue, both purple, else white.
/// Graphs above `max_side` vertices are binned onto a max_side grid.
void emit_spy_plot(const SparseSymGraph& g1, const SparseSymGraph& g2,
                   const std::filesystem::path& out, Index max_side = 2000);

/// Scores an external `vertex,class` prediction CSV on `idx`. Vertices in
/// idx without a prediction count as wrong.
double score_predictions(const std::filesystem::path& csv, const Dataset& d,
                         std::span<const Vertex> idx);

}  // namespace mvgcn
