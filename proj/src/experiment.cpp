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

#include "mvgcn/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mvgcn/error.hpp"
#include "text_util.hpp"

namespace mvgcn {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kGcnView1: return "gcn-view1";
    case Method::kGcnView2: return "gcn-view2";
    case Method::kGcnUnion: return "gcn-union";
    case Method::kMultiGcn: return "multi-gcn";
  }
  return "?";
}

std::string_view to_string(FeatureSource f) {
  return f == FeatureSource::kProvided ? "provided" : "adjacency-view-1";
}

Method method_from_string(std::string_view s) {
  for (Method m : {Method::kGcnView1, Method::kGcnView2, Method::kGcnUnion,
                   Method::kMultiGcn}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(s) +
                    "' (expected gcn-view1, gcn-view2, gcn-union or multi-gcn)");
}

FeatureSource feature_source_from_string(std::string_view s) {
  if (s == "provided") return FeatureSource::kProvided;
  if (s == "adjacency-view-1") return FeatureSource::kAdjacencyView1;
  throw ConfigError("unknown feature source '" + std::string(s) +
                    "' (expected provided or adjacency-view-1)");
}

void ExperimentConfig::validate() const {
  if (dataset_dir.empty() == !synthetic.has_value()) {
    throw ConfigError("config: set exactly one of 'dataset' and 'synthetic'");
  }
  if (num_repeats < 1) throw ConfigError("config: num_repeats must be >= 1");
  if (fusion_k < 0) throw ConfigError("config: fusion.k must be >= 0");
  for (double a : alphas) {
    if (!std::isfinite(a) || a < 0.0) {
      throw ConfigError("config: alphas must be finite and >= 0");
    }
  }
  if (ranking.num_centroids < 0) {
    throw ConfigError("config: ranking.num_centroids must be >= 0");
  }
  if (!(ranking.beta > 0.0 && ranking.beta < 1.0)) {
    throw ConfigError("config: ranking.beta must lie in (0, 1)");
  }
  if (ranking.add_per_centroid < 0 || ranking.prune_per_centroid < 0) {
    throw ConfigError("config: ranking Y and Z must be >= 0");
  }
  if (ranking.kmeans_restarts < 1) {
    throw ConfigError("config: ranking.kmeans_restarts must be >= 1");
  }
  if (!(ranking.max_condition > 1.0)) {
    throw ConfigError("config: ranking.max_condition must exceed 1");
  }
  if (split.per_class < 1 || split.val_size < 0 || split.test_size < 0) {
    throw ConfigError("config: split.per_class must be >= 1 and sizes >= 0");
  }
  if (eigen.dense_threshold < 0 || !(eigen.tolerance > 0.0) ||
      eigen.max_iterations < 1 || eigen.guard_vectors < 0) {
    throw ConfigError("config: invalid eigensolver options");
  }
  try {
    train.validate();
    if (synthetic) synthetic->validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

namespace {

/// Reads one JSON object, rejecting keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type (" +
                        std::string(it->type_name()) + ")");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

SyntheticSpec parse_synthetic(const json& j) {
  SyntheticSpec s;
  ObjectReader r(j, "synthetic");
  r.get("n", s.n);
  r.get("num_classes", s.num_classes);
  r.get("feature_noise", s.feature_noise);
  r.get("seed", s.seed);
  if (const json* views = r.child("views")) {
    if (!views->is_array()) throw ConfigError("synthetic.views: expected an array");
    for (const json& v : *views) {
      ViewProbabilities p;
      ObjectReader vr(v, "synthetic.views[]");
      vr.get("p_intra", p.p_intra);
      vr.get("p_inter", p.p_inter);
      vr.get("groups", p.groups);
      std::optional<std::uint64_t> seed;
      if (const json* sj = vr.child("seed")) {
        try {
          seed = sj->get<std::uint64_t>();
        } catch (const json::exception&) {
          throw ConfigError("synthetic.views[].seed: wrong type");
        }
      }
      p.seed = seed;
      vr.finish();
      s.views.push_back(std::move(p));
    }
  }
  r.finish();
  return s;
}

json synthetic_json(const SyntheticSpec& s) {
  json views = json::array();
  for (const auto& v : s.views) {
    json jv = {{"p_intra", v.p_intra}, {"p_inter", v.p_inter}};
    if (!v.groups.empty()) jv["groups"] = v.groups;
    if (v.seed) jv["seed"] = *v.seed;
    views.push_back(std::move(jv));
  }
  return {{"n", s.n},
          {"num_classes", s.num_classes},
          {"feature_noise", s.feature_noise},
          {"seed", s.seed},
          {"views", std::move(views)}};
}

ExperimentConfig parse_config_json(const json& j, const std::filesystem::path& base) {
  ExperimentConfig cfg;
  ObjectReader r(j, "config");
  std::string dataset;
  r.get("dataset", dataset);
  if (!dataset.empty()) {
    std::filesystem::path p(dataset);
    cfg.dataset_dir = p.is_absolute() || base.empty() ? p : base / p;
  }
  if (const json* s = r.child("synthetic")) cfg.synthetic = parse_synthetic(*s);

  std::string method(to_string(cfg.method));
  r.get("method", method);
  cfg.method = method_from_string(method);
  std::string features(to_string(cfg.feature_source));
  r.get("feature_source", features);
  cfg.feature_source = feature_source_from_string(features);
  r.get("normalize_features", cfg.normalize_features);
  r.get("num_repeats", cfg.num_repeats);
  r.get("seed", cfg.seed);

  if (const json* f = r.child("fusion")) {
    ObjectReader fr(*f, "fusion");
    fr.get("k", cfg.fusion_k);
    if (const json* a = fr.child("alpha")) {
      try {
        cfg.alphas = a->is_array() ? a->get<std::vector<double>>()
                                   : std::vector<double>{a->get<double>()};
      } catch (const json::exception&) {
        throw ConfigError("fusion.alpha: expected a number or array of numbers");
      }
    }
    if (const json* e = fr.child("eigen")) {
      ObjectReader er(*e, "fusion.eigen");
      er.get("dense_threshold", cfg.eigen.dense_threshold);
      er.get("tolerance", cfg.eigen.tolerance);
      er.get("max_iterations", cfg.eigen.max_iterations);
      er.get("guard_vectors", cfg.eigen.guard_vectors);
      er.get("seed", cfg.eigen.seed);
      er.finish();
    }
    fr.finish();
  }
  if (const json* k = r.child("ranking")) {
    ObjectReader kr(*k, "ranking");
    kr.get("beta", cfg.ranking.beta);
    kr.get("num_centroids", cfg.ranking.num_centroids);
    kr.get("add_per_centroid", cfg.ranking.add_per_centroid);
    kr.get("prune_per_centroid", cfg.ranking.prune_per_centroid);
    kr.get("kmeans_restarts", cfg.ranking.kmeans_restarts);
    std::string matrix(to_string(cfg.ranking.matrix));
    kr.get("matrix", matrix);
    cfg.ranking.matrix = ranking_matrix_from_string(matrix);
    kr.get("fallback_to_similarity", cfg.ranking.fallback_to_similarity);
    kr.get("max_condition", cfg.ranking.max_condition);
    kr.finish();
  }
  if (const json* t = r.child("train")) {
    ObjectReader tr(*t, "train");
    tr.get("learning_rate", cfg.train.learning_rate);
    tr.get("max_epochs", cfg.train.max_epochs);
    tr.get("hidden_units", cfg.train.hidden_units);
    tr.get("dropout", cfg.train.dropout);
    tr.get("weight_decay", cfg.train.weight_decay);
    tr.get("early_stop_patience", cfg.train.early_stop_patience);
    tr.get("adam_beta1", cfg.train.adam_beta1);
    tr.get("adam_beta2", cfg.train.adam_beta2);
    tr.get("adam_eps", cfg.train.adam_eps);
    tr.finish();
  }
  if (const json* s = r.child("split")) {
    ObjectReader sr(*s, "split");
    sr.get("per_class", cfg.split.per_class);
    sr.get("val_size", cfg.split.val_size);
    sr.get("test_size", cfg.split.test_size);
    sr.finish();
  }
  r.finish();
  cfg.validate();
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.synthetic) {
    j["synthetic"] = synthetic_json(*cfg.synthetic);
  } else {
    j["dataset"] = cfg.dataset_dir.generic_string();
  }
  j["method"] = to_string(cfg.method);
  j["feature_source"] = to_string(cfg.feature_source);
  j["normalize_features"] = cfg.normalize_features;
  j["num_repeats"] = cfg.num_repeats;
  j["seed"] = cfg.seed;
  j["fusion"] = {{"k", cfg.fusion_k},
                 {"alpha", cfg.alphas},
                 {"eigen",
                  {{"dense_threshold", cfg.eigen.dense_threshold},
                   {"tolerance", cfg.eigen.tolerance},
                   {"max_iterations", cfg.eigen.max_iterations},
                   {"guard_vectors", cfg.eigen.guard_vectors},
                   {"seed", cfg.eigen.seed}}}};
  j["ranking"] = {{"beta", cfg.ranking.beta},
                  {"num_centroids", cfg.ranking.num_centroids},
                  {"add_per_centroid", cfg.ranking.add_per_centroid},
                  {"prune_per_centroid", cfg.ranking.prune_per_centroid},
                  {"kmeans_restarts", cfg.ranking.kmeans_restarts},
                  {"matrix", to_string(cfg.ranking.matrix)},
                  {"fallback_to_similarity", cfg.ranking.fallback_to_similarity},
                  {"max_condition", cfg.ranking.max_condition}};
  j["train"] = {{"learning_rate", cfg.train.learning_rate},
                {"max_epochs", cfg.train.max_epochs},
                {"hidden_units", cfg.train.hidden_units},
                {"dropout", cfg.train.dropout},
                {"weight_decay", cfg.train.weight_decay},
                {"early_stop_patience", cfg.train.early_stop_patience},
                {"adam_beta1", cfg.train.adam_beta1},
                {"adam_beta2", cfg.train.adam_beta2},
                {"adam_eps", cfg.train.adam_eps}};
  j["split"] = {{"per_class", cfg.split.per_class},
                {"val_size", cfg.split.val_size},
                {"test_size", cfg.split.test_size}};
  return j;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config_json(j, {});
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_config_json(j, path.parent_path());
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
  return config_to_json(cfg).dump(2);
}

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
  cfg.validate();
  return cfg.synthetic ? generate_synthetic(*cfg.synthetic)
                       : load_dataset(cfg.dataset_dir);
}

FusionConfig resolve_fusion(const ExperimentConfig& cfg, const Dataset& d) {
  FusionConfig f;
  f.k = cfg.fusion_k > 0 ? cfg.fusion_k : 2 * static_cast<Index>(d.num_classes);
  const std::size_t m = d.graph.num_views();
  if (cfg.alphas.empty()) {
    f.alphas.assign(m, 0.5);
  } else if (cfg.alphas.size() == 1) {
    f.alphas.assign(m, cfg.alphas.front());
  } else if (cfg.alphas.size() == m) {
    f.alphas = cfg.alphas;
  } else {
    throw ConfigError("config: " + std::to_string(cfg.alphas.size()) +
                      " alphas given for " + std::to_string(m) + " views");
  }
  f.eigen = cfg.eigen;
  return f;
}

RankingConfig resolve_ranking(const ExperimentConfig& cfg, const Dataset& d) {
  RankingConfig r = cfg.ranking;
  if (r.num_centroids == 0) r.num_centroids = 10 * static_cast<Index>(d.num_classes);
  r.num_centroids = std::min(r.num_centroids, d.num_vertices());
  r.seed = cfg.seed;
  return r;
}

Eigen::MatrixXd experiment_features(const Dataset& d, FeatureSource source,
                                    bool normalize) {
  Eigen::MatrixXd x = source == FeatureSource::kProvided
                          ? d.features
                          : Eigen::MatrixXd(d.graph.view(0).adjacency());
  if (normalize) {
    for (Index i = 0; i < x.rows(); ++i) {
      const double s = x.row(i).lpNorm<1>();
      if (s > 0.0) x.row(i) /= s;
    }
  }
  return x;
}

std::vector<double> ExperimentReport::test_accuracies() const {
  std::vector<double> out;
  for (const auto& r : repeats) {
    if (r.ok) out.push_back(r.test_accuracy);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <typename F>
  decltype(auto) time(const std::string& stage, F&& f) {
    const auto start = Clock::now();
    struct Record {
      std::map<std::string, double>& sink;
      const std::string& stage;
      Clock::time_point start;
      ~Record() {
        sink[stage] += std::chrono::duration<double>(Clock::now() - start).count();
      }
    } record{sink_, stage, start};
    return f();
  }

 private:
  std::map<std::string, double>& sink_;
};

SparseSymGraph method_graph(const ExperimentConfig& cfg, const Dataset& d,
                            StageTimer& timer,
                            std::optional<AugmentationSummary>& summary) {
  switch (cfg.method) {
    case Method::kGcnView1:
      return d.graph.view(0);
    case Method::kGcnView2:
      if (d.graph.num_views() < 2) {
        throw ConfigError("method gcn-view2 needs a dataset with at least two views");
      }
      return d.graph.view(1);
    case Method::kGcnUnion:
      return timer.time("union", [&] { return union_views(d.graph); });
    case Method::kMultiGcn: {
      const FusionConfig fusion = resolve_fusion(cfg, d);
      const RankingConfig ranking = resolve_ranking(cfg, d);
      const ModifiedLaplacian lmod =
          timer.time("fusion", [&] { return merge_views(d.graph, fusion); });
      MergedGraph merged =
          timer.time("ranking", [&] { return augment_graph(d.graph, lmod, ranking); });
      AugmentationSummary s;
      s.edges_added = merged.salient.size();
      s.edges_removed = merged.pruned.size();
      s.base_edges = d.graph.view(0).num_edges();
      s.merged_edges = merged.adjacency.num_edges();
      s.matrix_used = merged.matrix_used;
      s.condition_estimate = merged.condition_estimate;
      s.centroids = merged.centroids;
      summary = std::move(s);
      return std::move(merged.adjacency);
    }
  }
  throw InvalidArgument("unknown method");
}

ExperimentReport run_pipeline(
    const ExperimentConfig& cfg, const Dataset& d, int repeats,
    const std::string& protocol,
    const std::function<LabeledSplit(std::uint64_t)>& make) {
  const auto start = Clock::now();
  cfg.validate();
  d.validate();
  ExperimentReport report;
  report.dataset = d.name;
  report.method = cfg.method;
  report.feature_source = cfg.feature_source;
  report.protocol = protocol;
  report.config_json = experiment_config_json(cfg);
  StageTimer timer(report.stage_seconds);

  const Eigen::MatrixXd x = timer.time("features", [&] {
    return experiment_features(d, cfg.feature_source, cfg.normalize_features);
  });
  const SparseSymGraph g = method_graph(cfg, d, timer, report.augmentation);
  const SparseMatrix a_hat =
      timer.time("propagation", [&] { return renormalized_propagation(g); });

  for (int r = 0; r < repeats; ++r) {
    RepeatResult rr;
    rr.repeat = r;
    rr.seed = cfg.seed + static_cast<std::uint64_t>(r);
    try {
      const LabeledSplit split = timer.time("split", [&] { return make(rr.seed); });
      TrainConfig tc = cfg.train;
      tc.seed = rr.seed;
      const TrainResult result =
          timer.time("train", [&] { return train(a_hat, x, split, tc); });
      timer.time("evaluate", [&] {
        const std::vector<int> pred = predict(forward(result.model, a_hat, x));
        rr.test_accuracy = accuracy(pred, split.test, split.labels);
        rr.val_accuracy = accuracy(pred, split.val, split.labels);
      });
      rr.best_epoch = result.best_epoch;
      rr.ok = true;
    } catch (const NumericalError& e) {
      rr.error = e.what();
    }
    report.repeats.push_back(std::move(rr));
  }

  double sum = 0.0;
  double val_sum = 0.0;
  int ok = 0;
  for (const auto& rr : report.repeats) {
    if (!rr.ok) continue;
    sum += rr.test_accuracy;
    val_sum += rr.val_accuracy;
    ++ok;
  }
  report.partial = ok < repeats;
  if (ok > 0) {
    report.mean_test_accuracy = sum / ok;
    report.mean_val_accuracy = val_sum / ok;
  }
  if (ok > 1) {
    double ss = 0.0;
    for (const auto& rr : report.repeats) {
      if (rr.ok) ss += std::pow(rr.test_accuracy - report.mean_test_accuracy, 2);
    }
    report.stderr_test_accuracy = std::sqrt(ss / (ok - 1)) / std::sqrt(ok);
  }
  report.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace

SparseSymGraph build_method_graph(const ExperimentConfig& cfg, const Dataset& d,
                                  std::optional<AugmentationSummary>* summary) {
  std::map<std::string, double> unused;
  StageTimer timer(unused);
  std::optional<AugmentationSummary> s;
  SparseSymGraph g = method_graph(cfg, d, timer, s);
  if (summary) *summary = std::move(s);
  return g;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& d) {
  return run_pipeline(cfg, d, cfg.num_repeats, "random-splits", [&](std::uint64_t seed) {
    return make_split(d, cfg.split.per_class, cfg.split.val_size, cfg.split.test_size,
                      seed);
  });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const Dataset d = load_experiment_dataset(cfg);
  const double load = std::chrono::duration<double>(Clock::now() - start).count();
  ExperimentReport report = run_experiment(cfg, d);
  report.stage_seconds["load"] = load;
  report.total_seconds += load;
  return report;
}

ExperimentReport run_predefined_split(const ExperimentConfig& cfg, const Dataset& d,
                                      const LabeledSplit& split) {
  split.validate(d.num_vertices(), d.num_classes);
  return run_pipeline(cfg, d, 1, "predefined-split",
                      [&](std::uint64_t) { return split; });
}

ExperimentReport run_predefined_split(const ExperimentConfig& cfg,
                                      const std::filesystem::path& split_file) {
  const auto start = Clock::now();
  const Dataset d = load_experiment_dataset(cfg);
  const LabeledSplit split = read_split_file(split_file, d);
  const double load = std::chrono::duration<double>(Clock::now() - start).count();
  ExperimentReport report = run_predefined_split(cfg, d, split);
  report.stage_seconds["load"] = load;
  report.total_seconds += load;
  return report;
}

std::string report_json(const ExperimentReport& r) {
  json repeats = json::array();
  for (const auto& rr : r.repeats) {
    json j = {{"repeat", rr.repeat}, {"seed", rr.seed}, {"ok", rr.ok}};
    if (rr.ok) {
      j["test_accuracy"] = rr.test_accuracy;
      j["val_accuracy"] = rr.val_accuracy;
      j["best_epoch"] = rr.best_epoch;
    } else {
      j["error"] = rr.error;
    }
    repeats.push_back(std::move(j));
  }
  std::size_t ok = 0;
  for (const auto& rr : r.repeats) ok += rr.ok;
  json j = {{"dataset", r.dataset},
            {"method", to_string(r.method)},
            {"feature_source", to_string(r.feature_source)},
            {"protocol", r.protocol},
            {"num_repeats", r.repeats.size()},
            {"successful_repeats", ok},
            {"partial", r.partial},
            {"mean_test_accuracy", r.mean_test_accuracy},
            {"stderr_test_accuracy", r.stderr_test_accuracy},
            {"mean_val_accuracy", r.mean_val_accuracy},
            {"repeats", std::move(repeats)},
            {"config", json::parse(r.config_json)}};
  if (r.augmentation) {
    const auto& a = *r.augmentation;
    j["augmentation"] = {{"edges_added", a.edges_added},
                         {"edges_removed", a.edges_removed},
                         {"base_edges", a.base_edges},
                         {"merged_edges", a.merged_edges},
                         {"ranking_matrix", to_string(a.matrix_used)},
                         {"condition_estimate", a.condition_estimate},
                         {"centroids", a.centroids}};
  }
  return j.dump(2);
}

std::string timing_json(const ExperimentReport& r) {
  return json{{"stage_seconds", r.stage_seconds}, {"total_seconds", r.total_seconds}}
      .dump(2);
}

void write_repeats_csv(const std::filesystem::path& path, const ExperimentReport& r) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  out << "repeat,seed,ok,test_acc,val_acc,best_epoch,error\n";
  for (const auto& rr : r.repeats) {
    std::string error = rr.error;
    for (char& c : error) {
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    }
    out << rr.repeat << ',' << rr.seed << ',' << (rr.ok ? 1 : 0) << ','
        << detail::format_double(rr.test_accuracy) << ','
        << detail::format_double(rr.val_accuracy) << ',' << rr.best_epoch << ','
        << error << '\n';
  }
}

AlphaSearchResult grid_search_alpha(const ExperimentConfig& cfg, const Dataset& d,
                                    const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("grid-alpha: empty alpha grid");
  AlphaSearchResult out;
  bool found = false;
  double best_val = 0.0;
  for (double alpha : grid) {
    ExperimentConfig c = cfg;
    c.method = Method::kMultiGcn;
    c.alphas = {alpha};
    const ExperimentReport r = run_experiment(c, d);
    AlphaTrial t{alpha, r.mean_val_accuracy, r.mean_test_accuracy, r.partial};
    out.table.push_back(t);
    if (r.test_accuracies().empty()) continue;
    if (!found || t.mean_val_accuracy > best_val ||
        (t.mean_val_accuracy == best_val && alpha < out.best_alpha)) {
      found = true;
      best_val = t.mean_val_accuracy;
      out.best_alpha = alpha;
    }
  }
  if (!found) throw NumericalError("grid-alpha: every alpha failed");
  return out;
}

std::string alpha_search_json(const AlphaSearchResult& r) {
  json table = json::array();
  for (const auto& t : r.table) {
    table.push_back({{"alpha", t.alpha},
                     {"mean_val_accuracy", t.mean_val_accuracy},
                     {"mean_test_accuracy", t.mean_test_accuracy},
                     {"partial", t.partial}});
  }
  return json{{"protocol", "random-splits (stands in for cross-validation)"},
              {"best_alpha", r.best_alpha},
              {"table", std::move(table)}}
      .dump(2);
}

void emit_spy_plot(const SparseSymGraph& g1, const SparseSymGraph& g2,
                   const std::filesystem::path& out, Index max_side) {
  if (g1.num_vertices() != g2.num_vertices()) {
    throw InvalidArgument("spy: graphs differ in vertex count");
  }
  if (max_side < 1) throw InvalidArgument("spy: max_side must be >= 1");
  const Index n = g1.num_vertices();
  const Index side = std::min(n, max_side);
  std::vector<unsigned char> mask(static_cast<std::size_t>(side * side), 0);
  const auto mark = [&](const SparseSymGraph& g, unsigned char bit) {
    for (const Edge& e : g.edges()) {
      const Index a = static_cast<Index>(e.u) * side / n;
      const Index b = static_cast<Index>(e.v) * side / n;
      mask[a * side + b] |= bit;
      mask[b * side + a] |= bit;
    }
  };
  mark(g1, 1);
  mark(g2, 2);

  std::ofstream f(out, std::ios::binary);
  if (!f) throw IoError(out.string(), 0, "cannot open for writing");
  f << "P6\n" << side << ' ' << side << "\n255\n";
  static constexpr unsigned char kColors[4][3] = {
      {255, 255, 255}, {255, 0, 0}, {0, 0, 255}, {128, 0, 128}};
  for (unsigned char m : mask) {
    f.write(reinterpret_cast<const char*>(kColors[m]), 3);
  }
  if (!f) throw IoError(out.string(), 0, "write failed");
}

double score_predictions(const std::filesystem::path& csv, const Dataset& d,
                         std::span<const Vertex> idx) {
  std::ifstream in(csv);
  if (!in) throw IoError(csv.string(), 0, "cannot open", IoError::Kind::kMissingFile);
  std::vector<int> pred(static_cast<std::size_t>(d.num_vertices()), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#' || text == "vertex,class") continue;
    const auto fields = detail::split(text, ',');
    long long v = 0;
    long long c = 0;
    if (fields.size() != 2 || !detail::parse_int(fields[0], v) ||
        !detail::parse_int(fields[1], c)) {
      throw IoError(csv.string(), line_no, "expected `vertex,class`");
    }
    if (v < 0 || v >= d.num_vertices() || c < 0 || c >= d.num_classes) {
      throw IoError(csv.string(), line_no, "vertex or class out of range",
                    IoError::Kind::kOutOfRange);
    }
    pred[v] = static_cast<int>(c);
  }
  return accuracy(pred, idx, d.labels);
}

}  // namespace mvgcn
