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

// Command-line driver for the multi-view GCN pipeline.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvgcn/dataset.hpp"
#include "mvgcn/error.hpp"
#include "mvgcn/experiment.hpp"
#include "mvgcn/fusion.hpp"
#include "mvgcn/gcn.hpp"
#include "mvgcn/ranking.hpp"

namespace fs = std::filesystem;
using mvgcn::Index;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  fs::path out_dir = ".";
};

/// Experiment flags shared by every pipeline subcommand. Each one overrides
/// the matching config-file field only when given.
struct Overrides {
  std::string config;
  std::string dataset;
  std::optional<std::string> method;
  std::optional<std::string> features;
  std::optional<bool> normalize_features;
  std::vector<double> alpha;
  std::optional<Index> k;
  std::optional<double> beta;
  std::optional<Index> centroids;
  std::optional<Index> add;
  std::optional<Index> prune;
  std::optional<std::string> ranking_matrix;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<Index> hidden;
  std::optional<double> dropout;
  std::optional<double> weight_decay;
  std::optional<int> patience;
  std::optional<int> repeats;
  std::optional<Index> per_class;
  std::optional<Index> val_size;
  std::optional<Index> test_size;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "experiment config (JSON)");
    app->add_option("-d,--dataset", dataset, "dataset directory");
    app->add_option("--method", method,
                    "gcn-view1 | gcn-view2 | gcn-union | multi-gcn");
    app->add_option("--features", features, "provided | adjacency-view-1");
    app->add_option("--normalize-features", normalize_features,
                    "row-normalize features (true|false)");
    app->add_option("--alpha", alpha, "fusion weight(s), one or one per view")
        ->delimiter(',');
    app->add_option("--k", k, "subspace dimension (default 2C)");
    app->add_option("--beta", beta, "ranking beta in (0, 1)");
    app->add_option("--centroids", centroids, "query points K (default 10C)");
    app->add_option("--add", add, "salient edges added per centroid (Y)");
    app->add_option("--prune", prune, "edges pruned per centroid (Z)");
    app->add_option("--ranking-matrix", ranking_matrix, "laplacian | similarity | shifted");
    app->add_option("--epochs", epochs, "maximum training epochs");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--hidden", hidden, "hidden units");
    app->add_option("--dropout", dropout, "dropout rate");
    app->add_option("--weight-decay", weight_decay, "L2 weight on first layer");
    app->add_option("--patience", patience, "early stopping window");
    app->add_option("--repeats", repeats, "number of random splits");
    app->add_option("--per-class", per_class, "training labels per class");
    app->add_option("--val-size", val_size, "validation vertices");
    app->add_option("--test-size", test_size, "test vertices");
  }

  mvgcn::ExperimentConfig resolve(const Globals& g) const {
    mvgcn::ExperimentConfig cfg;
    if (!config.empty()) {
      cfg = mvgcn::load_experiment_config(config);
    }
    if (!dataset.empty()) {
      cfg.dataset_dir = dataset;
      cfg.synthetic.reset();
    }
    if (method) cfg.method = mvgcn::method_from_string(*method);
    if (features) cfg.feature_source = mvgcn::feature_source_from_string(*features);
    if (normalize_features) cfg.normalize_features = *normalize_features;
    if (!alpha.empty()) cfg.alphas = alpha;
    if (k) cfg.fusion_k = *k;
    if (beta) cfg.ranking.beta = *beta;
    if (centroids) cfg.ranking.num_centroids = *centroids;
    if (add) cfg.ranking.add_per_centroid = *add;
    if (prune) cfg.ranking.prune_per_centroid = *prune;
    if (ranking_matrix) {
      cfg.ranking.matrix = mvgcn::ranking_matrix_from_string(*ranking_matrix);
    }
    if (epochs) cfg.train.max_epochs = *epochs;
    if (lr) cfg.train.learning_rate = *lr;
    if (hidden) cfg.train.hidden_units = *hidden;
    if (dropout) cfg.train.dropout = *dropout;
    if (weight_decay) cfg.train.weight_decay = *weight_decay;
    if (patience) cfg.train.early_stop_patience = *patience;
    if (repeats) cfg.num_repeats = *repeats;
    if (per_class) cfg.split.per_class = *per_class;
    if (val_size) cfg.split.val_size = *val_size;
    if (test_size) cfg.split.test_size = *test_size;
    if (g.seed) cfg.seed = *g.seed;
    cfg.validate();
    return cfg;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw mvgcn::IoError(path.string(), 0, "cannot open for writing");
  out << text << '\n';
}

void print_report(const mvgcn::ExperimentReport& r) {
  std::printf("%s %s on %s: test accuracy %.2f%% +/- %.2f (%zu/%zu repeats)%s\n",
              r.protocol.c_str(), std::string(mvgcn::to_string(r.method)).c_str(),
              r.dataset.c_str(), 100.0 * r.mean_test_accuracy,
              100.0 * r.stderr_test_accuracy, r.test_accuracies().size(),
              r.repeats.size(), r.partial ? " [partial]" : "");
  for (const auto& rr : r.repeats) {
    if (!rr.ok) std::fprintf(stderr, "repeat %d failed: %s\n", rr.repeat, rr.error.c_str());
  }
}

int save_report(const Globals& g, const mvgcn::ExperimentReport& r) {
  fs::create_directories(g.out_dir);
  write_text(g.out_dir / "report.json", mvgcn::report_json(r));
  write_text(g.out_dir / "timing.json", mvgcn::timing_json(r));
  mvgcn::write_repeats_csv(g.out_dir / "repeats.csv", r);
  print_report(r);
  return r.test_accuracies().empty() ? kExitNumerical : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view graph convolutional networks: fusion, ranking, training"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "base seed (overrides config)");
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();

  // fuse
  Overrides fuse_o;
  auto* fuse = app.add_subcommand("fuse", "merge views into the modified Laplacian");
  fuse_o.attach(fuse);
  fuse->callback([&] {
    const auto cfg = fuse_o.resolve(g);
    const auto d = mvgcn::load_experiment_dataset(cfg);
    const auto lmod = mvgcn::merge_views(d.graph, mvgcn::resolve_fusion(cfg, d));
    fs::create_directories(g.out_dir);
    mvgcn::save_modified_laplacian(g.out_dir / "modified_laplacian.bin", lmod);
    std::printf("n=%lld k=%lld smallest eigenvalue %.6g -> %s\n",
                static_cast<long long>(lmod.num_vertices()),
                static_cast<long long>(lmod.k()),
                lmod.merged_eigenvalues.size() ? lmod.merged_eigenvalues[0] : 0.0,
                (g.out_dir / "modified_laplacian.bin").string().c_str());
  });

  // rank
  Overrides rank_o;
  std::string lmod_path;
  auto* rank = app.add_subcommand("rank", "manifold ranking and edge augmentation");
  rank_o.attach(rank);
  rank->add_option("--lmod", lmod_path, "precomputed modified Laplacian (from fuse)");
  rank->callback([&] {
    const auto cfg = rank_o.resolve(g);
    const auto d = mvgcn::load_experiment_dataset(cfg);
    const auto lmod = lmod_path.empty()
                          ? mvgcn::merge_views(d.graph, mvgcn::resolve_fusion(cfg, d))
                          : mvgcn::load_modified_laplacian(lmod_path);
    const auto rcfg = mvgcn::resolve_ranking(cfg, d);
    const auto merged = mvgcn::augment_graph(d.graph, lmod, rcfg);
    fs::create_directories(g.out_dir);
    mvgcn::export_merged_graph(g.out_dir / "merged", merged, rcfg);
    std::printf("added %zu, pruned %zu edges (ranking matrix %s) -> %s.tsv\n",
                merged.salient.size(), merged.pruned.size(),
                std::string(mvgcn::to_string(merged.matrix_used)).c_str(),
                (g.out_dir / "merged").string().c_str());
  });

  // train
  Overrides train_o;
  std::string split_path;
  auto* train = app.add_subcommand("train", "train one GCN and save the model");
  train_o.attach(train);
  train->add_option("--split", split_path, "split file (default: random split)");
  train->callback([&] {
    const auto cfg = train_o.resolve(g);
    const auto d = mvgcn::load_experiment_dataset(cfg);
    const auto split = split_path.empty()
                           ? mvgcn::make_split(d, cfg.split.per_class, cfg.split.val_size,
                                               cfg.split.test_size, cfg.seed)
                           : mvgcn::read_split_file(split_path, d);
    const auto graph = mvgcn::build_method_graph(cfg, d);
    const auto a_hat = mvgcn::renormalized_propagation(graph);
    const auto x = mvgcn::experiment_features(d, cfg.feature_source, cfg.normalize_features);
    auto tc = cfg.train;
    tc.seed = cfg.seed;
    const auto result = mvgcn::train(a_hat, x, split, tc);
    const double acc = mvgcn::evaluate(result.model, a_hat, x, split.test, split.labels);
    fs::create_directories(g.out_dir);
    mvgcn::save_model(g.out_dir / "model.bin", result.model);
    mvgcn::write_history_csv(g.out_dir / "history.csv", result.history);
    mvgcn::write_split_file(g.out_dir / "split.json", split);
    std::printf("best epoch %d, test accuracy %.2f%%\n", result.best_epoch, 100.0 * acc);
  });

  // run
  Overrides run_o;
  auto* run = app.add_subcommand("run", "repeated random-split experiment");
  run_o.attach(run);
  int run_status = 0;
  run->callback([&] { run_status = save_report(g, mvgcn::run_experiment(run_o.resolve(g))); });

  // run-fixed
  Overrides fixed_o;
  std::string fixed_split;
  auto* fixed = app.add_subcommand("run-fixed", "single run on a predefined split");
  fixed_o.attach(fixed);
  fixed->add_option("--split", fixed_split, "split file")->required();
  fixed->callback([&] {
    run_status = save_report(g, mvgcn::run_predefined_split(fixed_o.resolve(g), fixed_split));
  });

  // grid-alpha
  Overrides grid_o;
  std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0};
  auto* grid_cmd = app.add_subcommand("grid-alpha", "select alpha by validation accuracy");
  grid_o.attach(grid_cmd);
  grid_cmd->add_option("--grid", grid, "alpha values")->delimiter(',')->capture_default_str();
  grid_cmd->callback([&] {
    const auto cfg = grid_o.resolve(g);
    const auto d = mvgcn::load_experiment_dataset(cfg);
    const auto result = mvgcn::grid_search_alpha(cfg, d, grid);
    fs::create_directories(g.out_dir);
    write_text(g.out_dir / "alpha_search.json", mvgcn::alpha_search_json(result));
    for (const auto& t : result.table) {
      std::printf("alpha %-8g val %.2f%%  test %.2f%%%s\n", t.alpha,
                  100.0 * t.mean_val_accuracy, 100.0 * t.mean_test_accuracy,
                  t.partial ? " [partial]" : "");
    }
    std::printf("best alpha %g\n", result.best_alpha);
  });

  // synth
  mvgcn::SyntheticSpec spec;
  std::vector<std::string> view_specs;
  auto* synth = app.add_subcommand("synth", "write a planted-partition dataset");
  synth->add_option("--n", spec.n, "vertices")->capture_default_str();
  synth->add_option("--classes", spec.num_classes, "classes")->capture_default_str();
  synth->add_option("--noise", spec.feature_noise, "feature noise stddev")
      ->capture_default_str();
  synth->add_option("--view", view_specs,
                    "p_intra:p_inter[:g0/g1/...] per view (repeatable)")
      ->required();
  synth->callback([&] {
    for (const auto& text : view_specs) {
      mvgcn::ViewProbabilities p;
      std::vector<std::string> parts;
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
      if (parts.size() < 2 || parts.size() > 3) {
        throw mvgcn::ConfigError("--view expects p_intra:p_inter[:groups], got " + text);
      }
      try {
        p.p_intra = std::stod(parts[0]);
        p.p_inter = std::stod(parts[1]);
        if (parts.size() == 3) {
          std::stringstream gs(parts[2]);
          for (std::string gid; std::getline(gs, gid, '/');) p.groups.push_back(std::stoi(gid));
        }
      } catch (const std::exception&) {
        throw mvgcn::ConfigError("--view: bad number in " + text);
      }
      spec.views.push_back(std::move(p));
    }
    spec.seed = g.seed.value_or(0);
    try {
      spec.validate();
    } catch (const mvgcn::InvalidArgument& e) {
      throw mvgcn::ConfigError(e.what());
    }
    const auto d = mvgcn::generate_synthetic(spec);
    mvgcn::save_dataset(d, g.out_dir);
    std::printf("wrote %s (n=%lld, %zu views)\n", g.out_dir.string().c_str(),
                static_cast<long long>(d.num_vertices()), d.graph.num_views());
  });

  // spy
  std::string spy_dataset;
  std::string spy_g1;
  std::string spy_g2;
  Index spy_max = 2000;
  auto* spy = app.add_subcommand("spy", "spy plot of two views as a PPM image");
  spy->add_option("-d,--dataset", spy_dataset, "dataset directory (views 1 and 2)");
  spy->add_option("--graph1", spy_g1, "first edge list");
  spy->add_option("--graph2", spy_g2, "second edge list");
  spy->add_option("--max-side", spy_max, "image side cap")->capture_default_str();
  spy->callback([&] {
    fs::create_directories(g.out_dir);
    const fs::path out = g.out_dir / "spy.ppm";
    if (!spy_dataset.empty()) {
      const auto d = mvgcn::load_dataset(spy_dataset);
      const auto& v2 = d.graph.num_views() > 1 ? d.graph.view(1) : d.graph.view(0);
      mvgcn::emit_spy_plot(d.graph.view(0), v2, out, spy_max);
    } else if (!spy_g1.empty() && !spy_g2.empty()) {
      const auto a = mvgcn::read_edge_list(spy_g1);
      mvgcn::EdgeListOptions opts;
      opts.num_vertices = a.num_vertices();
      mvgcn::emit_spy_plot(a, mvgcn::read_edge_list(spy_g2, opts), out, spy_max);
    } else {
      throw mvgcn::ConfigError("spy: give --dataset or both --graph1 and --graph2");
    }
    std::printf("wrote %s\n", out.string().c_str());
  });

  // convert
  std::string content;
  std::string cites;
  std::string name = "dataset";
  double threshold = 0.8;
  auto* convert = app.add_subcommand("convert", "convert LINQS .content/.cites files");
  convert->add_option("--content", content, ".content file")->required();
  convert->add_option("--cites", cites, ".cites file")->required();
  convert->add_option("--name", name, "dataset name")->capture_default_str();
  convert->add_option("--threshold", threshold, "cosine threshold for view 2")
      ->capture_default_str();
  convert->callback([&] {
    const auto c = mvgcn::convert_linqs(content, cites, name, threshold);
    mvgcn::save_dataset(c.dataset, g.out_dir);
    std::printf(
        "wrote %s: n=%lld, view-1 edges %zu, view-2 edges %zu, C=%d, F=%lld\n"
        "cites lines %zu, unknown ids %zu, self citations %zu, reciprocal duplicates %zu\n",
        g.out_dir.string().c_str(), static_cast<long long>(c.dataset.num_vertices()),
        c.dataset.graph.view(0).num_edges(), c.dataset.graph.view(1).num_edges(),
        c.dataset.num_classes, static_cast<long long>(c.dataset.features.cols()),
        c.citation_lines, c.unknown_ids, c.self_citations, c.reciprocal_duplicates);
  });

  // score
  std::string score_dataset;
  std::string predictions;
  std::string score_split;
  auto* score = app.add_subcommand("score", "score external predictions on a split");
  score->add_option("-d,--dataset", score_dataset, "dataset directory")->required();
  score->add_option("--predictions", predictions, "vertex,class CSV")->required();
  score->add_option("--split", score_split, "split file (test indices)")->required();
  score->callback([&] {
    const auto d = mvgcn::load_dataset(score_dataset);
    const auto split = mvgcn::read_split_file(score_split, d);
    std::printf("test accuracy %.2f%%\n",
                100.0 * mvgcn::score_predictions(predictions, d, split.test));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const mvgcn::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const mvgcn::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return run_status;
}
