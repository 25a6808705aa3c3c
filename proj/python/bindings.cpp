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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "mvgcn/error.hpp"
#include "mvgcn/experiment.hpp"

namespace py = pybind11;

namespace mvgcn {
namespace {

using RowEdges = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

SparseSymGraph graph_from_array(Index n, const RowEdges& edges) {
  if (edges.size() > 0 && edges.cols() != 2 && edges.cols() != 3) {
    throw InvalidArgument("edges must have shape (m, 2) or (m, 3)");
  }
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edges.rows()));
  for (Index i = 0; i < edges.rows(); ++i) {
    const double u = edges(i, 0);
    const double v = edges(i, 1);
    if (u != std::floor(u) || v != std::floor(v)) {
      throw InvalidArgument("edge endpoints must be integers");
    }
    out.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v),
                   edges.cols() == 3 ? edges(i, 2) : 1.0});
  }
  return SparseSymGraph(n, std::move(out));
}

RowEdges graph_to_array(const SparseSymGraph& g) {
  RowEdges out(static_cast<Index>(g.num_edges()), 3);
  Index i = 0;
  for (const Edge& e : g.edges()) {
    out.row(i++) << e.u, e.v, e.w;
  }
  return out;
}

LabeledSplit split_from_lists(std::vector<Vertex> train, std::vector<Vertex> val,
                              std::vector<Vertex> test, std::vector<int> labels) {
  LabeledSplit s;
  s.train = std::move(train);
  s.val = std::move(val);
  s.test = std::move(test);
  s.labels = std::move(labels);
  return s;
}

}  // namespace
}  // namespace mvgcn

PYBIND11_MODULE(_core, m) {
  using namespace mvgcn;
  m.doc() = "Multi-view graph fusion, manifold ranking and GCN training.";

  static py::exception<Error> error(m, "Error");
  static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
  static py::exception<IoError> io_error(m, "IoError", error.ptr());
  static py::exception<NumericalError> numerical_error(m, "NumericalError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const IoError& e) {
      py::set_error(io_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    } catch (const InvalidArgument& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<SparseSymGraph>(m, "Graph")
      .def(py::init(&graph_from_array), py::arg("n"), py::arg("edges"),
           "Undirected graph from an (m, 2) or (m, 3) array of u, v[, w].")
      .def_property_readonly("num_vertices", &SparseSymGraph::num_vertices)
      .def_property_readonly("num_edges", &SparseSymGraph::num_edges)
      .def("edges", &graph_to_array)
      .def("has_edge", &SparseSymGraph::has_edge)
      .def("adjacency", &SparseSymGraph::adjacency)
      .def("__eq__", [](const SparseSymGraph& a, const SparseSymGraph& b) { return a == b; })
      .def("__repr__", [](const SparseSymGraph& g) {
        return "Graph(n=" + std::to_string(g.num_vertices()) +
               ", edges=" + std::to_string(g.num_edges()) + ")";
      });

  m.def("read_edge_list",
        [](const std::filesystem::path& p, bool keep_weights) {
          EdgeListOptions o;
          o.keep_weights = keep_weights;
          return read_edge_list(p, o);
        },
        py::arg("path"), py::arg("keep_weights") = false);
  m.def("write_edge_list", &write_edge_list, py::arg("path"), py::arg("graph"));
  m.def("degree_vector", &degree_vector);
  m.def("normalized_laplacian", &normalized_laplacian,
        "Sparse I - D^-1/2 W D^-1/2 as a scipy.sparse matrix.");
  m.def("renormalized_propagation", &renormalized_propagation);
  m.def("union_views", [](std::vector<SparseSymGraph> views) {
    return union_views(MultiViewGraph(std::move(views)));
  });

  m.def("spectral_embedding",
        [](const SparseMatrix& l, Index k) {
          SpectralEmbedding e = spectral_embedding(l, k);
          return py::make_tuple(e.basis, e.eigenvalues);
        },
        py::arg("laplacian"), py::arg("k"), "Returns (basis, eigenvalues).");
  m.def("projection_distance_sq", &projection_distance_sq);

  py::class_<ModifiedLaplacian>(m, "ModifiedLaplacian")
      .def_readonly("matrix", &ModifiedLaplacian::matrix)
      .def_readonly("merged_basis", &ModifiedLaplacian::merged_basis)
      .def_readonly("merged_eigenvalues", &ModifiedLaplacian::merged_eigenvalues)
      .def_property_readonly("view_bases", [](const ModifiedLaplacian& l) {
        std::vector<Eigen::MatrixXd> out;
        for (const auto& e : l.view_embeddings) out.push_back(e.basis);
        return out;
      });
  m.def("merge_views",
        [](std::vector<SparseSymGraph> views, Index k, std::vector<double> alphas) {
          FusionConfig cfg;
          cfg.k = k;
          cfg.alphas = std::move(alphas);
          if (cfg.alphas.empty()) cfg.alphas.assign(views.size(), 0.5);
          return merge_views(MultiViewGraph(std::move(views)), cfg);
        },
        py::arg("views"), py::arg("k"), py::arg("alphas") = std::vector<double>{});

  m.def("manifold_rank",
        [](const Eigen::MatrixXd& lmod, const Eigen::VectorXd& q, double beta,
           const std::string& matrix) {
          return manifold_rank(lmod, q, beta, ranking_matrix_from_string(matrix));
        },
        py::arg("lmod"), py::arg("query"), py::arg("beta") = 0.99,
        py::arg("matrix") = "laplacian");

  py::class_<MergedGraph>(m, "MergedGraph")
      .def_readonly("adjacency", &MergedGraph::adjacency)
      .def_readonly("centroids", &MergedGraph::centroids)
      .def_readonly("scores", &MergedGraph::scores)
      .def_property_readonly("salient",
                             [](const MergedGraph& g) {
                               return graph_to_array(SparseSymGraph(
                                   g.adjacency.num_vertices(), g.salient));
                             })
      .def_property_readonly("pruned", [](const MergedGraph& g) {
        return graph_to_array(SparseSymGraph(g.adjacency.num_vertices(), g.pruned));
      });
  m.def("augment_graph",
        [](std::vector<SparseSymGraph> views, const ModifiedLaplacian& lmod,
           Index num_centroids, Index add, Index prune, double beta,
           const std::string& matrix, std::uint64_t seed) {
          RankingConfig cfg;
          cfg.num_centroids = num_centroids;
          cfg.add_per_centroid = add;
          cfg.prune_per_centroid = prune;
          cfg.beta = beta;
          cfg.matrix = ranking_matrix_from_string(matrix);
          cfg.seed = seed;
          return augment_graph(MultiViewGraph(std::move(views)), lmod, cfg);
        },
        py::arg("views"), py::arg("lmod"), py::arg("num_centroids"), py::arg("add") = 5,
        py::arg("prune") = 5, py::arg("beta") = 0.99, py::arg("matrix") = "laplacian",
        py::arg("seed") = 0);

  py::class_<GcnModel>(m, "GcnModel")
      .def(py::init([](Eigen::MatrixXd w0, Eigen::MatrixXd w1) {
             return GcnModel{std::move(w0), std::move(w1)};
           }),
           py::arg("w0"), py::arg("w1"))
      .def_readwrite("w0", &GcnModel::w0)
      .def_readwrite("w1", &GcnModel::w1);
  m.def("forward",
        [](const GcnModel& model, const SparseMatrix& a_hat, const Eigen::MatrixXd& x) {
          return forward(model, a_hat, x);
        },
        py::arg("model"), py::arg("a_hat"), py::arg("x"));
  m.def("loss_and_grads",
        [](const GcnModel& model, const SparseMatrix& a_hat, const Eigen::MatrixXd& x,
           std::vector<Vertex> train_idx, std::vector<int> labels, double weight_decay) {
          TrainConfig cfg;
          cfg.weight_decay = weight_decay;
          const LossAndGrads lg =
              loss_and_grads(model, a_hat, x, split_from_lists(std::move(train_idx), {}, {},
                                                               std::move(labels)),
                             cfg);
          return py::make_tuple(lg.loss, lg.grad_w0, lg.grad_w1);
        },
        py::arg("model"), py::arg("a_hat"), py::arg("x"), py::arg("train_idx"),
        py::arg("labels"), py::arg("weight_decay") = 5e-4);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("name", &Dataset::name)
      .def_readonly("features", &Dataset::features)
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("num_classes", &Dataset::num_classes)
      .def_property_readonly("num_vertices", &Dataset::num_vertices)
      .def_property_readonly("views", [](const Dataset& d) {
        return std::vector<SparseSymGraph>(d.graph.views().begin(), d.graph.views().end());
      });
  m.def("load_dataset", [](const std::filesystem::path& dir) { return load_dataset(dir); });
  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("dir"));

  m.def("run_experiment_json",
        [](const std::string& config_json) {
          return report_json(run_experiment(parse_experiment_config(config_json)));
        },
        py::arg("config_json"),
        "Run a JSON experiment config and return the deterministic report JSON.");
  m.def("load_config_dataset", [](const std::string& config_json) {
    return load_experiment_dataset(parse_experiment_config(config_json));
  });
}
