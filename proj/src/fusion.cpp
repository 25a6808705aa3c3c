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

#include "mvgcn/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "binary_io.hpp"
#include "mvgcn/error.hpp"

namespace mvgcn {

void FusionConfig::validate(Index n, std::size_t views) const {
  if (k < 1 || k > n) {
    throw InvalidArgument("fusion: k must be in [1, n], got " +
                          std::to_string(k));
  }
  if (alphas.size() != views) {
    throw InvalidArgument("fusion: " + std::to_string(alphas.size()) +
                          " alphas for " + std::to_string(views) + " views");
  }
  for (double a : alphas) {
    if (!std::isfinite(a) || a < 0.0) {
      throw InvalidArgument("fusion: alphas must be finite and >= 0");
    }
  }
}

SpectralEmbedding spectral_embedding(const SparseMatrix& laplacian, Index k,
                                     const EigenSolverOptions& options) {
  EigenPairs pairs = smallest_eigenpairs(laplacian, k, options);
  return {std::move(pairs.vectors), std::move(pairs.values)};
}

double projection_distance_sq(const Eigen::MatrixXd& y1,
                              const Eigen::MatrixXd& y2) {
  if (y1.rows() != y2.rows() || y1.cols() != y2.cols()) {
    throw InvalidArgument("projection distance: shape mismatch");
  }
  const double k = static_cast<double>(y1.cols());
  const double overlap = (y1.transpose() * y2).squaredNorm();
  return std::clamp(k - overlap, 0.0, k);
}

double multi_view_distance_sq(const Eigen::MatrixXd& u,
                              std::span<const Eigen::MatrixXd> views) {
  double total = 0.0;
  for (const Eigen::MatrixXd& v : views) total += projection_distance_sq(u, v);
  return total;
}

double fusion_objective(const Eigen::MatrixXd& u,
                        std::span<const SparseMatrix> laplacians,
                        std::span<const Eigen::MatrixXd> view_bases,
                        std::span<const double> alphas) {
  if (laplacians.size() != view_bases.size() ||
      laplacians.size() != alphas.size()) {
    throw InvalidArgument("fusion objective: view count mismatch");
  }
  const double k = static_cast<double>(u.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < laplacians.size(); ++i) {
    if (view_bases[i].rows() != u.rows() || view_bases[i].cols() != u.cols()) {
      throw InvalidArgument("fusion objective: shape mismatch");
    }
    total += (u.transpose() * (laplacians[i] * u)).trace();
    total += alphas[i] *
             (k - (u.transpose() * view_bases[i]).squaredNorm());
  }
  return total;
}

ModifiedLaplacian merge_views(const MultiViewGraph& g, const FusionConfig& cfg) {
  const Index n = g.num_vertices();
  cfg.validate(n, g.num_views());

  std::vector<SparseMatrix> laplacians;
  laplacians.reserve(g.num_views());
  ModifiedLaplacian out;
  for (const SparseSymGraph& view : g.views()) {
    laplacians.push_back(normalized_laplacian(view));
    out.view_embeddings.push_back(
        spectral_embedding(laplacians.back(), cfg.k, cfg.eigen));
  }

  Eigen::MatrixXd lmod = Eigen::MatrixXd::Zero(n, n);
  for (const SparseMatrix& l : laplacians) {
    for (Index col = 0; col < l.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(l, col); it; ++it) {
        lmod(it.row(), it.col()) += it.value();
      }
    }
  }
  for (std::size_t i = 0; i < laplacians.size(); ++i) {
    if (cfg.alphas[i] != 0.0) {
      lmod.selfadjointView<Eigen::Lower>().rankUpdate(
          out.view_embeddings[i].basis, -cfg.alphas[i]);
    }
  }
  // rankUpdate only touches the lower triangle; mirror it so the stored
  // matrix is symmetric bit for bit.
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) lmod(j, i) = lmod(i, j);

  EigenPairs merged;
  if (n <= cfg.eigen.dense_threshold) {
    merged = smallest_eigenpairs_dense(lmod, cfg.k);
  } else {
    // Sparse Laplacians plus a low-rank correction; never touches the dense
    // matrix during iteration.
    merged = smallest_eigenpairs_lobpcg(
        [&](const Eigen::MatrixXd& in, Eigen::MatrixXd& result) {
          result = Eigen::MatrixXd::Zero(in.rows(), in.cols());
          for (std::size_t i = 0; i < laplacians.size(); ++i) {
            result += laplacians[i] * in;
            if (cfg.alphas[i] != 0.0) {
              const Eigen::MatrixXd& u = out.view_embeddings[i].basis;
              result -= cfg.alphas[i] * (u * (u.transpose() * in));
            }
          }
        },
        n, cfg.k, cfg.eigen);
  }
  out.matrix = std::move(lmod);
  out.merged_basis = std::move(merged.vectors);
  out.merged_eigenvalues = std::move(merged.values);
  return out;
}

namespace {
constexpr std::string_view kLaplacianMagic = "MVGCNLM1";
}

void save_modified_laplacian(const std::filesystem::path& path,
                             const ModifiedLaplacian& lmod) {
  detail::BinaryWriter w(path.string());
  w.magic(kLaplacianMagic);
  w.u64(static_cast<std::uint64_t>(lmod.num_vertices()));
  w.u64(static_cast<std::uint64_t>(lmod.k()));
  w.matrix(lmod.matrix);
  w.matrix(lmod.merged_basis);
  w.matrix(lmod.merged_eigenvalues.transpose());
  w.finish();
}

ModifiedLaplacian load_modified_laplacian(const std::filesystem::path& path) {
  detail::BinaryReader r(path.string());
  r.expect_magic(kLaplacianMagic);
  const std::uint64_t n = r.u64();
  const std::uint64_t k = r.u64();
  if (k > n) throw IoError(path.string(), 0, "k exceeds n in header");
  ModifiedLaplacian out;
  out.matrix = r.matrix(n, n);
  out.merged_basis = r.matrix(n, k);
  out.merged_eigenvalues = r.matrix(1, k).transpose();
  r.expect_end();
  require_finite(out.matrix, "modified Laplacian checkpoint");
  return out;
}

}  // namespace mvgcn
