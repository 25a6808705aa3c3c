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

// Subspace fusion of multi-view graphs on the Grassmann manifold.
//
// Every view contributes its normalized Laplacian L_i and the span of its k
// lowest eigenvectors U_i. The merged representation is the k lowest
// eigenvectors of
//
//     L_mod = sum_i L_i - sum_i alpha_i U_i U_i^T
//
// which minimizes sum_i tr(U^T L_i U) + alpha_i * d^2(U, U_i) over
// orthonormal U, with d^2 the projection distance between subspaces.

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "mvgcn/graph.hpp"
#include "mvgcn/linalg.hpp"

namespace mvgcn {

/// Orthonormal basis of the k lowest eigenvectors of a Laplacian.
struct SpectralEmbedding {
  Eigen::MatrixXd basis;         // n x k, columns orthonormal
  Eigen::VectorXd eigenvalues;   // ascending
};

struct FusionConfig {
  Index k = 2;
  std::vector<double> alphas;
  EigenSolverOptions eigen;

  /// Throws InvalidArgument unless 1 <= k <= n, alphas.size() == views and
  /// every alpha is finite and non-negative.
  void validate(Index n, std::size_t views) const;
};

struct ModifiedLaplacian {
  Eigen::MatrixXd matrix;             // n x n, exactly symmetric
  Eigen::MatrixXd merged_basis;       // n x k
  Eigen::VectorXd merged_eigenvalues; // ascending
  std::vector<SpectralEmbedding> view_embeddings;

  Index num_vertices() const { return matrix.rows(); }
  Index k() const { return merged_basis.cols(); }
};

SpectralEmbedding spectral_embedding(const SparseMatrix& laplacian, Index k,
                                     const EigenSolverOptions& options = {});

/// k - tr(Y1 Y1^T Y2 Y2^T), evaluated as k - ||Y1^T Y2||_F^2 and clamped to
/// [0, k].
double projection_distance_sq(const Eigen::MatrixXd& y1,
                              const Eigen::MatrixXd& y2);

/// Sum of projection distances from `u` to each of `views`.
double multi_view_distance_sq(const Eigen::MatrixXd& u,
                              std::span<const Eigen::MatrixXd> views);

/// The fusion objective sum_i tr(U^T L_i U) + alpha_i [kM - tr(U U^T U_i U_i^T)]
/// evaluated directly for a candidate U.
double fusion_objective(const Eigen::MatrixXd& u,
                        std::span<const SparseMatrix> laplacians,
                        std::span<const Eigen::MatrixXd> view_bases,
                        std::span<const double> alphas);

ModifiedLaplacian merge_views(const MultiViewGraph& g, const FusionConfig& cfg);

/// Binary checkpoint. Layout (little-endian):
///   char[8] magic "MVGCNLM1", uint64 n, uint64 k,
///   n*n doubles L_mod row-major, n*k doubles merged basis row-major,
///   k doubles merged eigenvalues.
void save_modified_laplacian(const std::filesystem::path& path,
                             const ModifiedLaplacian& lmod);
ModifiedLaplacian load_modified_laplacian(const std::filesystem::path& path);

}  // namespace mvgcn
