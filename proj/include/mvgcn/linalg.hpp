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
#include <functional>
#include <vector>

#include "mvgcn/graph.hpp"

namespace mvgcn {

/// k eigenpairs, eigenvalues ascending, eigenvectors as orthonormal columns.
struct EigenPairs {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

struct EigenSolverOptions {
  /// Problems with n at or below this size use a dense LAPACK solve.
  Index dense_threshold = 2000;
  /// Residual tolerance ||A x - lambda x|| <= tolerance * max(1, |lambda|).
  double tolerance = 1e-8;
  int max_iterations = 5000;
  /// Extra block columns carried by LOBPCG beyond the k requested.
  Index guard_vectors = 10;
  std::uint64_t seed = 0x5eed;
};

/// Computes `out = A * in` for a block of column vectors.
using BlockOperator =
    std::function<void(const Eigen::MatrixXd& in, Eigen::MatrixXd& out)>;

/// k smallest eigenpairs of a dense symmetric matrix (LAPACK dsyevr).
/// Only the lower triangle is read.
EigenPairs smallest_eigenpairs_dense(const Eigen::MatrixXd& a, Index k);

/// All eigenvalues of a dense symmetric matrix, ascending. Lower triangle only.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// k smallest eigenpairs of a symmetric operator by block LOBPCG without
/// preconditioning. Throws EigenSolverError with diagnostics on
/// non-convergence.
EigenPairs smallest_eigenpairs_lobpcg(const BlockOperator& apply, Index n,
                                      Index k,
                                      const EigenSolverOptions& options = {});

/// Dispatches to the dense path for n <= dense_threshold, LOBPCG otherwise.
EigenPairs smallest_eigenpairs(const SparseMatrix& a, Index k,
                               const EigenSolverOptions& options = {});

/// Symmetric indefinite factorization (Bunch-Kaufman, LAPACK dsytrf) with a
/// reciprocal condition estimate in the 1-norm.
class SymmetricIndefiniteSolver {
 public:
  explicit SymmetricIndefiniteSolver(const Eigen::MatrixXd& a);

  /// Reciprocal 1-norm condition estimate; 0 when the factor is singular.
  double rcond() const { return rcond_; }
  bool singular() const { return singular_; }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  Index n_ = 0;
  Eigen::MatrixXd factor_;
  std::vector<int> pivots_;
  double rcond_ = 0.0;
  bool singular_ = false;
};

}  // namespace mvgcn
