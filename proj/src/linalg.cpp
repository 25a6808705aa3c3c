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

#include "mvgcn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <lapacke.h>

#include "mvgcn/error.hpp"

namespace mvgcn {

EigenPairs smallest_eigenpairs_dense(const Eigen::MatrixXd& a, Index k) {
  const Index n = a.rows();
  if (a.cols() != n) throw InvalidArgument("eigensolver: matrix not square");
  if (k < 1 || k > n) {
    throw InvalidArgument("eigensolver: need 1 <= k <= n, got k=" +
                          std::to_string(k) + ", n=" + std::to_string(n));
  }
  require_finite(a, "eigensolver input");

  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), work.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(k),
      LAPACKE_dlamch('S'), &found, w.data(), z.data(),
      static_cast<lapack_int>(n), support.data());
  if (info != 0 || found != k) {
    throw NumericalError("eigensolver: dsyevr failed (info=" +
                         std::to_string(info) + ", found=" +
                         std::to_string(found) + ")");
  }
  return {std::move(z), w.head(k)};
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  if (a.cols() != n) throw InvalidArgument("eigensolver: matrix not square");
  require_finite(a, "eigensolver input");
  if (n == 0) return Eigen::VectorXd();
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(1, 1);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'N', 'A', 'L', static_cast<lapack_int>(n), work.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, 0, 0, LAPACKE_dlamch('S'), &found,
      w.data(), z.data(), 1, support.data());
  if (info != 0 || found != n) {
    throw NumericalError("eigensolver: dsyevr failed (info=" +
                         std::to_string(info) + ")");
  }
  return w;
}

namespace {

// Orthonormalizes `block` against the orthonormal columns of `basis` and
// among itself. Columns that collapse below `drop` relative norm are dropped.
Eigen::MatrixXd orthonormalize_against(const Eigen::MatrixXd& basis,
                                       const Eigen::MatrixXd& block,
                                       double drop) {
  Eigen::MatrixXd out(block.rows(), block.cols());
  Index kept = 0;
  for (Index c = 0; c < block.cols(); ++c) {
    Eigen::VectorXd v = block.col(c);
    const double original = v.norm();
    if (!(original > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      v -= basis * (basis.transpose() * v);
      if (kept > 0) v -= out.leftCols(kept) * (out.leftCols(kept).transpose() * v);
    }
    const double norm = v.norm();
    if (norm <= drop * original) continue;
    out.col(kept++) = v / norm;
  }
  return out.leftCols(kept);
}

struct RitzResult {
  Eigen::MatrixXd x;
  Eigen::MatrixXd ax;
  Eigen::VectorXd values;
  Eigen::MatrixXd coeffs;
};

// Rayleigh-Ritz on an orthonormal basis s with as = A s; keeps m pairs.
RitzResult rayleigh_ritz(const Eigen::MatrixXd& s, const Eigen::MatrixXd& as,
                         Index m) {
  Eigen::MatrixXd t = s.transpose() * as;
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigensolver: Rayleigh-Ritz step failed");
  }
  RitzResult r;
  r.coeffs = eig.eigenvectors().leftCols(m);
  r.values = eig.eigenvalues().head(m);
  r.x = s * r.coeffs;
  r.ax = as * r.coeffs;
  return r;
}

}  // namespace

EigenPairs smallest_eigenpairs_lobpcg(const BlockOperator& apply, Index n,
                                      Index k,
                                      const EigenSolverOptions& options) {
  if (k < 1 || k > n) {
    throw InvalidArgument("eigensolver: need 1 <= k <= n, got k=" +
                          std::to_string(k) + ", n=" + std::to_string(n));
  }
  const Index m = std::min(n, k + std::max<Index>(options.guard_vectors, 1));
  // 3m would cover the whole space; the dense solve is both faster and exact.
  if (3 * m >= n) {
    Eigen::MatrixXd dense(n, n);
    apply(Eigen::MatrixXd::Identity(n, n), dense);
    return smallest_eigenpairs_dense(0.5 * (dense + dense.transpose()), k);
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd start(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) start(i, j) = normal(rng);
  Eigen::MatrixXd x = Eigen::HouseholderQR<Eigen::MatrixXd>(start)
                          .householderQ() *
                      Eigen::MatrixXd::Identity(n, m);
  Eigen::MatrixXd ax(n, m);
  apply(x, ax);
  RitzResult ritz = rayleigh_ritz(x, ax, m);
  x = std::move(ritz.x);
  ax = std::move(ritz.ax);
  Eigen::VectorXd lambda = std::move(ritz.values);

  Eigen::MatrixXd p(n, 0);
  double max_residual = 0.0;
  int converged = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::MatrixXd r = ax - x * lambda.asDiagonal();
    max_residual = 0.0;
    converged = 0;
    std::vector<Index> active;
    for (Index j = 0; j < m; ++j) {
      const double res = r.col(j).norm();
      const double limit =
          options.tolerance * std::max(1.0, std::abs(lambda[j]));
      if (j < k) {
        max_residual = std::max(max_residual, res);
        if (res <= limit) ++converged;
      }
      if (res > 0.1 * limit) active.push_back(j);
    }
    if (converged == k) {
      return {x.leftCols(k), lambda.head(k)};
    }

    Eigen::MatrixXd search(n, static_cast<Index>(active.size()) + p.cols());
    for (std::size_t a = 0; a < active.size(); ++a) {
      search.col(static_cast<Index>(a)) = r.col(active[a]);
    }
    search.rightCols(p.cols()) = p;
    Eigen::MatrixXd q = orthonormalize_against(x, search, 1e-12);
    if (q.cols() == 0) break;
    Eigen::MatrixXd aq(n, q.cols());
    apply(q, aq);

    Eigen::MatrixXd s(n, m + q.cols());
    s << x, q;
    Eigen::MatrixXd as(n, m + q.cols());
    as << ax, aq;
    ritz = rayleigh_ritz(s, as, m);
    p = q * ritz.coeffs.bottomRows(q.cols());
    x = std::move(ritz.x);
    ax = std::move(ritz.ax);
    lambda = std::move(ritz.values);

    // Recurrence drift: restore exact orthonormality and A*X periodically.
    if (it % 25 == 0) {
      x = Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ() *
          Eigen::MatrixXd::Identity(n, m);
      apply(x, ax);
      ritz = rayleigh_ritz(x, ax, m);
      x = std::move(ritz.x);
      ax = std::move(ritz.ax);
      lambda = std::move(ritz.values);
      p.resize(n, 0);
    }
  }
  throw EigenSolverError("eigensolver: LOBPCG did not converge",
                         options.max_iterations, max_residual, converged,
                         static_cast<int>(k));
}

EigenPairs smallest_eigenpairs(const SparseMatrix& a, Index k,
                               const EigenSolverOptions& options) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("eigensolver: matrix not square");
  }
  if (a.rows() <= options.dense_threshold) {
    return smallest_eigenpairs_dense(Eigen::MatrixXd(a), k);
  }
  return smallest_eigenpairs_lobpcg(
      [&a](const Eigen::MatrixXd& in, Eigen::MatrixXd& out) { out = a * in; },
      a.rows(), k, options);
}

SymmetricIndefiniteSolver::SymmetricIndefiniteSolver(const Eigen::MatrixXd& a)
    : n_(a.rows()), factor_(a), pivots_(static_cast<std::size_t>(a.rows())) {
  if (a.cols() != n_) throw InvalidArgument("solver: matrix not square");
  require_finite(a, "solver input");
  if (n_ == 0) {
    rcond_ = 1.0;
    return;
  }
  const lapack_int n = static_cast<lapack_int>(n_);
  const double anorm = LAPACKE_dlansy(LAPACK_COL_MAJOR, '1', 'L', n, a.data(), n);
  const lapack_int info =
      LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, pivots_.data());
  if (info < 0) throw NumericalError("solver: dsytrf argument error");
  if (info > 0) {
    singular_ = true;
    rcond_ = 0.0;
    return;
  }
  const lapack_int cinfo = LAPACKE_dsycon(LAPACK_COL_MAJOR, 'L', n,
                                          factor_.data(), n, pivots_.data(),
                                          anorm, &rcond_);
  if (cinfo != 0) throw NumericalError("solver: dsycon failed");
}

Eigen::MatrixXd SymmetricIndefiniteSolver::solve(const Eigen::MatrixXd& b) const {
  if (singular_) throw NumericalError("solver: matrix is singular");
  if (b.rows() != n_) throw InvalidArgument("solver: right-hand side size");
  Eigen::MatrixXd x = b;
  if (n_ == 0) return x;
  const lapack_int n = static_cast<lapack_int>(n_);
  const lapack_int info = LAPACKE_dsytrs(
      LAPACK_COL_MAJOR, 'L', n, static_cast<lapack_int>(x.cols()),
      factor_.data(), n, pivots_.data(), x.data(), n);
  if (info != 0) throw NumericalError("solver: dsytrs failed");
  return x;
}

}  // namespace mvgcn
