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

#include <unistd.h>

#include <random>

#include "gtest/gtest.h"
#include "mvgcn/error.hpp"
#include "test_util.hpp"

namespace mvgcn {
namespace {

Eigen::MatrixXd random_symmetric(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  return (a + a.transpose()) / 2.0;
}

// Guards against BLAS builds that silently return wrong blocked products.
TEST(DenseEigenTest, OrthonormalAtBlockedSizes) {
  std::mt19937_64 rng(3);
  for (Index n : {64, 257, 400}) {
    const Eigen::MatrixXd a = random_symmetric(n, rng);
    const EigenPairs pairs = smallest_eigenpairs_dense(a, 10);
    const Eigen::MatrixXd& v = pairs.vectors;
    EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(10, 10)).norm(), 1e-10)
        << "n=" << n;
    EXPECT_LT((a * v - v * pairs.values.asDiagonal()).norm(), 1e-9) << "n=" << n;
    const Eigen::VectorXd oracle = testing::oracle_eigenvalues(a);
    EXPECT_LT((pairs.values - oracle.head(10)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DenseEigenTest, EigenvaluesMatchOracle) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd a = random_symmetric(300, rng);
  EXPECT_LT((symmetric_eigenvalues(a) - testing::oracle_eigenvalues(a))
                .cwiseAbs()
                .maxCoeff(),
            1e-9);
}

TEST(DenseEigenTest, RejectsBadK) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(smallest_eigenpairs_dense(a, 0), InvalidArgument);
  EXPECT_THROW(smallest_eigenpairs_dense(a, 4), InvalidArgument);
  EXPECT_THROW(smallest_eigenpairs_dense(Eigen::MatrixXd::Zero(2, 3), 1),
               InvalidArgument);
}

TEST(LobpcgTest, MatchesDenseOnGraphLaplacian) {
  std::mt19937_64 rng(8);
  const SparseSymGraph g = testing::planted_graph(600, 4, 0.05, 0.005, rng);
  const SparseMatrix l = normalized_laplacian(g);
  EigenSolverOptions opts;
  opts.dense_threshold = 0;
  const EigenPairs it = smallest_eigenpairs(l, 6, opts);
  const Eigen::VectorXd oracle = testing::oracle_eigenvalues(testing::dense(l));
  EXPECT_LT((it.values - oracle.head(6)).cwiseAbs().maxCoeff(), 1e-7);
  const Eigen::MatrixXd& v = it.vectors;
  EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-8);
  const Eigen::MatrixXd residual = l * v - v * it.values.asDiagonal();
  EXPECT_LT(residual.colwise().norm().maxCoeff(), 1e-7);
}

TEST(LobpcgTest, ReportsDiagnosticsOnNonConvergence) {
  std::mt19937_64 rng(9);
  const SparseMatrix l =
      normalized_laplacian(testing::random_graph(300, 0.05, rng));
  EigenSolverOptions opts;
  opts.dense_threshold = 0;
  opts.max_iterations = 2;
  opts.tolerance = 1e-14;
  try {
    smallest_eigenpairs(l, 5, opts);
    FAIL() << "expected EigenSolverError";
  } catch (const EigenSolverError& e) {
    EXPECT_EQ(e.requested(), 5);
    EXPECT_LE(e.iterations(), 2);
    EXPECT_GT(e.max_residual(), 0.0);
  }
}

TEST(SymmetricSolverTest, SolvesIndefiniteSystems) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd a = random_symmetric(120, rng);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Random(120, 3);
  const SymmetricIndefiniteSolver solver(a);
  ASSERT_FALSE(solver.singular());
  EXPECT_GT(solver.rcond(), 0.0);
  EXPECT_LT((a * solver.solve(b) - b).norm(), 1e-8);
}

TEST(SymmetricSolverTest, FlagsSingularAndIllConditioned) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
  s(2, 2) = 0.0;
  const SymmetricIndefiniteSolver singular(s);
  EXPECT_TRUE(singular.singular());
  EXPECT_EQ(singular.rcond(), 0.0);
  EXPECT_THROW(singular.solve(Eigen::VectorXd::Ones(3)), NumericalError);

  Eigen::MatrixXd ill = Eigen::MatrixXd::Identity(3, 3);
  ill(2, 2) = 1e-14;
  EXPECT_LT(SymmetricIndefiniteSolver(ill).rcond(), 1e-12);
}

}  // namespace
}  // namespace mvgcn
