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

#include <unistd.h>

#include <random>

#include "gtest/gtest.h"
#include "mvgcn/error.hpp"
#include "test_util.hpp"

namespace mvgcn {
namespace {

using testing::dense;
using testing::random_orthonormal;

double trace_form(const SparseMatrix& l, const Eigen::MatrixXd& u) {
  return (u.transpose() * (l * u)).trace();
}

TEST(SpectralEmbeddingTest, DisconnectedGraphHasZeroTrace) {
  // Three components, k = 3.
  const SparseSymGraph g(7, {{0, 1, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {5, 6, 1.0}});
  const SparseMatrix l = normalized_laplacian(g);
  const SpectralEmbedding e = spectral_embedding(l, 3);
  EXPECT_NEAR(trace_form(l, e.basis), 0.0, 1e-10);
}

TEST(SpectralEmbeddingTest, FullBasisGivesTrace) {
  std::mt19937_64 rng(1);
  const SparseMatrix l = normalized_laplacian(testing::random_graph(12, 0.3, rng));
  const SpectralEmbedding e = spectral_embedding(l, 12);
  EXPECT_NEAR(trace_form(l, e.basis), dense(l).trace(), 1e-10);
}

TEST(SpectralEmbeddingTest, PropertyMatchesOracleSum) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const SparseMatrix l =
        normalized_laplacian(testing::random_graph(50, 0.1, rng, trial % 2 == 0));
    const SpectralEmbedding e = spectral_embedding(l, 5);
    const Eigen::VectorXd oracle = testing::oracle_eigenvalues(dense(l));
    EXPECT_NEAR(trace_form(l, e.basis), oracle.head(5).sum(), 1e-8);
    EXPECT_LT((e.basis.transpose() * e.basis - Eigen::MatrixXd::Identity(5, 5)).norm(),
              1e-8);
    for (Index i = 0; i < 5; ++i) {
      EXPECT_GE(e.eigenvalues[i], -1e-10);
      EXPECT_LE(e.eigenvalues[i], 2.0 + 1e-10);
      if (i > 0) EXPECT_LE(e.eigenvalues[i - 1], e.eigenvalues[i]);
    }
  }
}

TEST(ProjectionDistanceTest, SpecExamples) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_NEAR(projection_distance_sq(id.leftCols(2), id.leftCols(2)), 0.0, 1e-15);
  EXPECT_NEAR(projection_distance_sq(id.leftCols(2), id.rightCols(2)), 2.0, 1e-15);
  EXPECT_THROW(projection_distance_sq(id.leftCols(2), id.leftCols(3)),
               InvalidArgument);
}

TEST(ProjectionDistanceTest, PropertyPrincipalAnglesSymmetryRotation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd y1 = random_orthonormal(10, 3, rng);
    const Eigen::MatrixXd y2 = random_orthonormal(10, 3, rng);
    const double d = projection_distance_sq(y1, y2);
    const Eigen::VectorXd cosines =
        Eigen::JacobiSVD<Eigen::MatrixXd>(y1.transpose() * y2).singularValues();
    const double sines = (1.0 - cosines.array().square()).sum();
    EXPECT_NEAR(d, sines, 1e-12);
    EXPECT_NEAR(d, projection_distance_sq(y2, y1), 1e-12);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 3.0);
    const Eigen::MatrixXd r = random_orthonormal(3, 3, rng);
    EXPECT_NEAR(d, projection_distance_sq(y1 * r, y2), 1e-12);
    EXPECT_NEAR(d, projection_distance_sq(y1, y2 * r), 1e-12);
  }
}

TEST(MultiViewDistanceTest, SumOfPairwise) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd u = random_orthonormal(15, 4, rng);
  EXPECT_NEAR(multi_view_distance_sq(u, std::vector<Eigen::MatrixXd>{u}), 0.0, 1e-12);
  std::vector<Eigen::MatrixXd> views;
  double pairwise = 0.0;
  double trace_form_total = 0.0;
  for (int i = 0; i < 3; ++i) {
    views.push_back(random_orthonormal(15, 4, rng));
    pairwise += projection_distance_sq(u, views.back());
    trace_form_total +=
        (u * u.transpose() * views.back() * views.back().transpose()).trace();
  }
  EXPECT_NEAR(multi_view_distance_sq(u, views), pairwise, 1e-12);
  EXPECT_NEAR(multi_view_distance_sq(u, views), 4.0 * 3.0 - trace_form_total, 1e-12);
}

FusionConfig config(Index k, std::vector<double> alphas) {
  FusionConfig cfg;
  cfg.k = k;
  cfg.alphas = std::move(alphas);
  return cfg;
}

TEST(FusionConfigTest, Validation) {
  EXPECT_THROW(config(0, {0.5}).validate(5, 1), InvalidArgument);
  EXPECT_THROW(config(6, {0.5}).validate(5, 1), InvalidArgument);
  EXPECT_THROW(config(2, {0.5}).validate(5, 2), InvalidArgument);
  EXPECT_THROW(config(2, {-0.1}).validate(5, 1), InvalidArgument);
  EXPECT_NO_THROW(config(5, {0.0, 2.0}).validate(5, 2));
}

TEST(MergeViewsTest, SingleViewZeroAlphaIsLaplacian) {
  std::mt19937_64 rng(5);
  const SparseSymGraph g = testing::random_graph(30, 0.15, rng);
  const ModifiedLaplacian m = merge_views(MultiViewGraph({g}), config(3, {0.0}));
  EXPECT_EQ(m.matrix, dense(normalized_laplacian(g)));
}

TEST(MergeViewsTest, ZeroAlphasSumLaplacians) {
  std::mt19937_64 rng(6);
  const SparseSymGraph a = testing::random_graph(25, 0.2, rng);
  const SparseSymGraph b = testing::random_graph(25, 0.2, rng);
  const ModifiedLaplacian m = merge_views(MultiViewGraph({a, b}), config(3, {0.0, 0.0}));
  EXPECT_LT((m.matrix - dense(normalized_laplacian(a)) - dense(normalized_laplacian(b)))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(MergeViewsTest, IdenticalViewsKeepSubspace) {
  std::mt19937_64 rng(7);
  const SparseSymGraph g = testing::planted_graph(40, 2, 0.4, 0.05, rng);
  for (double a : {0.0, 0.5, 2.0}) {
    const ModifiedLaplacian m = merge_views(MultiViewGraph({g, g}), config(2, {a, a}));
    const Eigen::MatrixXd& u1 = m.view_embeddings[0].basis;
    const Eigen::MatrixXd expected =
        2.0 * dense(normalized_laplacian(g)) - 2.0 * a * u1 * u1.transpose();
    EXPECT_LT((m.matrix - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(projection_distance_sq(m.merged_basis, u1), 1e-6) << "alpha=" << a;
  }
}

TEST(MergeViewsTest, PropertyObjectiveMinimizedAndSymmetric) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 40 + 6 * trial;
    const SparseSymGraph a = testing::planted_graph(n, 2, 0.3, 0.03, rng);
    const SparseSymGraph b = testing::random_graph(n, 0.1, rng);
    const std::vector<double> alphas{0.3 + 0.1 * trial, 0.5};
    const ModifiedLaplacian m = merge_views(MultiViewGraph({a, b}), config(4, alphas));
    ASSERT_EQ(m.matrix, m.matrix.transpose());
    const Eigen::MatrixXd& u = m.merged_basis;
    EXPECT_LT((u.transpose() * u - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-8);

    const std::vector<SparseMatrix> ls{normalized_laplacian(a), normalized_laplacian(b)};
    const std::vector<Eigen::MatrixXd> bases{m.view_embeddings[0].basis,
                                             m.view_embeddings[1].basis};
    const double at_merged = fusion_objective(u, ls, bases, alphas);
    // The objective is tr(U' L_mod U) plus a constant.
    EXPECT_NEAR(at_merged,
                (u.transpose() * m.matrix * u).trace() + 4.0 * (alphas[0] + alphas[1]),
                1e-9);
    for (const Eigen::MatrixXd& candidate : bases) {
      EXPECT_LE(at_merged, fusion_objective(candidate, ls, bases, alphas) + 1e-9);
    }
    for (int r = 0; r < 5; ++r) {
      EXPECT_LE(at_merged,
                fusion_objective(random_orthonormal(n, 4, rng), ls, bases, alphas));
    }
  }
}

TEST(MergeViewsTest, IterativePathAgreesWithDense) {
  std::mt19937_64 rng(9);
  const SparseSymGraph a = testing::planted_graph(300, 3, 0.08, 0.005, rng);
  const SparseSymGraph b = testing::planted_graph(300, 3, 0.08, 0.01, rng);
  const MultiViewGraph g({a, b});
  FusionConfig cfg = config(3, {0.5, 0.5});
  const ModifiedLaplacian reference = merge_views(g, cfg);
  cfg.eigen.dense_threshold = 0;
  const ModifiedLaplacian iterative = merge_views(g, cfg);
  EXPECT_LT((reference.merged_eigenvalues - iterative.merged_eigenvalues)
                .cwiseAbs()
                .maxCoeff(),
            1e-7);
  EXPECT_LT(projection_distance_sq(reference.merged_basis, iterative.merged_basis), 1e-6);
}

TEST(ModifiedLaplacianIoTest, RoundTripIsExact) {
  std::mt19937_64 rng(10);
  const SparseSymGraph a = testing::random_graph(20, 0.2, rng);
  const ModifiedLaplacian m = merge_views(MultiViewGraph({a, a}), config(3, {0.5, 0.5}));
  const auto dir = testing::temp_dir("lmod");
  save_modified_laplacian(dir / "l.bin", m);
  const ModifiedLaplacian back = load_modified_laplacian(dir / "l.bin");
  EXPECT_EQ(back.matrix, m.matrix);
  EXPECT_EQ(back.merged_basis, m.merged_basis);
  EXPECT_EQ(back.merged_eigenvalues, m.merged_eigenvalues);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mvgcn
