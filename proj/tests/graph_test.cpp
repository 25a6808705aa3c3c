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

#include "mvgcn/graph.hpp"

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "gtest/gtest.h"
#include "mvgcn/error.hpp"
#include "test_util.hpp"

namespace mvgcn {
namespace {

using testing::dense;
using testing::oracle_eigenvalues;

SparseSymGraph triangle() {
  return SparseSymGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

int count_components(const SparseSymGraph& g) {
  std::vector<int> seen(g.num_vertices(), 0);
  int components = 0;
  for (Index s = 0; s < g.num_vertices(); ++s) {
    if (seen[s]) continue;
    ++components;
    std::vector<Vertex> stack{static_cast<Vertex>(s)};
    seen[s] = 1;
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

TEST(SparseSymGraphTest, CanonicalizesAndSorts) {
  const SparseSymGraph g(4, {{2, 1, 1.0}, {3, 0, 2.0}, {0, 1, 1.0}});
  ASSERT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 1.0}));
  EXPECT_EQ(g.edges()[1], (Edge{0, 3, 2.0}));
  EXPECT_EQ(g.edges()[2], (Edge{1, 2, 1.0}));
  EXPECT_TRUE(g.has_edge(3, 0));
  EXPECT_EQ(g.weight(3, 0), 2.0);
  EXPECT_FALSE(g.weight(2, 3).has_value());
  const auto nb = g.neighbors(0);
  EXPECT_EQ(std::vector<Vertex>(nb.begin(), nb.end()), (std::vector<Vertex>{1, 3}));
  EXPECT_EQ(g.degree_count(1), 2);
}

TEST(SparseSymGraphTest, RejectsInvalidEdges) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(SparseSymGraph(3, {{0, 0, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{0, 3, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{-1, 2, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{0, 1, 1.0}, {1, 0, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{0, 1, nan}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{0, 1, inf}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{0, 1, 0.0}}), InvalidArgument);
  EXPECT_THROW(SparseSymGraph(3, {{0, 1, -1.0}}), InvalidArgument);
}

TEST(MultiViewGraphTest, RequiresMatchingVertexCounts) {
  EXPECT_THROW(MultiViewGraph(std::vector<SparseSymGraph>{}), InvalidArgument);
  EXPECT_THROW(MultiViewGraph({SparseSymGraph(3, {}), SparseSymGraph(4, {})}),
               InvalidArgument);
  const MultiViewGraph g({SparseSymGraph(3, {}), SparseSymGraph(3, {{0, 1, 1.0}})});
  EXPECT_EQ(g.num_views(), 2u);
  EXPECT_EQ(g.num_vertices(), 3);
}

TEST(DegreeVectorTest, SpecExamples) {
  EXPECT_EQ(degree_vector(SparseSymGraph(2, {{0, 1, 1.0}})), Eigen::Vector2d(1, 1));
  EXPECT_EQ(degree_vector(SparseSymGraph(3, {})), Eigen::Vector3d::Zero());
  EXPECT_EQ(degree_vector(triangle()), Eigen::Vector3d(2, 2, 2));
  EXPECT_EQ(degree_vector(SparseSymGraph(3, {{0, 1, 2.5}, {1, 2, 0.5}})),
            Eigen::Vector3d(2.5, 3.0, 0.5));
}

TEST(NormalizedLaplacianTest, TwoNodePath) {
  const Eigen::MatrixXd l = dense(normalized_laplacian(SparseSymGraph(2, {{0, 1, 1.0}})));
  Eigen::Matrix2d expected;
  expected << 1, -1, -1, 1;
  EXPECT_TRUE(l.isApprox(expected, 1e-15));
  const Eigen::VectorXd eig = oracle_eigenvalues(l);
  EXPECT_NEAR(eig[0], 0.0, 1e-12);
  EXPECT_NEAR(eig[1], 2.0, 1e-12);
}

TEST(NormalizedLaplacianTest, IsolatedVertexRowIsZero) {
  const SparseSymGraph g(3, {{0, 1, 1.0}});
  const Eigen::MatrixXd l = dense(normalized_laplacian(g));
  EXPECT_EQ(l.row(2).norm(), 0.0);
  EXPECT_EQ(l.col(2).norm(), 0.0);
  EXPECT_EQ(l(0, 0), 1.0);
  EXPECT_EQ(l(2, 2), 0.0);
}

TEST(NormalizedLaplacianTest, TriangleSpectrum) {
  const Eigen::VectorXd eig = oracle_eigenvalues(dense(normalized_laplacian(triangle())));
  EXPECT_NEAR(eig[0], 0.0, 1e-12);
  EXPECT_NEAR(eig[1], 1.5, 1e-12);
  EXPECT_NEAR(eig[2], 1.5, 1e-12);
}

TEST(NormalizedLaplacianTest, PropertySpectrumAndNullity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 5 + trial * 5;
    // Sparse enough that several components and isolated vertices appear.
    const double p = 1.2 / static_cast<double>(n);
    const SparseSymGraph g = testing::random_graph(n, p, rng, trial % 2 == 1);
    const Eigen::MatrixXd l = dense(normalized_laplacian(g));
    ASSERT_TRUE(l.isApprox(l.transpose(), 0.0));
    const Eigen::VectorXd eig = oracle_eigenvalues(l);
    EXPECT_GE(eig.minCoeff(), -1e-10) << "n=" << n;
    EXPECT_LE(eig.maxCoeff(), 2.0 + 1e-10) << "n=" << n;
    const int zeros = static_cast<int>((eig.array().abs() < 1e-9).count());
    EXPECT_EQ(zeros, count_components(g)) << "n=" << n;
  }
}

TEST(RenormalizedPropagationTest, SpecExamples) {
  EXPECT_EQ(dense(renormalized_propagation(SparseSymGraph(1, {}))),
            Eigen::MatrixXd::Ones(1, 1));
  const Eigen::MatrixXd a = dense(renormalized_propagation(SparseSymGraph(2, {{0, 1, 1.0}})));
  EXPECT_TRUE(a.isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5), 1e-15));
}

TEST(RenormalizedPropagationTest, PropertySpectralRadius) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SparseSymGraph g = testing::random_graph(20, 0.2, rng, trial % 2 == 0);
    const Eigen::MatrixXd a = dense(renormalized_propagation(g));
    ASSERT_TRUE(a.isApprox(a.transpose(), 0.0));
    const Eigen::VectorXd eig = oracle_eigenvalues(a);
    EXPECT_LE(eig.cwiseAbs().maxCoeff(), 1.0 + 1e-10);
  }
}

TEST(UnionViewsTest, SpecExamples) {
  const SparseSymGraph a(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  EXPECT_EQ(union_views(MultiViewGraph({a, a})), a);

  const SparseSymGraph u = union_views(
      MultiViewGraph({SparseSymGraph(3, {{0, 1, 1.0}}), SparseSymGraph(3, {{1, 2, 1.0}})}));
  EXPECT_EQ(u.num_edges(), 2u);
  EXPECT_TRUE(u.has_edge(0, 1));
  EXPECT_TRUE(u.has_edge(1, 2));

  const SparseSymGraph w = union_views(
      MultiViewGraph({SparseSymGraph(2, {{0, 1, 2.0}}), SparseSymGraph(2, {{0, 1, 3.0}})}));
  EXPECT_EQ(w.weight(0, 1), 3.0);
}

class EdgeListTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::temp_dir("edges"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path write(const std::string& text) {
    const auto p = dir_ / "g.tsv";
    std::ofstream(p) << text;
    return p;
  }

  IoError::Kind kind_of(const std::string& text, const EdgeListOptions& opts = {}) {
    try {
      read_edge_list(write(text), opts);
    } catch (const IoError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no IoError for:\n" << text;
    return IoError::Kind::kUnreadable;
  }

  std::filesystem::path dir_;
};

TEST_F(EdgeListTest, RoundTripKeepsIsolatedVerticesAndWeights) {
  const SparseSymGraph g(6, {{0, 1, 0.1}, {2, 3, 1.0 / 3.0}, {1, 4, 2.5}});
  write_edge_list(dir_ / "rt.tsv", g);
  EdgeListOptions opts;
  opts.keep_weights = true;
  EXPECT_EQ(read_edge_list(dir_ / "rt.tsv", opts), g);
}

TEST_F(EdgeListTest, BinarizesByDefaultAndDropsSelfLoops) {
  const SparseSymGraph g =
      read_edge_list(write("# comment\nn=4\n0\t1\t7\n2\t2\n\n1\t3\t0.5\n"));
  EXPECT_EQ(g.num_vertices(), 4);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.weight(0, 1), 1.0);
  EXPECT_EQ(g.weight(1, 3), 1.0);
}

TEST_F(EdgeListTest, InfersVertexCountWithoutHeader) {
  EXPECT_EQ(read_edge_list(write("0\t5\n")).num_vertices(), 6);
}

TEST_F(EdgeListTest, ErrorsCarryLineAndKind) {
  EXPECT_EQ(kind_of("n=3\n0\t3\n"), IoError::Kind::kOutOfRange);
  EXPECT_EQ(kind_of("0\t1\n0\t-1\n"), IoError::Kind::kOutOfRange);
  EXPECT_EQ(kind_of("0 1\n"), IoError::Kind::kMalformed);
  EXPECT_EQ(kind_of("0\tx\n"), IoError::Kind::kMalformed);
  EXPECT_EQ(kind_of("0\t1\tnan\n"), IoError::Kind::kMalformed);
  EXPECT_EQ(kind_of("0\t1\n1\t0\n"), IoError::Kind::kMalformed);
  EXPECT_EQ(kind_of("0\t1\nn=3\n"), IoError::Kind::kMalformed);
  try {
    read_edge_list(write("n=3\n0\t1\n# c\n1\t9\n"));
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos);
  }
}

TEST_F(EdgeListTest, MissingFileIsUnreadable) {
  try {
    read_edge_list(dir_ / "absent.tsv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.kind(), IoError::Kind::kUnreadable);
  }
}

}  // namespace
}  // namespace mvgcn
