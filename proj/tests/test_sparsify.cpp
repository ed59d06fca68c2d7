#include "qwk/sparsify.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace qwk;
using namespace qwk::testkit;

namespace {

Eigen::MatrixXd q_from_weights(const WeightedGraph& g,
                               const std::vector<testkit::EdgeSpec>& q_entries) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& e : q_entries) {
    q(e.u, e.v) = e.w;
    q(e.v, e.u) = e.w;
  }
  return q;
}

}  // namespace

TEST(Mst, TriangleKeepsTwoLightest) {
  auto g = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  auto q = q_from_weights(g, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
  auto tree = mst_over_q(g, q);
  ASSERT_EQ(tree.edges.size(), 2u);
  EXPECT_EQ(tree.edges[0].u, 0);
  EXPECT_EQ(tree.edges[0].v, 1);
  EXPECT_DOUBLE_EQ(tree.edges[0].weight, 1.0);
  EXPECT_EQ(tree.edges[1].u, 1);
  EXPECT_EQ(tree.edges[1].v, 2);
  EXPECT_DOUBLE_EQ(tree.edges[1].weight, 2.0);
}

TEST(Mst, TreeInputIsItsOwnMst) {
  auto g = make_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {3, 4, 1.0}});
  Eigen::MatrixXd q = g.weights * 3.7;
  auto tree = mst_over_q(g, q);
  ASSERT_EQ(tree.edges.size(), 4u);
  for (const auto& e : tree.edges) EXPECT_GT(g.weights(e.u, e.v), 0.0);
}

TEST(Mst, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> size(3, 7);
    int n = size(rng);
    auto g = random_connected_graph(n, 0.6, rng);
    std::uniform_real_distribution<double> qw(0.1, 5.0);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (g.weights(u, v) > 0.0) {
          q(u, v) = qw(rng);
          q(v, u) = q(u, v);
        }
    auto tree = mst_over_q(g, q);
    double total = 0.0;
    for (const auto& e : tree.edges) total += e.weight;
    double best = oracle_mst_weight(g, q);
    EXPECT_NEAR(total, best, 1e-12) << "n=" << n << " trial=" << trial;
  }
}

TEST(Mst, TreeIsAcyclicAndSpanning) {
  std::mt19937_64 rng(31);
  auto g = random_connected_graph(12, 0.5, rng);
  Eigen::MatrixXd q = g.weights;
  auto tree = mst_over_q(g, q);
  ASSERT_EQ(static_cast<int>(tree.edges.size()), g.n - 1);
  detail::UnionFind uf(g.n);
  for (const auto& e : tree.edges) {
    EXPECT_GT(e.weight, 0.0);
    EXPECT_TRUE(uf.unite(e.u, e.v)) << "cycle through (" << e.u << "," << e.v << ")";
  }
}

TEST(Mst, PermutationEquivariantOnGenericWeights) {
  std::mt19937_64 rng(41);
  auto g = random_connected_graph(9, 0.5, rng);
  auto ct = commute_time_matrix(g);
  auto q = modified_commute_matrix(g, ct);
  auto tree = mst_over_q(g, q);

  std::vector<int> perm(static_cast<size_t>(g.n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto pg = permute_vertices(g, perm);
  Eigen::MatrixXd pq = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int u = 0; u < g.n; ++u)
    for (int v = 0; v < g.n; ++v) pq(perm[u], perm[v]) = q(u, v);
  auto ptree = mst_over_q(pg, pq);

  std::set<std::pair<int, int>> expected;
  for (const auto& e : tree.edges) expected.insert(edge_key(perm[e.u], perm[e.v]));
  std::set<std::pair<int, int>> actual;
  for (const auto& e : ptree.edges) actual.insert(edge_key(e.u, e.v));
  EXPECT_EQ(expected, actual);
}

TEST(Mst, DisconnectedSupport) {
  auto g = make_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  EXPECT_THROW(mst_over_q(g, g.weights), ConnectivityError);
}

TEST(Policy, SparseGraphKeepsEdgesWithCommuteWeights) {
  // path: ratio 2/3 <= 1.5 -> original edges, re-weighted by C (not Q)
  auto g = make_graph(3, {{0, 1, 2.0}, {1, 2, 1.0}});
  auto ct = commute_time_matrix(g);
  auto q = modified_commute_matrix(g, ct);
  auto r = sparsification_policy(g, ct, q);
  EXPECT_FALSE(r.took_mst);
  ASSERT_EQ(r.graph.edges.size(), 2u);
  EXPECT_DOUBLE_EQ(r.graph.edges[0].weight, ct.C(0, 1));
  EXPECT_DOUBLE_EQ(r.graph.edges[1].weight, ct.C(1, 2));
}

TEST(Policy, DenseGraphTakesMstBranch) {
  // K5: ratio 10/5 = 2 > 1.5
  std::vector<testkit::EdgeSpec> edges;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) edges.push_back({u, v, 1.0 + u + v});
  auto g = make_graph(5, edges);
  auto r = sparsification_policy(g);
  EXPECT_TRUE(r.took_mst);
  EXPECT_EQ(r.graph.edges.size(), 4u);
}

TEST(Policy, RatioBoundaryIsStrict) {
  // 6 vertices, 9 edges: ratio exactly 1.5 -> keep the original edge set
  std::vector<testkit::EdgeSpec> edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1},
                                          {5, 0, 1}, {0, 3, 1}, {1, 4, 1}, {2, 5, 1}};
  auto g = make_graph(6, edges);
  ASSERT_EQ(g.edge_count(), 9);
  auto r = sparsification_policy(g);
  EXPECT_FALSE(r.took_mst);
  EXPECT_EQ(r.graph.edges.size(), 9u);
}

TEST(Policy, CompleteGraph347TakesMst) {
  const int n = 347;
  WeightedGraph g;
  g.n = n;
  g.weights = Eigen::MatrixXd::Zero(n, n);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> w(0.5, 1.5);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      g.weights(u, v) = w(rng);
      g.weights(v, u) = g.weights(u, v);
    }
  g.vertex_labels.assign(n, "A");
  auto r = sparsification_policy(g);
  EXPECT_TRUE(r.took_mst);
  EXPECT_EQ(static_cast<int>(r.graph.edges.size()), n - 1);
}

TEST(Policy, EdgeLabelsRestrictedToSurvivingEdges) {
  std::vector<testkit::EdgeSpec> edges;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) edges.push_back({u, v, 1.0});
  auto g = make_graph(5, edges);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) g.edge_labels[{u, v}] = "e";
  auto r = sparsification_policy(g);
  ASSERT_TRUE(r.took_mst);
  EXPECT_EQ(r.graph.edge_labels.size(), r.graph.edges.size());
  for (const auto& e : r.graph.edges)
    EXPECT_TRUE(r.graph.edge_labels.count(edge_key(e.u, e.v)));
}
