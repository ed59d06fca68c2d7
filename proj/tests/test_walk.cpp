#include "qwk/walk.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace qwk;
using namespace qwk::testkit;

TEST(EdgeSpace, SingleEdge) {
  auto t = make_substrate(2, {{0, 1, 1.0}});
  auto space = build_edge_space(t);
  ASSERT_EQ(space.arc_count(), 2);
  EXPECT_EQ(space.arcs[0].tail, 0);
  EXPECT_EQ(space.arcs[0].head, 1);
  EXPECT_EQ(space.arcs[1].tail, 1);
  EXPECT_EQ(space.arcs[1].head, 0);
  EXPECT_TRUE(space.adjacency_pairs.empty());  // the only transition would backtrack
}

TEST(EdgeSpace, PathTransitions) {
  auto t = make_substrate(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto space = build_edge_space(t);
  ASSERT_EQ(space.arc_count(), 4);
  int a01 = space.arc_index.at({0, 1});
  int a10 = space.arc_index.at({1, 0});
  int a12 = space.arc_index.at({1, 2});
  int a21 = space.arc_index.at({2, 1});
  auto has_pair = [&](int a, int b) {
    return std::find(space.adjacency_pairs.begin(), space.adjacency_pairs.end(),
                     std::make_pair(a, b)) != space.adjacency_pairs.end();
  };
  EXPECT_TRUE(has_pair(a01, a12));
  EXPECT_TRUE(has_pair(a21, a10));
  EXPECT_FALSE(has_pair(a01, a10));
  EXPECT_FALSE(has_pair(a12, a21));
}

TEST(EdgeSpace, StarNonBacktrackingCount) {
  auto t = make_substrate(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  auto space = build_edge_space(t);
  EXPECT_EQ(space.arc_count(), 6);
  EXPECT_EQ(space.adjacency_pairs.size(), 6u);  // (leaf,0)->(0,other leaf), 3*2
}

TEST(Grover, SingleEdgeIsExchange) {
  auto t = make_substrate(2, {{0, 1, 1.0}});
  auto space = build_edge_space(t);
  Eigen::MatrixXd u = Eigen::MatrixXd(grover_operator(space));
  Eigen::MatrixXd exchange(2, 2);
  exchange << 0, 1, 1, 0;
  EXPECT_LE((u - exchange).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Grover, PathAmplitudes) {
  auto t = make_substrate(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto space = build_edge_space(t);
  Eigen::MatrixXd u = Eigen::MatrixXd(grover_operator(space));
  int a01 = space.arc_index.at({0, 1});
  int a10 = space.arc_index.at({1, 0});
  int a12 = space.arc_index.at({1, 2});
  // transition (0,1)->(1,2): 2/2 - 0 = 1; backtrack (0,1)->(1,0): 2/2 - 1 = 0
  EXPECT_DOUBLE_EQ(u(a12, a01), 1.0);
  EXPECT_DOUBLE_EQ(u(a10, a01), 0.0);
}

TEST(Grover, OrthogonalOnRandomTrees) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> size(2, 50);
    auto t = random_tree(size(rng), rng);
    auto space = build_edge_space(t);
    Eigen::MatrixXd u = Eigen::MatrixXd(grover_operator(space));
    Eigen::MatrixXd gram = u * u.transpose();
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Grover, MatchesDenseOracle) {
  std::mt19937_64 rng(17);
  auto t = random_tree(12, rng);
  auto space = build_edge_space(t);
  Eigen::MatrixXd u = Eigen::MatrixXd(grover_operator(space));
  EXPECT_LE((u - oracle_grover_dense(space)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(WeightedPf, SingleEdgeReversalPair) {
  auto t = make_substrate(2, {{0, 1, 1.5}});
  auto space = build_edge_space(t);
  Eigen::MatrixXd tw = Eigen::MatrixXd(weighted_pf_operator(space, t));
  int a01 = space.arc_index.at({0, 1});
  int a10 = space.arc_index.at({1, 0});
  EXPECT_DOUBLE_EQ(tw(a01, a10), 3.0);
  EXPECT_DOUBLE_EQ(tw(a10, a01), 3.0);
  EXPECT_DOUBLE_EQ(tw(a01, a01), 0.0);
}

TEST(WeightedPf, PathSumsArcWeights) {
  auto t = make_substrate(3, {{0, 1, 2.0}, {1, 2, 5.0}});
  auto space = build_edge_space(t);
  Eigen::MatrixXd tw = Eigen::MatrixXd(weighted_pf_operator(space, t));
  int a01 = space.arc_index.at({0, 1});
  int a12 = space.arc_index.at({1, 2});
  int a21 = space.arc_index.at({2, 1});
  EXPECT_DOUBLE_EQ(tw(a01, a12), 7.0);
  EXPECT_DOUBLE_EQ(tw(a01, a21), 0.0);  // heads/tails do not chain
}

TEST(WeightedPf, MatchesDenseOracle) {
  std::mt19937_64 rng(19);
  auto t = random_tree(10, rng);
  auto space = build_edge_space(t);
  Eigen::MatrixXd tw = Eigen::MatrixXd(weighted_pf_operator(space, t));
  EXPECT_LE((tw - oracle_pf_dense(space, t)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(InitialState, SingleEdgeUniform) {
  for (double w : {0.5, 1.0, 4.0}) {
    auto t = make_substrate(2, {{0, 1, w}});
    auto space = build_edge_space(t);
    auto tw = weighted_pf_operator(space, t);
    Eigen::VectorXd psi0 = initial_state(space, tw);
    EXPECT_NEAR(psi0(0), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(psi0(1), 1.0 / std::sqrt(2.0), 1e-15);
  }
}

TEST(InitialState, UnitNormOnRandomTrees) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> size(2, 40);
    auto t = random_tree(size(rng), rng);
    auto space = build_edge_space(t);
    auto tw = weighted_pf_operator(space, t);
    Eigen::VectorXd psi0 = initial_state(space, tw);
    EXPECT_NEAR(psi0.squaredNorm(), 1.0, 1e-12);
    for (int a = 0; a < psi0.size(); ++a) EXPECT_GE(psi0(a), 0.0);
  }
}

TEST(InitialState, PathHandEnumeration) {
  // unit-weight path: every arc carries in-plus-out mass 6 of total 24
  auto t = make_substrate(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto space = build_edge_space(t);
  auto tw = weighted_pf_operator(space, t);
  Eigen::VectorXd psi0 = initial_state(space, tw);
  for (int a = 0; a < 4; ++a) EXPECT_NEAR(psi0(a), 0.5, 1e-15);

  // general weights (a,b): masses 5a+b, 5a+b, a+5b, a+5b over 12(a+b)
  auto t2 = make_substrate(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  auto space2 = build_edge_space(t2);
  auto tw2 = weighted_pf_operator(space2, t2);
  Eigen::VectorXd psi2 = initial_state(space2, tw2);
  double total = 12.0 * (2.0 + 3.0);
  EXPECT_NEAR(psi2(space2.arc_index.at({0, 1})), std::sqrt((5 * 2.0 + 3.0) / total), 1e-15);
  EXPECT_NEAR(psi2(space2.arc_index.at({1, 0})), std::sqrt((5 * 2.0 + 3.0) / total), 1e-15);
  EXPECT_NEAR(psi2(space2.arc_index.at({1, 2})), std::sqrt((2.0 + 5 * 3.0) / total), 1e-15);
  EXPECT_NEAR(psi2(space2.arc_index.at({2, 1})), std::sqrt((2.0 + 5 * 3.0) / total), 1e-15);
}

TEST(InitialState, MatchesDenseOracle) {
  std::mt19937_64 rng(29);
  auto t = random_tree(15, rng);
  auto space = build_edge_space(t);
  auto tw = weighted_pf_operator(space, t);
  Eigen::VectorXd psi0 = initial_state(space, tw);
  Eigen::VectorXd ref = oracle_initial_state(space, t);
  EXPECT_LE((psi0 - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Visit, SingleEdgeInvariant) {
  auto t = make_substrate(2, {{0, 1, 2.5}});
  auto sys = build_walk_system(t);
  for (int horizon : {0, 1, 5, 25}) {
    auto vd = visit_distribution(sys, horizon);
    EXPECT_NEAR(vd.p(0), 0.5, 1e-14);
    EXPECT_NEAR(vd.p(1), 0.5, 1e-14);
  }
}

TEST(Visit, HorizonZeroIsSquaredInitialState) {
  std::mt19937_64 rng(31);
  auto t = random_tree(9, rng);
  auto sys = build_walk_system(t);
  auto vd = visit_distribution(sys, 0);
  for (int a = 0; a < sys.psi0.size(); ++a)
    EXPECT_DOUBLE_EQ(vd.p(a), sys.psi0(a) * sys.psi0(a));
}

TEST(Visit, MatchesDensityMatrixOracle) {
  auto t = make_substrate(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto sys = build_walk_system(t);
  auto vd = visit_distribution(sys, 2);
  Eigen::VectorXd ref = oracle_density_diagonal(t, 2);
  EXPECT_LE((vd.p - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Visit, ProbabilityConservation) {
  std::mt19937_64 rng(37);
  auto t = random_tree(60, rng);
  auto sys = build_walk_system(t);
  Eigen::VectorXd psi = sys.psi0;
  for (int step = 1; step <= 25; ++step) {
    psi = step_state(sys.space, psi);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-9) << "step " << step;
  }
  auto vd = visit_distribution(sys, 25);
  EXPECT_NEAR(vd.p.sum(), 1.0, 1e-10);
}

TEST(Visit, ExactPermutationEquivariance) {
  std::mt19937_64 rng(41);
  auto t = random_tree(14, rng);
  auto sys = build_walk_system(t);
  auto vd = visit_distribution(sys, 12);

  std::vector<int> perm(static_cast<size_t>(t.n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  SparseGraph pt;
  pt.n = t.n;
  pt.vertex_labels.resize(static_cast<size_t>(t.n));
  for (int v = 0; v < t.n; ++v) pt.vertex_labels[static_cast<size_t>(perm[v])] = t.vertex_labels[static_cast<size_t>(v)];
  for (const auto& e : t.edges)
    pt.edges.push_back({std::min(perm[e.u], perm[e.v]), std::max(perm[e.u], perm[e.v]), e.weight});
  std::sort(pt.edges.begin(), pt.edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
  });
  auto psys = build_walk_system(pt);
  auto pvd = visit_distribution(psys, 12);
  for (int a = 0; a < sys.space.arc_count(); ++a) {
    const Arc& arc = sys.space.arcs[a];
    int pa = psys.space.arc_index.at({perm[arc.tail], perm[arc.head]});
    EXPECT_EQ(vd.p(a), pvd.p(pa)) << "arc (" << arc.tail << "," << arc.head << ")";
  }
}

TEST(PositiveSupport, Basics) {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_EQ(positive_support(zero).sum(), 0);
  Eigen::MatrixXd m(1, 3);
  m << -1.0, 0.0, 2.0;
  Eigen::MatrixXi s = positive_support(m);
  EXPECT_EQ(s(0, 0), 0);
  EXPECT_EQ(s(0, 1), 0);
  EXPECT_EQ(s(0, 2), 1);
}

TEST(PositiveSupport, GroverTransposeGivesLineGraphPattern) {
  // S+(U^T) must equal the unweighted line-graph adjacency, including the
  // backtracking transitions at degree-1 vertices where 2/d - 1 > 0.
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 8; ++trial) {
    std::uniform_int_distribution<int> size(2, 20);
    auto t = random_tree(size(rng), rng);
    auto space = build_edge_space(t);
    Eigen::MatrixXd u = Eigen::MatrixXd(grover_operator(space));
    Eigen::MatrixXi support = positive_support(u.transpose());
    const int m = space.arc_count();
    Eigen::MatrixXi expected = Eigen::MatrixXi::Zero(m, m);
    for (const auto& [a, b] : space.adjacency_pairs) expected(a, b) = 1;
    for (int a = 0; a < m; ++a)
      if (space.degree[space.arcs[a].head] == 1) expected(a, space.reverse_arc[a]) = 1;
    EXPECT_EQ((support - expected).cwiseAbs().sum(), 0) << "trial " << trial;
  }
}

TEST(PositiveSupport, StarMatchesHandPattern) {
  auto t = make_substrate(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  auto space = build_edge_space(t);
  Eigen::MatrixXd u = Eigen::MatrixXd(grover_operator(space));
  Eigen::MatrixXi support = positive_support(u.transpose());
  // 6 non-backtracking transitions at the hub + 3 leaf backtracks
  EXPECT_EQ(support.sum(), 9);
  int a01 = space.arc_index.at({0, 1});
  int a10 = space.arc_index.at({1, 0});
  EXPECT_EQ(support(a01, a10), 1);  // leaf backtrack, amplitude 2/1 - 1 = 1
  EXPECT_EQ(support(a10, a01), 0);  // hub backtrack, amplitude 2/3 - 1 < 0
}
