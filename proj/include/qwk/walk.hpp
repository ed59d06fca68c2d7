#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <utility>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/sparsify.hpp"

namespace qwk {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// One orientation of an undirected edge; the walk's state space element.
struct Arc {
  int tail = 0;
  int head = 0;
};

/// Directed-edge state space of a sparsified structure plus its line-graph
/// transition pairs. Arc order is lexicographic by (tail, head), so it is a
/// pure function of the edge set.
struct DirectedEdgeSpace {
  int n = 0;                                        // vertices of the substrate
  std::vector<Arc> arcs;                            // sorted by (tail, head)
  std::map<std::pair<int, int>, int> arc_index;     // (tail, head) -> position
  std::vector<int> reverse_arc;                     // position of the reversal
  std::vector<std::vector<int>> in_arcs;            // per vertex: arcs with that head
  std::vector<int> degree;                          // unweighted substrate degree
  std::vector<std::pair<int, int>> adjacency_pairs; // non-backtracking a -> b

  int arc_count() const { return static_cast<int>(arcs.size()); }
};

/// Builds the directed-edge space: both orientations of every edge, and the
/// transitions (u,v) -> (v,w) with w != u.
inline DirectedEdgeSpace build_edge_space(const SparseGraph& t) {
  DirectedEdgeSpace space;
  space.n = t.n;
  for (const auto& e : t.edges) {
    space.arcs.push_back({e.u, e.v});
    space.arcs.push_back({e.v, e.u});
  }
  std::sort(space.arcs.begin(), space.arcs.end(), [](const Arc& a, const Arc& b) {
    return std::make_pair(a.tail, a.head) < std::make_pair(b.tail, b.head);
  });
  for (int i = 0; i < space.arc_count(); ++i)
    space.arc_index[{space.arcs[i].tail, space.arcs[i].head}] = i;

  space.reverse_arc.resize(space.arcs.size());
  space.in_arcs.assign(static_cast<size_t>(t.n), {});
  space.degree.assign(static_cast<size_t>(t.n), 0);
  for (int i = 0; i < space.arc_count(); ++i) {
    const Arc& a = space.arcs[i];
    space.reverse_arc[i] = space.arc_index.at({a.head, a.tail});
    space.in_arcs[a.head].push_back(i);
    ++space.degree[a.tail];
  }
  for (int b = 0; b < space.arc_count(); ++b) {
    const Arc& dest = space.arcs[b];
    for (int a : space.in_arcs[dest.tail]) {
      if (space.arcs[a].tail == dest.head) continue;  // immediate reversal
      space.adjacency_pairs.emplace_back(a, b);
    }
  }
  std::sort(space.adjacency_pairs.begin(), space.adjacency_pairs.end());
  return space;
}

/// Grover-coined transition operator: amplitude 2/d_v - delta_{ux} for the
/// transition (u,v) -> (v,x), coin acting at the shared vertex v. Laid out so
/// that state_{t+1} = U * state_t (rows are destination arcs).
inline SparseMatrix grover_operator(const DirectedEdgeSpace& space) {
  const int m = space.arc_count();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int b = 0; b < m; ++b) {
    const Arc& dest = space.arcs[b];
    const double two_over_d = 2.0 / space.degree[dest.tail];
    for (int a : space.in_arcs[dest.tail]) {
      double amp = two_over_d - (space.arcs[a].tail == dest.head ? 1.0 : 0.0);
      triplets.emplace_back(b, a, amp);
    }
  }
  SparseMatrix u(m, m);
  u.setFromTriplets(triplets.begin(), triplets.end());
  return u;
}

namespace detail {

/// Sums a multiset of terms in ascending value order. Because the multiset is
/// invariant under vertex relabeling, the result is bit-identical regardless
/// of the order terms were gathered in.
inline double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

inline std::vector<double> arc_weights(const DirectedEdgeSpace& space, const SparseGraph& t) {
  std::vector<double> w(space.arcs.size(), 0.0);
  std::map<std::pair<int, int>, double> by_edge;
  for (const auto& e : t.edges) by_edge[{e.u, e.v}] = e.weight;
  for (size_t i = 0; i < space.arcs.size(); ++i) {
    auto key = edge_key(space.arcs[i].tail, space.arcs[i].head);
    auto it = by_edge.find(key);
    if (it == by_edge.end())
      throw IntegrityError("edge space does not match substrate edge set");
    w[i] = it->second;
  }
  return w;
}

}  // namespace detail

/// Weighted Perron-Frobenius operator: entry (a, b) for arcs a = (u,v),
/// b = (v,x) with head(a) = tail(b) is weight(u,v) + weight(v,x), including
/// reversal pairs; all other entries are zero. Rows are source arcs.
inline SparseMatrix weighted_pf_operator(const DirectedEdgeSpace& space, const SparseGraph& t) {
  const int m = space.arc_count();
  const std::vector<double> w = detail::arc_weights(space, t);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int b = 0; b < m; ++b) {
    const Arc& dest = space.arcs[b];
    for (int a : space.in_arcs[dest.tail])
      triplets.emplace_back(a, b, w[a] + w[b]);
  }
  SparseMatrix tw(m, m);
  tw.setFromTriplets(triplets.begin(), triplets.end());
  return tw;
}

/// Initial amplitudes from the weighted Perron-Frobenius operator:
/// alpha_a^2 = (row-sum + column-sum of TW at a) / (total over all arcs).
/// All amplitudes nonnegative; unit 2-norm by construction. An all-zero TW
/// falls back to uniform amplitudes.
inline Eigen::VectorXd initial_state(const DirectedEdgeSpace& space, const SparseMatrix& tw,
                                     bool* fell_back_uniform = nullptr) {
  const int m = space.arc_count();
  std::vector<std::vector<double>> terms(static_cast<size_t>(m));
  for (int outer = 0; outer < tw.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(tw, outer); it; ++it) {
      terms[static_cast<size_t>(it.row())].push_back(it.value());
      terms[static_cast<size_t>(it.col())].push_back(it.value());
    }
  }
  std::vector<double> masses(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) masses[a] = detail::ordered_sum(terms[a]);
  std::vector<double> all = masses;
  const double denom = detail::ordered_sum(all);

  Eigen::VectorXd psi0(m);
  if (denom <= 0.0) {
    std::cerr << "qwk: warning: weighted Perron-Frobenius operator is all-zero; "
                 "using uniform initial amplitudes\n";
    if (fell_back_uniform) *fell_back_uniform = true;
    psi0.setConstant(1.0 / std::sqrt(static_cast<double>(m)));
    return psi0;
  }
  if (fell_back_uniform) *fell_back_uniform = false;
  for (int a = 0; a < m; ++a) psi0(a) = std::sqrt(masses[a] / denom);
  return psi0;
}

/// The walk substrate's full operator bundle.
struct WalkSystem {
  DirectedEdgeSpace space;
  SparseMatrix U;        // Grover evolution, state_{t+1} = U * state_t
  SparseMatrix TW;       // weighted Perron-Frobenius operator
  Eigen::VectorXd psi0;  // initial amplitudes
  bool uniform_fallback = false;
};

inline WalkSystem build_walk_system(const SparseGraph& t) {
  WalkSystem sys;
  sys.space = build_edge_space(t);
  sys.U = grover_operator(sys.space);
  sys.TW = weighted_pf_operator(sys.space, t);
  sys.psi0 = initial_state(sys.space, sys.TW, &sys.uniform_fallback);
  return sys;
}

/// One evolution step, psi' = U * psi, applied structurally with value-ordered
/// per-destination sums so results are exactly permutation-equivariant.
inline Eigen::VectorXd step_state(const DirectedEdgeSpace& space, const Eigen::VectorXd& psi) {
  const int m = space.arc_count();
  Eigen::VectorXd next(m);
  std::vector<double> terms;
  for (int b = 0; b < m; ++b) {
    const Arc& dest = space.arcs[b];
    const double two_over_d = 2.0 / space.degree[dest.tail];
    terms.clear();
    for (int a : space.in_arcs[dest.tail]) {
      double amp = two_over_d - (space.arcs[a].tail == dest.head ? 1.0 : 0.0);
      terms.push_back(amp * psi(a));
    }
    next(b) = detail::ordered_sum(terms);
  }
  return next;
}

/// Time-averaged per-arc visit probabilities of the walk.
struct VisitDistribution {
  Eigen::VectorXd p;  // aligned with DirectedEdgeSpace::arcs
  int horizon = 0;
};

/// p(a) = (1/(T+1)) sum_{t=0..T} psi_t(a)^2 with psi_t = U^t psi_0, computed
/// by iterated operator-vector application; the diagonal of the time-averaged
/// density operator without materializing it.
inline VisitDistribution visit_distribution(const WalkSystem& sys, int horizon) {
  if (horizon < 0) throw ValidationError("walk horizon must be nonnegative");
  const int m = sys.space.arc_count();
  VisitDistribution vd;
  vd.horizon = horizon;
  vd.p = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd psi = sys.psi0;
  vd.p += psi.cwiseProduct(psi);
  for (int t = 1; t <= horizon; ++t) {
    psi = step_state(sys.space, psi);
    vd.p += psi.cwiseProduct(psi);
  }
  vd.p /= static_cast<double>(horizon + 1);
  return vd;
}

/// Positive support: entry 1 where the input is strictly positive, else 0.
inline Eigen::MatrixXi positive_support(const Eigen::MatrixXd& m) {
  Eigen::MatrixXi s(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s(i, j) = m(i, j) > 0.0 ? 1 : 0;
  return s;
}

}  // namespace qwk
