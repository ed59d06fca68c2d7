#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/graph.hpp"
#include "qwk/spectral.hpp"

namespace qwk {

struct WeightedEdge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 0.0;
};

/// Edge-list weighted structure the quantum walk runs on: either the
/// commute-time MST or the original edge set re-weighted by commute time.
struct SparseGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;  // sorted by (u, v)
  std::vector<std::string> vertex_labels;
  std::map<std::pair<int, int>, std::string> edge_labels;
  std::string graph_id;

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
  }
};

/// A spanning tree is a SparseGraph with exactly n-1 edges, acyclic and
/// connected; tests enforce the invariants.
using SpanningTree = SparseGraph;

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<size_t>(n)), rank_(static_cast<size_t>(n), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

}  // namespace detail

/// Kruskal minimum spanning tree of the graph whose edge weights are Q.
/// Candidate edges are exactly g's edges; deterministic tie-break sorts by
/// (q_weight, min(u,v), max(u,v)). Tree edges carry their Q-weights.
inline SpanningTree mst_over_q(const WeightedGraph& g, const Eigen::MatrixXd& Q) {
  if (Q.rows() != g.n || Q.cols() != g.n)
    throw IntegrityError("graph '" + g.graph_id + "': Q does not match vertex count");
  std::vector<WeightedEdge> candidates;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.weights(u, v) > 0.0) candidates.push_back({u, v, Q(u, v)});
  std::sort(candidates.begin(), candidates.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  SpanningTree tree;
  tree.n = g.n;
  tree.graph_id = g.graph_id;
  tree.vertex_labels = g.vertex_labels;
  detail::UnionFind uf(g.n);
  for (const auto& e : candidates) {
    if (uf.unite(e.u, e.v)) tree.edges.push_back(e);
  }
  if (static_cast<int>(tree.edges.size()) != g.n - 1)
    throw ConnectivityError("graph '" + g.graph_id + "' is disconnected: components " +
                            describe_components(connected_components(g)));
  std::sort(tree.edges.begin(), tree.edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
  });
  for (const auto& e : tree.edges) {
    auto it = g.edge_labels.find(edge_key(e.u, e.v));
    if (it != g.edge_labels.end()) tree.edge_labels[it->first] = it->second;
  }
  return tree;
}

struct SparsifyResult {
  SparseGraph graph;
  bool took_mst = false;
};

/// The density-ratio policy: graphs with |E|/|V| > 1.5 are reduced to the
/// minimum spanning tree over Q; sparser graphs keep their edge set, with each
/// edge re-weighted by its plain commute time C(u,v).
inline SparsifyResult sparsification_policy(const WeightedGraph& g, const CommuteTimeResult& ct,
                                            const Eigen::MatrixXd& Q) {
  SparsifyResult out;
  const double ratio = g.n > 0 ? static_cast<double>(g.edge_count()) / g.n : 0.0;
  if (ratio > 1.5) {
    out.graph = mst_over_q(g, Q);
    out.took_mst = true;
    return out;
  }
  out.graph.n = g.n;
  out.graph.graph_id = g.graph_id;
  out.graph.vertex_labels = g.vertex_labels;
  out.graph.edge_labels = g.edge_labels;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.weights(u, v) > 0.0) out.graph.edges.push_back({u, v, ct.C(u, v)});
  out.took_mst = false;
  return out;
}

/// Convenience overload computing the spectral stage internally.
inline SparsifyResult sparsification_policy(const WeightedGraph& g) {
  CommuteTimeResult ct = commute_time_matrix(g);
  return sparsification_policy(g, ct, modified_commute_matrix(g, ct));
}

}  // namespace qwk
