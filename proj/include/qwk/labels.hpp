#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/sparsify.hpp"
#include "qwk/walk.hpp"

namespace qwk {

namespace detail {

/// Length-prefixed token encoding; prevents collisions like ("a","bc") vs
/// ("ab","c") when tokens are concatenated into one key.
inline void append_encoded(std::string& out, const std::string& token) {
  out += std::to_string(token.size());
  out += ':';
  out += token;
}

inline uint64_t fnv1a(const std::string& data, uint64_t hash = 1469598103934665603ull) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace detail

/// Canonical key of a directed edge: ordered (tail label, head label).
inline std::string directed_edge_label(const std::string& tail_label,
                                       const std::string& head_label) {
  std::string key;
  detail::append_encoded(key, tail_label);
  detail::append_encoded(key, head_label);
  return key;
}

/// Canonical key when the resided edge carries a discrete label:
/// ordered (tail label, edge label, head label).
inline std::string directed_edge_label(const std::string& tail_label,
                                       const std::string& edge_label,
                                       const std::string& head_label) {
  std::string key;
  detail::append_encoded(key, tail_label);
  detail::append_encoded(key, edge_label);
  detail::append_encoded(key, head_label);
  return key;
}

/// Probability mass over canonical directed-edge-label keys; the feature
/// representation of a graph. Keys absent from the map carry implicit mass 0.
struct LabelDistribution {
  std::map<std::string, double> masses;
  int h = 0;                  // WL iteration the vertex labels came from
  std::string label_space_id; // ties the key space to a dataset-wide alphabet
};

/// Refined vertex labels for a set of graphs at WL iterations 0..h_max.
/// Compression tokens come from one dataset-global injective table, so all
/// member graphs share a key space at every level.
struct WlRefinement {
  // levels[g][h][v] = label of vertex v of graph g after h iterations
  std::vector<std::vector<std::vector<std::string>>> levels;
  std::string label_space_id;  // content hash of the compression table

  std::string space_id_at(int h) const {
    return h == 0 ? std::string("h0") : label_space_id + ":h" + std::to_string(h);
  }
};

/// Weisfeiler-Lehman refinement over the structures the walk runs on.
/// Iteration h maps every vertex to a canonical compression of (own label,
/// sorted multiset of neighbor labels). New signatures enter the table in
/// sorted order per graph, graphs in dataset order; tokens are therefore
/// invariant under vertex permutations of any member graph.
inline WlRefinement wl_refine_dataset(const std::vector<const SparseGraph*>& graphs, int h_max) {
  if (h_max < 0) throw ValidationError("WL iteration count must be nonnegative");
  WlRefinement out;
  out.levels.resize(graphs.size());
  std::vector<std::vector<std::vector<int>>> adj(graphs.size());
  for (size_t gi = 0; gi < graphs.size(); ++gi) {
    const SparseGraph& g = *graphs[gi];
    if (static_cast<int>(g.vertex_labels.size()) != g.n)
      throw ValidationError("graph '" + g.graph_id + "': missing vertex labels");
    adj[gi] = g.adjacency();
    out.levels[gi].resize(static_cast<size_t>(h_max) + 1);
    out.levels[gi][0] = g.vertex_labels;
  }

  std::map<std::string, std::string> table;  // signature -> compressed token
  std::vector<std::string> table_entries;    // insertion order, for the space id
  for (int level = 1; level <= h_max; ++level) {
    long long counter = 0;
    std::vector<std::vector<std::string>> signatures(graphs.size());
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
      const auto& prev = out.levels[gi][static_cast<size_t>(level) - 1];
      signatures[gi].resize(prev.size());
      for (size_t v = 0; v < prev.size(); ++v) {
        std::vector<std::string> nb;
        nb.reserve(adj[gi][v].size());
        for (int u : adj[gi][v]) nb.push_back(prev[static_cast<size_t>(u)]);
        std::sort(nb.begin(), nb.end());
        std::string sig = std::to_string(level);
        sig += '|';
        detail::append_encoded(sig, prev[v]);
        for (const auto& t : nb) detail::append_encoded(sig, t);
        signatures[gi][v] = std::move(sig);
      }
      std::vector<std::string> fresh = signatures[gi];
      std::sort(fresh.begin(), fresh.end());
      fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
      for (const auto& sig : fresh) {
        if (table.find(sig) == table.end()) {
          std::string token = "wl" + std::to_string(level) + ":" + std::to_string(counter++);
          table.emplace(sig, token);
          table_entries.push_back(sig + "=>" + token);
        }
      }
    }
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
      auto& lvl = out.levels[gi][static_cast<size_t>(level)];
      lvl.resize(signatures[gi].size());
      for (size_t v = 0; v < signatures[gi].size(); ++v)
        lvl[v] = table.at(signatures[gi][v]);
    }
  }

  uint64_t hash = 1469598103934665603ull;
  for (const auto& entry : table_entries) hash = detail::fnv1a(entry, hash);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  out.label_space_id = buf;
  return out;
}

/// Single-graph refinement against its own table; h = 0 returns the original
/// labels unchanged.
inline std::vector<std::string> wl_refine(const SparseGraph& g, int h) {
  WlRefinement r = wl_refine_dataset({&g}, h);
  return r.levels[0][static_cast<size_t>(h)];
}

/// Adapter: refine a WeightedGraph over its positive-weight adjacency.
inline std::vector<std::string> wl_refine(const WeightedGraph& g, int h) {
  SparseGraph s;
  s.n = g.n;
  s.graph_id = g.graph_id;
  s.vertex_labels = g.vertex_labels;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.weights(u, v) > 0.0) s.edges.push_back({u, v, g.weights(u, v)});
  return wl_refine(s, h);
}

/// Aggregates per-arc visit probabilities into probabilities over directed
/// edge labels: p(l) = sum of p(arc) over arcs whose key equals l.
inline LabelDistribution label_distribution(const VisitDistribution& vd,
                                            const DirectedEdgeSpace& space,
                                            const SparseGraph& substrate,
                                            const std::vector<std::string>& labels, int h,
                                            const std::string& label_space_id) {
  if (static_cast<int>(labels.size()) != space.n)
    throw IntegrityError("label count does not match substrate vertex count");
  if (vd.p.size() != space.arc_count())
    throw IntegrityError("visit distribution does not match arc count");
  std::map<std::string, std::vector<double>> gathered;
  for (int i = 0; i < space.arc_count(); ++i) {
    const Arc& a = space.arcs[i];
    auto el = substrate.edge_labels.find(edge_key(a.tail, a.head));
    std::string key =
        el == substrate.edge_labels.end()
            ? directed_edge_label(labels[a.tail], labels[a.head])
            : directed_edge_label(labels[a.tail], el->second, labels[a.head]);
    gathered[key].push_back(vd.p(i));
  }
  LabelDistribution dist;
  dist.h = h;
  dist.label_space_id = label_space_id;
  for (auto& [key, terms] : gathered) dist.masses[key] = detail::ordered_sum(terms);
  return dist;
}

}  // namespace qwk
