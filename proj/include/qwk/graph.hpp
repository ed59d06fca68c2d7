#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qwk/errors.hpp"

namespace qwk {

/// Unordered vertex pair, normalized so that first < second.
inline std::pair<int, int> edge_key(int u, int v) {
  return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
}

/// Vertex-labeled, optionally edge-labeled graph with a symmetric nonnegative
/// weight matrix and zero diagonal. The universal input of the pipeline.
struct WeightedGraph {
  int n = 0;
  Eigen::MatrixXd weights;  // n x n, symmetric, zero diagonal
  std::vector<std::string> vertex_labels;
  std::map<std::pair<int, int>, std::string> edge_labels;  // keys u < v
  std::string graph_id;
  std::string class_label;
  std::string timestamp;  // set for temporal datasets (ISO-8601 date)
  // True for graphs where every vertex pair is an edge by construction
  // (financial networks); a zero weight then means "degenerate edge", not
  // "no edge", and the feature pipeline floors it before the spectral stage.
  bool complete_weighted = false;

  int edge_count() const {
    int m = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (weights(u, v) > 0.0) ++m;
    return m;
  }

  /// Unweighted degree: number of positive-weight incident edges.
  int degree(int u) const {
    int d = 0;
    for (int v = 0; v < n; ++v)
      if (v != u && weights(u, v) > 0.0) ++d;
    return d;
  }
};

/// Throws ValidationError unless g satisfies the WeightedGraph invariants.
inline void validate(const WeightedGraph& g) {
  if (g.n < 0) throw ValidationError("vertex count must be nonnegative");
  if (g.weights.rows() != g.n || g.weights.cols() != g.n)
    throw ValidationError("graph '" + g.graph_id + "': weight matrix is not n x n");
  if (static_cast<int>(g.vertex_labels.size()) != g.n)
    throw ValidationError("graph '" + g.graph_id + "': vertex label count " +
                          std::to_string(g.vertex_labels.size()) + " != n = " +
                          std::to_string(g.n));
  for (int u = 0; u < g.n; ++u) {
    if (g.weights(u, u) != 0.0)
      throw ValidationError("graph '" + g.graph_id + "': nonzero diagonal at vertex " +
                            std::to_string(u));
    for (int v = u + 1; v < g.n; ++v) {
      if (g.weights(u, v) != g.weights(v, u))
        throw ValidationError("graph '" + g.graph_id + "': asymmetric weights at (" +
                              std::to_string(u) + "," + std::to_string(v) + ")");
      if (g.weights(u, v) < 0.0)
        throw ValidationError("graph '" + g.graph_id + "': negative weight at (" +
                              std::to_string(u) + "," + std::to_string(v) + ")");
    }
  }
  for (const auto& [key, tok] : g.edge_labels) {
    auto [u, v] = key;
    if (u < 0 || v >= g.n || u >= v)
      throw ValidationError("graph '" + g.graph_id + "': edge label key out of range");
    if (g.weights(u, v) <= 0.0)
      throw ValidationError("graph '" + g.graph_id + "': edge label on absent edge (" +
                            std::to_string(u) + "," + std::to_string(v) + ")");
    (void)tok;
  }
}

/// Replaces vertex labels with tokens of the unweighted degree.
inline WeightedGraph degree_labels(const WeightedGraph& g) {
  WeightedGraph out = g;
  out.vertex_labels.resize(g.n);
  for (int u = 0; u < g.n; ++u) out.vertex_labels[u] = std::to_string(g.degree(u));
  return out;
}

/// Connected components under positive weights, each sorted ascending;
/// components ordered by their smallest vertex.
inline std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(static_cast<size_t>(std::max(g.n, 0)), 0);
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int v = 0; v < g.n; ++v) {
        if (!seen[v] && g.weights(u, v) > 0.0) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::string describe_components(const std::vector<std::vector<int>>& comps) {
  std::string s;
  for (size_t i = 0; i < comps.size(); ++i) {
    if (i) s += " | ";
    s += "{";
    for (size_t j = 0; j < comps[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(comps[i][j]);
    }
    s += "}";
  }
  return s;
}

/// Subgraph induced by `vertices`; position i of `vertices` becomes vertex i.
inline WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<int>& vertices) {
  WeightedGraph out;
  out.n = static_cast<int>(vertices.size());
  out.weights = Eigen::MatrixXd::Zero(out.n, out.n);
  out.vertex_labels.resize(out.n);
  out.graph_id = g.graph_id;
  out.class_label = g.class_label;
  out.timestamp = g.timestamp;
  out.complete_weighted = g.complete_weighted;
  std::vector<int> pos(static_cast<size_t>(g.n), -1);
  for (int i = 0; i < out.n; ++i) pos[vertices[i]] = i;
  for (int i = 0; i < out.n; ++i) {
    out.vertex_labels[i] = g.vertex_labels.empty() ? std::string() : g.vertex_labels[vertices[i]];
    for (int j = i + 1; j < out.n; ++j) {
      double w = g.weights(vertices[i], vertices[j]);
      out.weights(i, j) = w;
      out.weights(j, i) = w;
    }
  }
  for (const auto& [key, tok] : g.edge_labels) {
    int u = pos[key.first], v = pos[key.second];
    if (u >= 0 && v >= 0) out.edge_labels[edge_key(u, v)] = tok;
  }
  return out;
}

/// Relabels vertices: old vertex u becomes perm[u].
inline WeightedGraph permute_vertices(const WeightedGraph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.n)
    throw IntegrityError("permutation size does not match vertex count");
  std::vector<int> inverse(perm.size());
  for (int u = 0; u < g.n; ++u) inverse[perm[u]] = u;
  return induced_subgraph(g, inverse);
}

/// Structure-derived vertex order making downstream numerics independent of
/// input vertex numbering: sort by (vertex label, sorted incident
/// (weight, neighbor label) list), ties keep input order. Returns the list of
/// old indices in canonical order.
inline std::vector<int> canonical_vertex_order(const WeightedGraph& g) {
  using IncidentList = std::vector<std::pair<double, std::string>>;
  std::vector<std::pair<std::string, IncidentList>> keys(static_cast<size_t>(g.n));
  for (int u = 0; u < g.n; ++u) {
    IncidentList inc;
    for (int v = 0; v < g.n; ++v) {
      if (v != u && g.weights(u, v) > 0.0)
        inc.emplace_back(g.weights(u, v),
                         g.vertex_labels.empty() ? std::string() : g.vertex_labels[v]);
    }
    std::sort(inc.begin(), inc.end());
    keys[u] = {g.vertex_labels.empty() ? std::string() : g.vertex_labels[u], std::move(inc)};
  }
  std::vector<int> order(static_cast<size_t>(g.n));
  for (int u = 0; u < g.n; ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] < keys[b]; });
  return order;
}

/// A collection of graphs sharing one label alphabet.
struct GraphDataset {
  std::vector<WeightedGraph> graphs;
  std::set<std::string> label_alphabet;  // union of vertex and edge label tokens

  void rebuild_alphabet() {
    label_alphabet.clear();
    for (const auto& g : graphs) {
      label_alphabet.insert(g.vertex_labels.begin(), g.vertex_labels.end());
      for (const auto& [k, tok] : g.edge_labels) {
        (void)k;
        label_alphabet.insert(tok);
      }
    }
  }
};

/// Validates every member graph plus dataset-level invariants (unique ids,
/// alphabet = union of observed tokens).
inline void validate(const GraphDataset& ds) {
  std::set<std::string> ids;
  for (const auto& g : ds.graphs) {
    validate(g);
    if (!ids.insert(g.graph_id).second)
      throw ValidationError("duplicate graph id '" + g.graph_id + "'");
  }
  GraphDataset probe;
  probe.graphs = ds.graphs;
  probe.rebuild_alphabet();
  if (probe.label_alphabet != ds.label_alphabet)
    throw ValidationError("label alphabet is not the union of observed tokens");
}

/// Canonical stringification of numeric label tokens: integers lose leading
/// zeros/sign noise so hashing is platform-stable; all else stays verbatim.
inline std::string canonical_token(const std::string& raw) {
  if (raw.empty()) return raw;
  size_t pos = 0;
  bool neg = raw[0] == '-';
  if (neg || raw[0] == '+') pos = 1;
  if (pos >= raw.size()) return raw;
  for (size_t i = pos; i < raw.size(); ++i)
    if (raw[i] < '0' || raw[i] > '9') return raw;
  long long value = 0;
  try {
    value = std::stoll(raw);
  } catch (const std::exception&) {
    return raw;  // out of range: keep verbatim
  }
  return std::to_string(value);
}

}  // namespace qwk
