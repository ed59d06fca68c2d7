#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/graph.hpp"

namespace qwk {
namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open '" + file.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    lines.push_back(line.substr(start));
  }
  return lines;
}

inline int parse_int(const std::string& s, const std::string& context) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw FormatError(context + ": trailing junk in '" + s + "'");
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError(context + ": not an integer: '" + s + "'");
  }
}

}  // namespace detail

/// Loads a community-convention graph-classification directory:
/// `<name>_A.txt` (edge list), `<name>_graph_indicator.txt`, and optional
/// `<name>_node_labels.txt` / `<name>_edge_labels.txt` / `<name>_graph_labels.txt`.
/// All indices in the files are 1-based.
inline GraphDataset load_tu_dataset(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw FormatError("'" + dir.string() + "' is not a directory");
  const std::string name = dir.filename().empty()
                               ? dir.parent_path().filename().string()
                               : dir.filename().string();
  const fs::path a_file = dir / (name + "_A.txt");
  const fs::path ind_file = dir / (name + "_graph_indicator.txt");
  if (!fs::exists(a_file))
    throw FormatError("missing mandatory file '" + a_file.string() + "'");
  if (!fs::exists(ind_file))
    throw FormatError("missing mandatory file '" + ind_file.string() + "'");

  const auto indicator = detail::read_lines(ind_file);
  if (indicator.empty())
    throw FormatError("'" + ind_file.string() + "' is empty");
  const int node_count = static_cast<int>(indicator.size());

  std::vector<int> node_graph(node_count);  // 0-based graph index per node
  int graph_count = 0;
  for (int i = 0; i < node_count; ++i) {
    int gid = detail::parse_int(indicator[i], ind_file.string() + ":" + std::to_string(i + 1));
    if (gid < 1) throw IntegrityError(ind_file.string() + ": graph id " + std::to_string(gid) +
                                      " out of range");
    node_graph[i] = gid - 1;
    graph_count = std::max(graph_count, gid);
  }

  // Local vertex index of each node within its graph.
  std::vector<int> local(node_count);
  std::vector<int> sizes(graph_count, 0);
  for (int i = 0; i < node_count; ++i) local[i] = sizes[node_graph[i]]++;

  GraphDataset ds;
  ds.graphs.resize(graph_count);
  for (int k = 0; k < graph_count; ++k) {
    auto& g = ds.graphs[k];
    g.n = sizes[k];
    g.weights = Eigen::MatrixXd::Zero(g.n, g.n);
    g.vertex_labels.assign(g.n, "");
    g.graph_id = std::to_string(k + 1);
  }

  const auto edges = detail::read_lines(a_file);
  std::vector<std::pair<int, int>> edge_nodes;  // global 1-based endpoints per row
  edge_nodes.reserve(edges.size());
  for (size_t row = 0; row < edges.size(); ++row) {
    std::string context = a_file.string() + ":" + std::to_string(row + 1);
    std::string line = edges[row];
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::string us, vs;
    if (!(ss >> us >> vs)) throw FormatError(context + ": expected two vertex ids");
    int u = detail::parse_int(us, context);
    int v = detail::parse_int(vs, context);
    if (u < 1 || u > node_count || v < 1 || v > node_count)
      throw IntegrityError(context + ": vertex reference out of range");
    if (node_graph[u - 1] != node_graph[v - 1])
      throw IntegrityError(context + ": edge joins vertices of different graphs");
    edge_nodes.emplace_back(u, v);
    if (u != v) {
      auto& g = ds.graphs[node_graph[u - 1]];
      g.weights(local[u - 1], local[v - 1]) = 1.0;
      g.weights(local[v - 1], local[u - 1]) = 1.0;
    }
  }

  const fs::path nl_file = dir / (name + "_node_labels.txt");
  if (fs::exists(nl_file)) {
    const auto labels = detail::read_lines(nl_file);
    if (static_cast<int>(labels.size()) != node_count)
      throw IntegrityError("'" + nl_file.string() + "': expected " +
                           std::to_string(node_count) + " lines, got " +
                           std::to_string(labels.size()));
    for (int i = 0; i < node_count; ++i)
      ds.graphs[node_graph[i]].vertex_labels[local[i]] = canonical_token(labels[i]);
  } else {
    for (auto& g : ds.graphs) g = degree_labels(g);
  }

  const fs::path el_file = dir / (name + "_edge_labels.txt");
  if (fs::exists(el_file)) {
    const auto labels = detail::read_lines(el_file);
    if (labels.size() != edge_nodes.size())
      throw IntegrityError("'" + el_file.string() + "': expected " +
                           std::to_string(edge_nodes.size()) + " lines, got " +
                           std::to_string(labels.size()));
    for (size_t row = 0; row < labels.size(); ++row) {
      auto [u, v] = edge_nodes[row];
      if (u == v) continue;
      auto& g = ds.graphs[node_graph[u - 1]];
      auto key = edge_key(local[u - 1], local[v - 1]);
      std::string tok = canonical_token(labels[row]);
      auto it = g.edge_labels.find(key);
      if (it != g.edge_labels.end() && it->second != tok)
        throw IntegrityError("'" + el_file.string() + "': conflicting labels for edge (" +
                             std::to_string(u) + "," + std::to_string(v) + ")");
      g.edge_labels[key] = tok;
    }
  }

  const fs::path gl_file = dir / (name + "_graph_labels.txt");
  if (fs::exists(gl_file)) {
    const auto labels = detail::read_lines(gl_file);
    if (static_cast<int>(labels.size()) != graph_count)
      throw IntegrityError("'" + gl_file.string() + "': expected " +
                           std::to_string(graph_count) + " lines, got " +
                           std::to_string(labels.size()));
    for (int k = 0; k < graph_count; ++k)
      ds.graphs[k].class_label = canonical_token(labels[k]);
  }

  ds.rebuild_alphabet();
  validate(ds);
  return ds;
}

}  // namespace qwk
