#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qwk/errors.hpp"
#include "qwk/graph.hpp"

namespace qwk {

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json j;
  j["id"] = g.graph_id;
  if (!g.class_label.empty()) j["class"] = g.class_label;
  if (!g.timestamp.empty()) j["timestamp"] = g.timestamp;
  if (g.complete_weighted) j["complete"] = true;
  j["n"] = g.n;
  nlohmann::json rows = nlohmann::json::array();
  for (int u = 0; u < g.n; ++u) {
    nlohmann::json row = nlohmann::json::array();
    for (int v = 0; v < g.n; ++v) row.push_back(g.weights(u, v));
    rows.push_back(std::move(row));
  }
  j["weights"] = std::move(rows);
  j["vertex_labels"] = g.vertex_labels;
  nlohmann::json els = nlohmann::json::array();
  for (const auto& [key, tok] : g.edge_labels)
    els.push_back(nlohmann::json::array({key.first, key.second, tok}));
  j["edge_labels"] = std::move(els);
  return j;
}

inline WeightedGraph graph_from_json(const nlohmann::json& j) {
  WeightedGraph g;
  try {
    g.graph_id = j.value("id", std::string());
    g.class_label = j.value("class", std::string());
    g.timestamp = j.value("timestamp", std::string());
    g.complete_weighted = j.value("complete", false);
    g.n = j.at("n").get<int>();
    const auto& rows = j.at("weights");
    if (static_cast<int>(rows.size()) != g.n)
      throw ValidationError("graph '" + g.graph_id + "': weights row count != n");
    g.weights.resize(g.n, g.n);
    for (int u = 0; u < g.n; ++u) {
      const auto& row = rows[u];
      if (static_cast<int>(row.size()) != g.n)
        throw ValidationError("graph '" + g.graph_id + "': weights row " +
                              std::to_string(u) + " has wrong length");
      for (int v = 0; v < g.n; ++v) g.weights(u, v) = row[v].get<double>();
    }
    if (j.contains("vertex_labels") && !j.at("vertex_labels").empty())
      g.vertex_labels = j.at("vertex_labels").get<std::vector<std::string>>();
    else
      g = degree_labels(g);
    if (j.contains("edge_labels")) {
      for (const auto& e : j.at("edge_labels")) {
        int u = e.at(0).get<int>();
        int v = e.at(1).get<int>();
        g.edge_labels[edge_key(u, v)] = e.at(2).get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("bad graph JSON: ") + ex.what());
  }
  validate(g);
  return g;
}

/// Loads a dataset file: either `{"graphs": [...]}` or a bare array of graphs.
inline GraphDataset load_weighted_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError("'" + path.string() + "': " + ex.what());
  }
  const nlohmann::json* arr = nullptr;
  if (j.is_array())
    arr = &j;
  else if (j.is_object() && j.contains("graphs"))
    arr = &j.at("graphs");
  else
    throw FormatError("'" + path.string() + "': expected a graph array or {\"graphs\": [...]}");
  GraphDataset ds;
  for (const auto& gj : *arr) ds.graphs.push_back(graph_from_json(gj));
  ds.rebuild_alphabet();
  validate(ds);
  return ds;
}

inline void save_weighted_json(const GraphDataset& ds, const std::filesystem::path& path) {
  nlohmann::json j;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : ds.graphs) arr.push_back(graph_to_json(g));
  j["graphs"] = std::move(arr);
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << j.dump(1) << "\n";
}

}  // namespace qwk
