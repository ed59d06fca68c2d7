#pragma once

#include <string>
#include <thread>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/graph.hpp"
#include "qwk/labels.hpp"
#include "qwk/sparsify.hpp"
#include "qwk/spectral.hpp"
#include "qwk/walk.hpp"

namespace qwk {

/// Floor applied to zero weights of complete-weighted graphs before the
/// spectral stage (a zero there means "identical series", not "no edge").
inline constexpr double kCompleteWeightFloor = 1e-12;

struct PipelineOptions {
  int horizon = 25;
  int h_min = 0;
  int h_max = 3;
  int workers = 1;
};

/// Label-independent walk features of one graph.
struct GraphFeatures {
  SparseGraph substrate;   // what the walk ran on
  bool took_mst = false;
  DirectedEdgeSpace space;
  VisitDistribution vd;
  int original_n = 0;      // before any component reduction
  int walked_n = 0;        // after reduction
  bool uniform_fallback = false;
};

/// Runs one graph up to the visit distribution: validate, floor degenerate
/// complete-graph weights, reduce to the largest connected component if
/// needed, reorder vertices canonically, default missing labels to degrees,
/// then commute time -> Q -> sparsification policy -> quantum walk.
inline GraphFeatures extract_walk_features(const WeightedGraph& g, int horizon) {
  validate(g);
  WeightedGraph work = g;
  GraphFeatures out;
  out.original_n = g.n;

  if (work.complete_weighted) {
    for (int u = 0; u < work.n; ++u)
      for (int v = 0; v < work.n; ++v)
        if (u != v && work.weights(u, v) <= 0.0) work.weights(u, v) = kCompleteWeightFloor;
  }

  auto comps = connected_components(work);
  if (comps.size() > 1) {
    size_t best = 0;
    for (size_t i = 1; i < comps.size(); ++i)
      if (comps[i].size() > comps[best].size()) best = i;
    work = induced_subgraph(work, comps[best]);
  }
  if (work.n < 2)
    throw DegenerateInputError("graph '" + g.graph_id +
                               "': fewer than 2 vertices in the largest component");
  out.walked_n = work.n;

  bool unlabeled = true;
  for (const auto& l : work.vertex_labels)
    if (!l.empty()) unlabeled = false;
  if (unlabeled) work = degree_labels(work);

  work = induced_subgraph(work, canonical_vertex_order(work));

  CommuteTimeResult ct = commute_time_matrix(work);
  Eigen::MatrixXd q = modified_commute_matrix(work, ct);
  SparsifyResult sp = sparsification_policy(work, ct, q);
  out.substrate = std::move(sp.graph);
  out.took_mst = sp.took_mst;

  WalkSystem sys = build_walk_system(out.substrate);
  out.uniform_fallback = sys.uniform_fallback;
  out.vd = visit_distribution(sys, horizon);
  out.space = std::move(sys.space);
  return out;
}

/// Walk features plus label distributions for every graph of a dataset at WL
/// iterations h_min..h_max. Per-graph stages run on `workers` threads; the WL
/// table pass is single-threaded.
struct DatasetFeatures {
  std::vector<GraphFeatures> graphs;
  // distributions[g][h - h_min]
  std::vector<std::vector<LabelDistribution>> distributions;
  std::string label_space_id;
  PipelineOptions options;
};

inline DatasetFeatures extract_dataset_features(const GraphDataset& ds,
                                                const PipelineOptions& opts) {
  if (opts.h_min < 0 || opts.h_min > opts.h_max)
    throw ValidationError("WL range must satisfy 0 <= h_min <= h_max");
  if (opts.horizon < 0) throw ValidationError("horizon must be nonnegative");

  const size_t count = ds.graphs.size();
  DatasetFeatures out;
  out.options = opts;
  out.graphs.resize(count);
  std::vector<std::string> failures(count);

  auto run_range = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      try {
        out.graphs[i] = extract_walk_features(ds.graphs[i], opts.horizon);
      } catch (const std::exception& ex) {
        failures[i] = std::string(ex.what());
      }
    }
  };
  const int workers = std::max(1, opts.workers);
  if (workers == 1 || count <= 1) {
    run_range(0, count);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      size_t begin = std::min(count, static_cast<size_t>(w) * chunk);
      size_t end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < count; ++i)
    if (!failures[i].empty())
      throw Error("pipeline failed on graph '" + ds.graphs[i].graph_id + "': " + failures[i]);

  std::vector<const SparseGraph*> substrates;
  substrates.reserve(count);
  for (const auto& f : out.graphs) substrates.push_back(&f.substrate);
  WlRefinement wl = wl_refine_dataset(substrates, opts.h_max);
  out.label_space_id = wl.label_space_id;

  out.distributions.resize(count);
  for (size_t i = 0; i < count; ++i) {
    for (int h = opts.h_min; h <= opts.h_max; ++h) {
      out.distributions[i].push_back(label_distribution(
          out.graphs[i].vd, out.graphs[i].space, out.graphs[i].substrate,
          wl.levels[i][static_cast<size_t>(h)], h, wl.space_id_at(h)));
    }
  }
  return out;
}

}  // namespace qwk
