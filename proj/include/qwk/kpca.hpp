#pragma once

#include <Eigen/Dense>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/kernels.hpp"
#include "qwk/pipeline.hpp"

namespace qwk {

/// Kernel PCA embedding of a graph collection.
struct Embedding {
  Eigen::MatrixXd coordinates;  // N x d, columns ordered by descending eigenvalue
  Eigen::VectorXd explained;    // d leading eigenvalues of the centered Gram
  std::vector<std::string> graph_ids;
  double clamped_magnitude = 0.0;  // largest negative eigenvalue clamped to 0
};

/// Double-centers the Gram, eigendecomposes, and returns eigenvector columns
/// scaled by sqrt of the (clamped-nonnegative) eigenvalues. Deterministic
/// sign convention: the largest-magnitude coordinate of each column is
/// positive.
inline Embedding kpca(const GramMatrix& gm, int dims) {
  const int count = static_cast<int>(gm.graph_ids.size());
  if (dims < 1 || dims > count)
    throw ValidationError("embedding dimension " + std::to_string(dims) +
                          " out of range for " + std::to_string(count) + " graphs");
  const Eigen::MatrixXd& k = gm.values;
  Eigen::VectorXd row_mean = k.rowwise().mean();
  double total_mean = k.mean();
  Eigen::MatrixXd centered =
      k - row_mean.replicate(1, count) - row_mean.transpose().replicate(count, 1) +
      Eigen::MatrixXd::Constant(count, count, total_mean);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
  if (solver.info() != Eigen::Success) throw Error("kPCA eigendecomposition failed");

  Embedding emb;
  emb.graph_ids = gm.graph_ids;
  emb.coordinates.resize(count, dims);
  emb.explained.resize(dims);
  for (int c = 0; c < dims; ++c) {
    const int src = count - 1 - c;  // solver orders ascending
    double lambda = solver.eigenvalues()(src);
    if (lambda < 0.0) {
      emb.clamped_magnitude = std::max(emb.clamped_magnitude, -lambda);
      lambda = 0.0;
    }
    emb.explained(c) = lambda;
    Eigen::VectorXd col = solver.eigenvectors().col(src) * std::sqrt(lambda);
    int arg_max = 0;
    for (int i = 1; i < count; ++i)
      if (std::abs(col(i)) > std::abs(col(arg_max))) arg_max = i;
    if (col(arg_max) < 0.0) col = -col;
    emb.coordinates.col(c) = col;
  }
  return emb;
}

/// Per-graph Shannon entropy of the h = 0 label distribution, in dataset
/// order; the dataset must be in strictly increasing timestamp order.
inline std::vector<std::pair<std::string, double>> entropy_series(const GraphDataset& ds,
                                                                  int horizon,
                                                                  int workers = 1) {
  for (size_t i = 0; i < ds.graphs.size(); ++i) {
    if (ds.graphs[i].timestamp.empty())
      throw ValidationError("graph '" + ds.graphs[i].graph_id + "' has no timestamp");
    if (i > 0 && !(ds.graphs[i - 1].timestamp < ds.graphs[i].timestamp))
      throw ValidationError("timestamps are not strictly increasing at '" +
                            ds.graphs[i].timestamp + "'");
  }
  const size_t count = ds.graphs.size();
  std::vector<double> entropies(count, 0.0);
  std::vector<std::string> failures(count);
  auto run_range = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      try {
        GraphFeatures f = extract_walk_features(ds.graphs[i], horizon);
        LabelDistribution dist = label_distribution(f.vd, f.space, f.substrate,
                                                    f.substrate.vertex_labels, 0, "h0");
        entropies[i] = shannon_entropy(dist);
      } catch (const std::exception& ex) {
        failures[i] = ex.what();
      }
    }
  };
  const int nworkers = std::max(1, workers);
  if (nworkers == 1 || count <= 1) {
    run_range(0, count);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (count + nworkers - 1) / nworkers;
    for (int w = 0; w < nworkers; ++w) {
      size_t begin = std::min(count, static_cast<size_t>(w) * chunk);
      size_t end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < count; ++i)
    if (!failures[i].empty())
      throw Error("pipeline failed on graph '" + ds.graphs[i].graph_id + "': " + failures[i]);

  std::vector<std::pair<std::string, double>> series;
  series.reserve(count);
  for (size_t i = 0; i < count; ++i) series.emplace_back(ds.graphs[i].timestamp, entropies[i]);
  return series;
}

}  // namespace qwk
