#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/labels.hpp"
#include "qwk/pipeline.hpp"

namespace qwk {

namespace detail {

inline void check_normalized(const LabelDistribution& p) {
  double total = 0.0;
  for (const auto& [k, v] : p.masses) {
    (void)k;
    if (v < 0.0) throw ValidationError("distribution has negative mass");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw ValidationError("distribution is not normalized: total mass " + std::to_string(total));
}

inline void check_same_space(const LabelDistribution& p, const LabelDistribution& q) {
  if (p.label_space_id != q.label_space_id)
    throw ValidationError("distributions come from different label spaces ('" +
                          p.label_space_id + "' vs '" + q.label_space_id + "')");
}

}  // namespace detail

/// Shannon entropy in bits: H = -sum p log2 p, with 0 log 0 = 0.
inline double shannon_entropy(const LabelDistribution& p) {
  detail::check_normalized(p);
  double h = 0.0;
  for (const auto& [key, mass] : p.masses) {
    (void)key;
    if (mass > 0.0) h -= mass * std::log2(mass);
  }
  return h < 0.0 ? 0.0 : h;
}

/// Jensen-Shannon divergence in [0,1] (base-2 entropies):
/// D = H((P+Q)/2) - H(P)/2 - H(Q)/2. Missing keys count as zero mass.
inline double js_divergence(const LabelDistribution& p, const LabelDistribution& q) {
  detail::check_same_space(p, q);
  detail::check_normalized(p);
  detail::check_normalized(q);
  LabelDistribution mix;
  mix.label_space_id = p.label_space_id;
  for (const auto& [key, mass] : p.masses) mix.masses[key] += mass / 2.0;
  for (const auto& [key, mass] : q.masses) mix.masses[key] += mass / 2.0;
  double h_mix = 0.0;
  for (const auto& [key, mass] : mix.masses) {
    (void)key;
    if (mass > 0.0) h_mix -= mass * std::log2(mass);
  }
  double d = h_mix - shannon_entropy(p) / 2.0 - shannon_entropy(q) / 2.0;
  if (d < 0.0) d = 0.0;  // fp underflow guard
  return d;
}

/// Dot-product kernel: sum over keys present in both distributions.
inline double k_dp(const LabelDistribution& p, const LabelDistribution& q) {
  detail::check_same_space(p, q);
  auto it = p.masses.begin();
  auto jt = q.masses.begin();
  double sum = 0.0;
  while (it != p.masses.end() && jt != q.masses.end()) {
    if (it->first < jt->first)
      ++it;
    else if (jt->first < it->first)
      ++jt;
    else {
      sum += it->second * jt->second;
      ++it;
      ++jt;
    }
  }
  return sum;
}

/// Negative-exponential Jensen-Shannon kernel, in [exp(-1), 1].
inline double k_js(const LabelDistribution& p, const LabelDistribution& q) {
  return std::exp(-js_divergence(p, q));
}

enum class KernelKind { dot_product, jensen_shannon };

inline std::string to_string(KernelKind k) {
  return k == KernelKind::dot_product ? "dp" : "js";
}

inline KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "dp") return KernelKind::dot_product;
  if (s == "js") return KernelKind::jensen_shannon;
  throw ValidationError("unknown kernel kind '" + s + "' (expected dp or js)");
}

/// N x N kernel-value table over a graph collection with provenance metadata.
struct GramMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> graph_ids;
  KernelKind kind = KernelKind::jensen_shannon;
  int horizon = 25;
  int h_min = 0;
  int h_max = 3;
  std::string policy_note;  // sparsification record (how many graphs took the MST branch)
};

/// Kernel value between two graphs' feature sets: the equal-weight average of
/// the per-h kernels over the WL range.
inline double kernel_value(const std::vector<LabelDistribution>& a,
                           const std::vector<LabelDistribution>& b, KernelKind kind) {
  if (a.size() != b.size() || a.empty())
    throw IntegrityError("feature vectors have mismatched WL ranges");
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    sum += kind == KernelKind::dot_product ? k_dp(a[i], b[i]) : k_js(a[i], b[i]);
  return sum / static_cast<double>(a.size());
}

/// All-pairs Gram matrix over a dataset: per-graph features are computed once
/// (parallel over graphs), then every pair is evaluated from the features.
inline GramMatrix gram(const GraphDataset& ds, KernelKind kind, int horizon, int h_min,
                       int h_max, int workers = 1) {
  PipelineOptions opts;
  opts.horizon = horizon;
  opts.h_min = h_min;
  opts.h_max = h_max;
  opts.workers = workers;
  DatasetFeatures features = extract_dataset_features(ds, opts);

  const int count = static_cast<int>(ds.graphs.size());
  GramMatrix gm;
  gm.kind = kind;
  gm.horizon = horizon;
  gm.h_min = h_min;
  gm.h_max = h_max;
  gm.values.resize(count, count);
  gm.graph_ids.reserve(ds.graphs.size());
  for (const auto& g : ds.graphs) gm.graph_ids.push_back(g.graph_id);
  int mst_count = 0;
  for (const auto& f : features.graphs)
    if (f.took_mst) ++mst_count;
  gm.policy_note = std::to_string(mst_count) + "/" + std::to_string(count) + " graphs took the MST branch";

  auto fill_rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      for (int j = i; j < count; ++j) {
        double v = kernel_value(features.distributions[i], features.distributions[j], kind);
        gm.values(i, j) = v;
        gm.values(j, i) = v;
      }
  };
  const int nworkers = std::max(1, workers);
  if (nworkers == 1 || count <= 1) {
    fill_rows(0, count);
  } else {
    std::vector<std::thread> pool;
    int chunk = (count + nworkers - 1) / nworkers;
    for (int w = 0; w < nworkers; ++w) {
      int begin = std::min(count, w * chunk);
      int end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return gm;
}

/// Result of the seeded stratified k-fold 1-NN smoke classifier.
struct CvResult {
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Deterministic stratified k-fold 1-nearest-neighbor accuracy in the
/// kernel-induced distance d^2(a,b) = k(a,a) + k(b,b) - 2 k(a,b).
inline CvResult kernel_1nn_cv(const GramMatrix& gm, const std::vector<std::string>& labels,
                              int folds, unsigned seed) {
  const int count = static_cast<int>(gm.graph_ids.size());
  if (static_cast<int>(labels.size()) != count)
    throw ValidationError("label count does not match Gram size");
  if (gm.values.rows() != count || gm.values.cols() != count)
    throw ValidationError("Gram matrix is not square over its graph ids");

  std::map<std::string, std::vector<int>> by_class;
  for (int i = 0; i < count; ++i) by_class[labels[i]].push_back(i);
  size_t smallest = count ? static_cast<size_t>(count) : 0;
  for (const auto& [cls, members] : by_class) {
    (void)cls;
    smallest = std::min(smallest, members.size());
  }
  if (folds < 2 || static_cast<size_t>(folds) > smallest)
    throw ValidationError("fold count " + std::to_string(folds) +
                          " unsupported by class sizes (smallest class has " +
                          std::to_string(smallest) + ")");

  std::mt19937 rng(seed);
  std::vector<std::vector<int>> fold_members(static_cast<size_t>(folds));
  for (auto& [cls, members] : by_class) {
    (void)cls;
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t i = 0; i < members.size(); ++i)
      fold_members[i % static_cast<size_t>(folds)].push_back(members[i]);
  }

  CvResult result;
  for (int f = 0; f < folds; ++f) {
    std::vector<char> in_test(static_cast<size_t>(count), 0);
    for (int i : fold_members[static_cast<size_t>(f)]) in_test[static_cast<size_t>(i)] = 1;
    int hits = 0;
    for (int a : fold_members[static_cast<size_t>(f)]) {
      int best = -1;
      double best_d = 0.0;
      for (int b = 0; b < count; ++b) {
        if (in_test[static_cast<size_t>(b)]) continue;
        double d = gm.values(a, a) + gm.values(b, b) - 2.0 * gm.values(a, b);
        if (best < 0 || d < best_d) {
          best = b;
          best_d = d;
        }
      }
      if (best >= 0 && labels[static_cast<size_t>(best)] == labels[static_cast<size_t>(a)]) ++hits;
    }
    result.fold_accuracies.push_back(
        fold_members[static_cast<size_t>(f)].empty()
            ? 0.0
            : static_cast<double>(hits) / fold_members[static_cast<size_t>(f)].size());
  }
  double sum = 0.0;
  for (double a : result.fold_accuracies) sum += a;
  result.mean = sum / folds;
  double var = 0.0;
  for (double a : result.fold_accuracies) var += (a - result.mean) * (a - result.mean);
  var /= folds > 1 ? folds - 1 : 1;
  result.standard_error = std::sqrt(var / folds);
  return result;
}

namespace detail {

inline std::string format_double(double v, int significant = 17) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
  return buf;
}

}  // namespace detail

/// CSV export: optional provenance header comment, a header row of graph ids,
/// then one row per graph.
inline void write_gram_csv(const GramMatrix& gm, const std::filesystem::path& path,
                           const std::string& header_comment = "") {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "id";
  for (const auto& id : gm.graph_ids) out << "," << id;
  out << "\n";
  const int count = static_cast<int>(gm.graph_ids.size());
  for (int i = 0; i < count; ++i) {
    out << gm.graph_ids[i];
    for (int j = 0; j < count; ++j) out << "," << detail::format_double(gm.values(i, j));
    out << "\n";
  }
}

/// Precomputed-kernel text format consumed by mainstream SVM tools:
/// `<label> 0:<row-index> 1:<k(i,1)> 2:<k(i,2)> ...`, row indices 1-based.
inline void write_gram_precomputed(const GramMatrix& gm, const std::vector<std::string>& labels,
                                   const std::filesystem::path& path) {
  const int count = static_cast<int>(gm.graph_ids.size());
  if (static_cast<int>(labels.size()) != count)
    throw ValidationError("label count does not match Gram size");
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  for (int i = 0; i < count; ++i) {
    out << labels[i] << " 0:" << (i + 1);
    for (int j = 0; j < count; ++j)
      out << " " << (j + 1) << ":" << detail::format_double(gm.values(i, j));
    out << "\n";
  }
}

/// Reads a Gram CSV produced by write_gram_csv (comment lines skipped).
inline GramMatrix read_gram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.size() < 2 || rows[0].size() < 2 || rows[0][0] != "id")
    throw FormatError("'" + path.string() + "': not a Gram CSV");
  GramMatrix gm;
  const size_t count = rows[0].size() - 1;
  if (rows.size() != count + 1)
    throw FormatError("'" + path.string() + "': expected " + std::to_string(count) + " data rows");
  gm.graph_ids.assign(rows[0].begin() + 1, rows[0].end());
  gm.values.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  for (size_t i = 0; i < count; ++i) {
    if (rows[i + 1].size() != count + 1)
      throw FormatError("'" + path.string() + "': row " + std::to_string(i + 1) +
                        " has wrong cell count");
    if (rows[i + 1][0] != gm.graph_ids[i])
      throw FormatError("'" + path.string() + "': row ids do not match header order");
    for (size_t j = 0; j < count; ++j) {
      try {
        gm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::stod(rows[i + 1][j + 1]);
      } catch (const std::exception&) {
        throw FormatError("'" + path.string() + "': bad number '" + rows[i + 1][j + 1] + "'");
      }
    }
  }
  return gm;
}

}  // namespace qwk
