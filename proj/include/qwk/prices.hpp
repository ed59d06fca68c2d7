#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qwk/errors.hpp"
#include "qwk/graph.hpp"

namespace qwk {

/// Closing-price table: strictly increasing dates, fully observed tickers.
struct PriceTable {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;  // ISO-8601, strictly increasing
  Eigen::MatrixXd closes;          // dates x tickers
  std::vector<std::string> dropped_tickers;  // had missing values in the span
};

namespace detail {

inline bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

inline bool is_missing_cell(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null";
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    size_t start = cell.find_first_not_of(' ');
    cells.push_back(start == std::string::npos ? std::string() : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace detail

/// Parses `date,TICK1,TICK2,...` CSV. Tickers with any missing value in the
/// span are dropped and reported in the returned table.
inline PriceTable load_prices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw FormatError("'" + path.string() + "' is empty");
  std::vector<std::string> header = detail::split_csv_row(line);
  if (header.size() < 2 || header[0] != "date")
    throw FormatError("'" + path.string() + "': header must be 'date,TICK1,...'");
  const size_t ticker_count = header.size() - 1;
  std::set<std::string> seen_tickers(header.begin() + 1, header.end());
  if (seen_tickers.size() != ticker_count)
    throw ValidationError("'" + path.string() + "': duplicate ticker column");

  std::vector<std::string> dates;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<char>> missing;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::string context = path.string() + ":" + std::to_string(line_no);
    std::vector<std::string> cells = detail::split_csv_row(line);
    if (cells.size() != header.size())
      throw FormatError(context + ": expected " + std::to_string(header.size()) + " cells, got " +
                        std::to_string(cells.size()));
    if (!detail::is_iso_date(cells[0]))
      throw FormatError(context + ": unparseable date '" + cells[0] + "'");
    if (!dates.empty() && !(dates.back() < cells[0]))
      throw ValidationError(context + ": dates not strictly increasing at '" + cells[0] + "'");
    dates.push_back(cells[0]);
    std::vector<double> row(ticker_count, 0.0);
    std::vector<char> miss(ticker_count, 0);
    for (size_t t = 0; t < ticker_count; ++t) {
      const std::string& cell = cells[t + 1];
      if (detail::is_missing_cell(cell)) {
        miss[t] = 1;
        continue;
      }
      try {
        size_t used = 0;
        row[t] = std::stod(cell, &used);
        if (used != cell.size()) throw FormatError("");
      } catch (const std::exception&) {
        throw FormatError(context + ": non-numeric price '" + cell + "' for ticker " +
                          header[t + 1]);
      }
      if (!(row[t] > 0.0))
        throw ValidationError(context + ": non-positive price for ticker " + header[t + 1]);
    }
    rows.push_back(std::move(row));
    missing.push_back(std::move(miss));
  }
  if (rows.empty()) throw FormatError("'" + path.string() + "': no data rows");

  PriceTable pt;
  pt.dates = std::move(dates);
  std::vector<size_t> kept;
  for (size_t t = 0; t < ticker_count; ++t) {
    bool complete = true;
    for (const auto& miss : missing)
      if (miss[t]) complete = false;
    if (complete)
      kept.push_back(t);
    else
      pt.dropped_tickers.push_back(header[t + 1]);
  }
  for (size_t t : kept) pt.tickers.push_back(header[t + 1]);
  pt.closes.resize(static_cast<Eigen::Index>(pt.dates.size()),
                   static_cast<Eigen::Index>(kept.size()));
  for (size_t d = 0; d < pt.dates.size(); ++d)
    for (size_t t = 0; t < kept.size(); ++t)
      pt.closes(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t)) = rows[d][kept[t]];
  return pt;
}

enum class WeightMode { euclidean, correlation };

inline WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "euclidean") return WeightMode::euclidean;
  if (s == "correlation") return WeightMode::correlation;
  throw ValidationError("unknown weight mode '" + s + "' (expected euclidean or correlation)");
}

/// One complete weighted graph per window end-date. Per-window series are the
/// daily log-returns within the window; weights are either the Euclidean
/// distance between return series or the correlation distance
/// sqrt(2 (1 - rho)) (zero-variance pairs get rho = 0). Vertex labels are the
/// ticker symbols; graph timestamps are the window end-dates.
inline GraphDataset sliding_networks(const PriceTable& pt, int window, WeightMode mode) {
  if (window < 2) throw ValidationError("window must be at least 2 days");
  const int days = static_cast<int>(pt.dates.size());
  const int n = static_cast<int>(pt.tickers.size());
  if (days < window)
    throw ValidationError("price table has " + std::to_string(days) +
                          " days, fewer than the window " + std::to_string(window));
  if (n < 2) throw ValidationError("need at least 2 fully observed tickers");

  GraphDataset ds;
  for (int start = 0; start + window <= days; ++start) {
    const int rlen = window - 1;  // daily log-returns inside the window
    Eigen::MatrixXd returns(rlen, n);
    for (int r = 0; r < rlen; ++r)
      for (int t = 0; t < n; ++t)
        returns(r, t) = std::log(pt.closes(start + r + 1, t) / pt.closes(start + r, t));

    WeightedGraph g;
    g.n = n;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    g.vertex_labels = pt.tickers;
    g.graph_id = pt.dates[static_cast<size_t>(start + window - 1)];
    g.timestamp = g.graph_id;
    g.complete_weighted = true;

    Eigen::VectorXd mean = returns.colwise().mean();
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        double w = 0.0;
        if (mode == WeightMode::euclidean) {
          w = (returns.col(u) - returns.col(v)).norm();
        } else {
          Eigen::VectorXd cu = returns.col(u).array() - mean(u);
          Eigen::VectorXd cv = returns.col(v).array() - mean(v);
          double denom = cu.norm() * cv.norm();
          double rho = denom > 0.0 ? cu.dot(cv) / denom : 0.0;
          rho = std::clamp(rho, -1.0, 1.0);
          w = std::sqrt(2.0 * (1.0 - rho));
        }
        g.weights(u, v) = w;
        g.weights(v, u) = w;
      }
    }
    ds.graphs.push_back(std::move(g));
  }
  ds.rebuild_alphabet();
  return ds;
}

}  // namespace qwk
