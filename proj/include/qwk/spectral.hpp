#pragma once

#include <Eigen/Dense>
#include <string>

#include "qwk/errors.hpp"
#include "qwk/graph.hpp"

namespace qwk {

/// Relative threshold below which an eigenvalue counts as the trivial zero of
/// a connected graph's Laplacian.
inline constexpr double kTrivialEigenvalueRel = 1e-9;

/// Commute times plus the Laplacian spectrum they were derived from.
struct CommuteTimeResult {
  Eigen::MatrixXd C;             // symmetric, zero diagonal
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, aligned with eigenvalues
  double volume = 0.0;           // sum of weighted degrees
};

/// Commute time between every vertex pair of a connected weighted graph:
/// C(u,v) = vol * sum_{j>=2} (1/lambda_j) (phi_j(u) - phi_j(v))^2, evaluated
/// from the unnormalized Laplacian spectrum. Equals vol times the effective
/// resistance between u and v.
inline CommuteTimeResult commute_time_matrix(const WeightedGraph& g) {
  if (g.n < 2)
    throw DegenerateInputError("graph '" + g.graph_id +
                               "': commute time needs at least 2 vertices");
  Eigen::VectorXd deg = g.weights.rowwise().sum();
  Eigen::MatrixXd laplacian = Eigen::MatrixXd(deg.asDiagonal()) - g.weights;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw Error("graph '" + g.graph_id + "': eigendecomposition failed");

  CommuteTimeResult out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.volume = deg.sum();

  const double lambda_max = out.eigenvalues(g.n - 1);
  const double cutoff = kTrivialEigenvalueRel * std::max(lambda_max, 0.0);
  int near_zero = 0;
  for (int j = 0; j < g.n; ++j)
    if (out.eigenvalues(j) <= cutoff) ++near_zero;
  if (near_zero != 1)
    throw ConnectivityError("graph '" + g.graph_id + "' is disconnected: components " +
                            describe_components(connected_components(g)));

  out.C = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      double sum = 0.0;
      for (int j = 0; j < g.n; ++j) {
        if (out.eigenvalues(j) <= cutoff) continue;
        double d = out.eigenvectors(u, j) - out.eigenvectors(v, j);
        sum += d * d / out.eigenvalues(j);
      }
      double c = out.volume * sum;
      out.C(u, v) = c;
      out.C(v, u) = c;
    }
  }
  return out;
}

/// Modified commute time matrix Q = C (elementwise*) A; zero wherever the
/// original graph has no edge.
inline Eigen::MatrixXd modified_commute_matrix(const WeightedGraph& g,
                                               const CommuteTimeResult& ct) {
  if (ct.C.rows() != g.n || ct.C.cols() != g.n)
    throw IntegrityError("graph '" + g.graph_id +
                         "': commute time matrix does not match vertex count");
  return ct.C.cwiseProduct(g.weights);
}

}  // namespace qwk
