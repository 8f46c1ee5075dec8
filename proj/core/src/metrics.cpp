#include "qwgrow/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>

#include <Eigen/Eigenvalues>

#include "qwgrow/error.hpp"

namespace qwgrow {

DegreeHistogram degree_distribution(const Graph& g) {
  if (g.node_count() == 0) throw InvalidArgument("degree_distribution: empty graph");
  std::map<std::size_t, std::size_t> counts;
  for (NodeId v = 0; v < g.node_count(); ++v) ++counts[g.degree(v)];

  DegreeHistogram h;
  h.node_count = g.node_count();
  const auto n = static_cast<double>(g.node_count());
  for (const auto& [k, c] : counts) h.fractions[k] = static_cast<double>(c) / n;
  return h;
}

PowerLawFit fit_power_law(const DegreeHistogram& h) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [k, d] : h.fractions) {
    if (k == 0 || !(d > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(d));
  }
  if (xs.size() < 3) {
    throw InsufficientSupport("power-law fit needs at least 3 degrees with nonzero mass, got " +
                              std::to_string(xs.size()));
  }

  const auto m = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= m;
  mean_y /= m;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;

  PowerLawFit fit;
  fit.alpha = -slope;
  fit.intercept = mean_y - slope * mean_x;
  fit.support = xs.size();
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::size_t diameter(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InvalidArgument("diameter: empty graph");

  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n);
  std::queue<NodeId> frontier;
  std::size_t best = 0;
  for (NodeId source = 0; source < n; ++source) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    dist[source] = 0;
    frontier.push(source);
    std::size_t reached = 1;
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] == kUnseen) {
          dist[v] = dist[u] + 1;
          best = std::max(best, dist[v]);
          ++reached;
          frontier.push(v);
        }
      }
    }
    if (reached != n) throw InvalidArgument("diameter: graph is disconnected");
  }
  return best;
}

double leaf_fraction(const Graph& g) {
  if (g.node_count() < 2) throw InvalidArgument("leaf_fraction needs at least 2 nodes");
  std::size_t leaves = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) leaves += g.degree(v) == 1 ? 1 : 0;
  return static_cast<double>(leaves) / static_cast<double>(g.node_count());
}

Clustering clustering(const Graph& g) {
  if (g.node_count() == 0) throw InvalidArgument("clustering: empty graph");
  Clustering out;
  out.local.assign(g.node_count(), 0.0);
  double sum = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto nbrs = g.neighbors(i);
    const std::size_t deg = nbrs.size();
    if (deg < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < deg; ++a) {
      for (std::size_t b = a + 1; b < deg; ++b) links += g.has_edge(nbrs[a], nbrs[b]) ? 1 : 0;
    }
    out.local[i] = 2.0 * static_cast<double>(links) / (static_cast<double>(deg) * static_cast<double>(deg - 1));
    sum += out.local[i];
  }
  out.average = sum / static_cast<double>(g.node_count());
  return out;
}

std::vector<double> spectrum(const Graph& g) {
  if (g.node_count() == 0) throw InvalidArgument("spectrum: empty graph");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.dense_adjacency(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

MetricsReport compute_metrics(const Graph& g, bool with_spectrum) {
  MetricsReport r;
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  r.degree_histogram = degree_distribution(g);
  r.diameter = diameter(g);
  r.leaf_fraction = g.node_count() >= 2 ? leaf_fraction(g) : 0.0;
  r.avg_clustering = clustering(g).average;
  try {
    r.fit = fit_power_law(r.degree_histogram);
  } catch (const InsufficientSupport&) {
    r.fit.reset();
  }
  if (with_spectrum) r.spectrum = spectrum(g);
  return r;
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw Error("format_real: conversion failed");
  return std::string(buf, ptr);
}

std::string metrics_csv_header() { return "nodes,edges,diameter,leaf_fraction,avg_clustering,alpha,alpha_r2"; }

std::string metrics_csv_row(const MetricsReport& r) {
  std::string row = std::to_string(r.nodes) + "," + std::to_string(r.edges) + "," +
                    std::to_string(r.diameter) + "," + format_real(r.leaf_fraction) + "," +
                    format_real(r.avg_clustering) + ",";
  if (r.fit) row += format_real(r.fit->alpha) + "," + format_real(r.fit->r_squared);
  else row += ",";
  return row;
}

}  // namespace qwgrow
