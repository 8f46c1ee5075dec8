#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwgrow/graph.hpp"

namespace qwgrow {

/// Fraction of nodes per degree; only degrees that occur are stored.
struct DegreeHistogram {
  std::map<std::size_t, double> fractions;
  std::size_t node_count = 0;
};

DegreeHistogram degree_distribution(const Graph& g);

struct PowerLawFit {
  double alpha = 0.0;      ///< d(k) ~ k^-alpha
  double intercept = 0.0;  ///< fitted ln d(1)
  double r_squared = 0.0;
  std::size_t support = 0; ///< number of bins used
};

/// Thrown by fit_power_law when fewer than three degrees carry mass.
class InsufficientSupport : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least squares of ln d(k) against ln k over the nonzero bins.
PowerLawFit fit_power_law(const DegreeHistogram& h);

/// Longest shortest path (in edges) over all node pairs. Throws on a disconnected graph.
std::size_t diameter(const Graph& g);

/// Nodes of degree exactly one over all nodes.
double leaf_fraction(const Graph& g);

struct Clustering {
  std::vector<double> local;  ///< C_i, 0 for nodes of degree < 2
  double average = 0.0;
};

Clustering clustering(const Graph& g);

/// Adjacency eigenvalues, ascending.
std::vector<double> spectrum(const Graph& g);

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  DegreeHistogram degree_histogram;
  std::size_t diameter = 0;
  double leaf_fraction = 0.0;
  double avg_clustering = 0.0;
  std::optional<PowerLawFit> fit;
  std::vector<double> spectrum;  ///< empty unless requested
};

MetricsReport compute_metrics(const Graph& g, bool with_spectrum = false);

/// "nodes,edges,diameter,leaf_fraction,avg_clustering,alpha,alpha_r2"
std::string metrics_csv_header();
/// Matching row; alpha and alpha_r2 are empty when no fit exists. No trailing newline.
std::string metrics_csv_row(const MetricsReport& report);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_real(double x);

}  // namespace qwgrow
