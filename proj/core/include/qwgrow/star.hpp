#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qwgrow/graph.hpp"
#include "qwgrow/growth.hpp"
#include "qwgrow/polynomial.hpp"

namespace qwgrow {

// Stars are parameterized by their leaf count l: l + 1 nodes, eigenvalues
// +-sqrt(l) and 0 with multiplicity l - 1.

/// cos^2(sqrt(l) t): probability of finding a walker that started on the center back there.
double star_return_probability(std::size_t leaves, double t);

/// prod_{n=1..k} cos^2(sqrt(n) tau)
double p_center(std::size_t k, double tau);

/// sin^2(sqrt(k) tau) * prod_{n=1..k-1} cos^2(sqrt(n) tau)
double p_out(std::size_t k, double tau);

/// Both sequences for k = 1..max_k, computed with a running product.
struct StarEscapeTable {
  std::vector<double> p_center;  ///< index k-1
  std::vector<double> p_out;     ///< index k-1
};
StarEscapeTable star_escape_table(std::size_t max_k, double tau);

struct StarSizeEstimate {
  double value = 0.0;            ///< sum_k k * p_out(k, tau) over the kept terms
  std::size_t terms = 0;         ///< last k included
  double residual_mass = 0.0;    ///< p_center(terms, tau): escape mass not yet accounted for
};

/*
 * Mean star size sum_k k * p_out(k, tau), truncated at the first k where the
 * survival probability p_center(k, tau) drops below `truncation_eps`. Throws
 * if that does not happen within `max_terms` (tau near a trapping resonance).
 */
StarSizeEstimate expected_star_size(double tau, double truncation_eps = 1e-12,
                                    std::size_t max_terms = 100'000'000);

/// {-sqrt(l), 0 x (l-1), +sqrt(l)}, ascending.
std::vector<double> star_spectrum(std::size_t leaves);

/// Exact det(A - xI) by the Faddeev-LeVerrier recurrence over big integers.
/// The result carries the sign (-1)^n on x^n. Limited to 64 nodes.
IntPolynomial charpoly_exact(const Graph& g);

/// Leaf counts l_1..l_q; star i+1 is centered on the first leaf of star i.
struct StarChain {
  std::vector<std::size_t> leaf_counts;

  std::size_t node_count() const;
  void validate() const;
};

/// Parses "3,2,4".
StarChain parse_star_chain(const std::string& text);

Graph star_chain_graph(const StarChain& chain);

/*
 * Multi-star recurrence, evaluated literally with n_i := l_i:
 *   chi_{l1..lq} = -l_q x^(l_q - 1) chi_{l1..l_{q-1}-1} + x^(l_q) chi_{l1..l_{q-1}}
 * with the single-star base case (-1)^(l+1) x^(l-1) (x^2 - l), which is -x at
 * l = 0. This is a hypothesis to be compared with charpoly_exact, not ground truth.
 */
IntPolynomial charpoly_recurrence(const StarChain& chain);

struct RecurrenceReport {
  StarChain chain;
  IntPolynomial exact;
  IntPolynomial recurrence;
  bool match = false;       ///< equal up to a global sign
  int sign = 1;             ///< sign s used for residual = exact - s * recurrence
  IntPolynomial residual;
};

RecurrenceReport compare_recurrence(const StarChain& chain);

/// {"chain", "convention", "exact", "recurrence", "match", "sign", "residual_coefficients"}
std::string recurrence_report_json(const RecurrenceReport& report);

/*
 * Star sizes of a tree: every non-leaf node is a center and its size is its
 * degree. Returned in descending order. The 2-node tree counts as one star of
 * size 1.
 */
std::vector<std::size_t> detect_stars(const Graph& tree);

/// After each event of the trace, the top_m largest |eigenvalues| (descending, zero padded).
std::vector<std::vector<double>> spectrum_trajectory(const GrowthTrace& trace, std::size_t top_m);

}  // namespace qwgrow
