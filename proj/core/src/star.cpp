#include "qwgrow/star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "qwgrow/error.hpp"

namespace qwgrow {

namespace {

void check_tau(double tau) {
  if (!std::isfinite(tau) || !(tau > 0.0)) throw InvalidArgument("tau must be positive and finite");
}

double cos2(double x) {
  const double c = std::cos(x);
  return c * c;
}

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

}  // namespace

double star_return_probability(std::size_t leaves, double t) {
  if (leaves < 1) throw InvalidArgument("a star needs at least one leaf");
  return cos2(std::sqrt(static_cast<double>(leaves)) * t);
}

double p_center(std::size_t k, double tau) {
  if (k < 1) throw InvalidArgument("p_center: k must be at least 1");
  check_tau(tau);
  double product = 1.0;
  for (std::size_t n = 1; n <= k; ++n) product *= cos2(std::sqrt(static_cast<double>(n)) * tau);
  return product;
}

double p_out(std::size_t k, double tau) {
  if (k < 1) throw InvalidArgument("p_out: k must be at least 1");
  check_tau(tau);
  const double survive = k == 1 ? 1.0 : p_center(k - 1, tau);
  return sin2(std::sqrt(static_cast<double>(k)) * tau) * survive;
}

StarEscapeTable star_escape_table(std::size_t max_k, double tau) {
  StarEscapeTable table;
  table.p_center.reserve(max_k);
  table.p_out.reserve(max_k);
  double survive = 1.0;
  for (std::size_t k = 1; k <= max_k; ++k) {
    const double x = std::sqrt(static_cast<double>(k)) * tau;
    table.p_out.push_back(survive * sin2(x));
    survive *= cos2(x);
    table.p_center.push_back(survive);
  }
  return table;
}

StarSizeEstimate expected_star_size(double tau, double truncation_eps, std::size_t max_terms) {
  check_tau(tau);
  if (!(truncation_eps > 0.0)) throw InvalidArgument("truncation_eps must be positive");

  StarSizeEstimate est;
  double survive = 1.0;
  for (std::size_t k = 1; k <= max_terms; ++k) {
    const double x = std::sqrt(static_cast<double>(k)) * tau;
    est.value += static_cast<double>(k) * survive * sin2(x);
    survive *= cos2(x);
    est.terms = k;
    est.residual_mass = survive;
    if (survive < truncation_eps) return est;
  }
  throw Error("expected_star_size: survival probability still " + std::to_string(survive) +
              " after " + std::to_string(max_terms) + " terms");
}

std::vector<double> star_spectrum(std::size_t leaves) {
  if (leaves < 1) throw InvalidArgument("a star needs at least one leaf");
  const double r = std::sqrt(static_cast<double>(leaves));
  std::vector<double> values(leaves + 1, 0.0);
  values.front() = -r;
  values.back() = r;
  return values;
}

IntPolynomial charpoly_exact(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InvalidArgument("charpoly of an empty graph");
  if (n > 64) throw InvalidArgument("charpoly_exact supports at most 64 nodes");

  // Faddeev-LeVerrier for p(x) = det(xI - A) = sum c_k x^k, c_n = 1:
  //   M_1 = I, c_{n-1} = -tr(A)
  //   M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  std::vector<std::vector<BigInt>> am(n, std::vector<BigInt>(n));

  for (std::size_t k = 1; k <= n; ++k) {
    // m <- A m + c_{n-k+1} I  (m = 0 before the first pass)
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t j = 0; j < n; ++j) am[u][j] = 0;
      for (NodeId w : g.neighbors(static_cast<NodeId>(u))) {
        for (std::size_t j = 0; j < n; ++j) am[u][j] += m[w][j];
      }
      am[u][u] += c[n - k + 1];
    }
    std::swap(m, am);

    BigInt trace = 0;
    for (std::size_t u = 0; u < n; ++u) {
      for (NodeId w : g.neighbors(static_cast<NodeId>(u))) trace += m[w][u];
    }
    if (trace % k != 0) throw Error("charpoly_exact: non-integral trace quotient");
    c[n - k] = -(trace / k);
  }

  if (n % 2 == 1) {
    for (auto& x : c) x = -x;
  }
  return IntPolynomial(std::move(c));
}

std::size_t StarChain::node_count() const {
  std::size_t total = 1;
  for (std::size_t l : leaf_counts) total += l;
  return total;
}

void StarChain::validate() const {
  if (leaf_counts.empty()) throw InvalidArgument("star chain needs at least one star");
  for (std::size_t l : leaf_counts) {
    if (l < 1) throw InvalidArgument("every star in a chain needs at least one leaf");
  }
}

StarChain parse_star_chain(const std::string& text) {
  StarChain chain;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw InvalidArgument("empty entry in star chain '" + text + "'");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.front() == '-') {
      throw InvalidArgument("invalid leaf count '" + item + "' in star chain '" + text + "'");
    }
    chain.leaf_counts.push_back(value);
  }
  chain.validate();
  return chain;
}

Graph star_chain_graph(const StarChain& chain) {
  chain.validate();
  Graph g(1);
  NodeId center = 0;
  for (std::size_t l : chain.leaf_counts) {
    const auto first_leaf = static_cast<NodeId>(g.node_count());
    for (std::size_t i = 0; i < l; ++i) g.attach_node(std::span<const NodeId>(&center, 1));
    center = first_leaf;
  }
  return g;
}

namespace {

IntPolynomial single_star_charpoly(std::size_t leaves) {
  if (leaves == 0) return IntPolynomial{0, -1};
  // (-1)^(l+1) x^(l-1) (x^2 - l)
  const BigInt sign = (leaves % 2 == 1) ? 1 : -1;
  const BigInt l = static_cast<unsigned long long>(leaves);
  return IntPolynomial::monomial(sign, leaves + 1) - IntPolynomial::monomial(sign * l, leaves - 1);
}

IntPolynomial recurrence_of(std::vector<std::size_t> counts) {
  if (counts.size() == 1) return single_star_charpoly(counts.front());
  const std::size_t last = counts.back();
  counts.pop_back();
  const IntPolynomial prefix = recurrence_of(counts);
  if (last == 0) return prefix;
  counts.back() -= (counts.back() > 0) ? 1 : 0;
  const IntPolynomial reduced = recurrence_of(counts);
  const BigInt n_last = static_cast<unsigned long long>(last);
  return IntPolynomial::monomial(-n_last, last - 1) * reduced + IntPolynomial::monomial(1, last) * prefix;
}

nlohmann::ordered_json coefficients_json(const IntPolynomial& p) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const BigInt& c : p.coefficients()) {
    if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max()) {
      out.push_back(c.convert_to<long long>());
    } else {
      out.push_back(c.str());
    }
  }
  return out;
}

}  // namespace

IntPolynomial charpoly_recurrence(const StarChain& chain) {
  chain.validate();
  return recurrence_of(chain.leaf_counts);
}

RecurrenceReport compare_recurrence(const StarChain& chain) {
  RecurrenceReport report;
  report.chain = chain;
  report.exact = charpoly_exact(star_chain_graph(chain));
  report.recurrence = charpoly_recurrence(chain);
  if (report.exact == report.recurrence) {
    report.match = true;
    report.sign = 1;
  } else if (report.exact == -report.recurrence) {
    report.match = true;
    report.sign = -1;
  }
  report.residual = report.sign == 1 ? report.exact - report.recurrence : report.exact + report.recurrence;
  return report;
}

std::string recurrence_report_json(const RecurrenceReport& report) {
  nlohmann::ordered_json doc;
  doc["chain"] = report.chain.leaf_counts;
  doc["convention"] =
      "leaf counts; star i+1 centered on the first leaf of star i; det(A - xI); coefficients ascending";
  doc["exact"] = coefficients_json(report.exact);
  doc["recurrence"] = coefficients_json(report.recurrence);
  doc["match"] = report.match;
  doc["sign"] = report.sign;
  doc["residual_coefficients"] = coefficients_json(report.residual);
  return doc.dump(2) + "\n";
}

std::vector<std::size_t> detect_stars(const Graph& tree) {
  if (!is_tree(tree)) throw InvalidArgument("detect_stars expects a tree");
  if (tree.node_count() == 2) return {1};
  std::vector<std::size_t> sizes;
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    if (tree.degree(v) >= 2) sizes.push_back(tree.degree(v));
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

std::vector<std::vector<double>> spectrum_trajectory(const GrowthTrace& trace, std::size_t top_m) {
  if (top_m < 1) throw InvalidArgument("spectrum_trajectory: top_m must be at least 1");
  replay(trace);  // validates the events before we walk them

  std::vector<std::vector<double>> rows;
  rows.reserve(trace.events.size());
  Graph g = trace.config.initial_graph;
  for (const CollapseEvent& e : trace.events) {
    g.attach_node(e.measured);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.dense_adjacency(), Eigen::EigenvaluesOnly);
    std::vector<double> mags(static_cast<std::size_t>(solver.eigenvalues().size()));
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(solver.eigenvalues()(static_cast<Eigen::Index>(i)));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    mags.resize(top_m, 0.0);
    rows.push_back(std::move(mags));
  }
  return rows;
}

}  // namespace qwgrow
