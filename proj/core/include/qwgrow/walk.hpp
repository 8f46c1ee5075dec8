#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "qwgrow/graph.hpp"
#include "qwgrow/random.hpp"

namespace qwgrow {

using Amplitude = std::complex<double>;

/// Complex amplitude vector over the nodes of a graph.
class WalkerState {
 public:
  WalkerState() = default;

  /// Takes the amplitudes as given; see normalized() for a checked constructor.
  explicit WalkerState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {}

  /// Rescales `amplitudes` to unit norm; rejects the zero vector.
  static WalkerState normalized(Eigen::VectorXcd amplitudes);

  /// Amplitude 1 at `v` and 0 elsewhere.
  static WalkerState basis(std::size_t size, NodeId v);

  std::size_t size() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  Amplitude operator[](NodeId v) const { return amplitudes_(v); }

  double norm() const { return amplitudes_.norm(); }

  /// |a_v|^2 per node.
  Eigen::VectorXd probabilities() const { return amplitudes_.cwiseAbs2(); }

 private:
  Eigen::VectorXcd amplitudes_;
};

/*
 * How U(t) = exp(-i A t) is applied.
 *
 * spectral: dense eigendecomposition A = Q diag(lambda) Q^T, built once per
 * graph, then U(t) psi = Q diag(exp(-i lambda t)) Q^T psi.
 *
 * krylov: Lanczos projection of A onto span{psi, A psi, ...} with full
 * reorthogonalization, sub-stepping t until the a posteriori error estimate
 * per sub-step falls below 1e-13. Cost is dominated by sparse products, which
 * makes it much cheaper than the dense route on large sparse graphs.
 *
 * chebyshev: exp(-i A t) = sum_k c_k T_k(A / R) with Bessel coefficients
 * c_k = (2 - [k == 0]) (-i)^k J_k(R t), where R bounds the spectral radius by
 * max over edges of sqrt(deg u * deg v). Long times are split so that each
 * piece has R h <= 400; within a piece terms stop once k > R h and |J_k| has
 * fallen below 1e-17. Only sparse products, roughly R t + 30 of them.
 */
enum class Backend { spectral, krylov, chebyshev };

/// Time-evolution operator of one fixed graph. Immutable, so safe to share across threads.
class Propagator {
 public:
  explicit Propagator(const Graph& g, Backend backend = Backend::spectral);

  std::size_t size() const noexcept { return size_; }
  Backend backend() const noexcept { return backend_; }

  /// U(t) psi. Throws on dimension mismatch or t that is negative or non-finite.
  WalkerState apply(const WalkerState& psi, double t) const;

  /// Eigenvalues in ascending order (spectral backend only).
  const Eigen::VectorXd& eigenvalues() const;

 private:
  Eigen::VectorXcd apply_spectral(const Eigen::VectorXcd& psi, double t) const;
  Eigen::VectorXcd apply_krylov(const Eigen::VectorXcd& psi, double t) const;
  Eigen::VectorXcd apply_chebyshev(const Eigen::VectorXcd& psi, double t) const;
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;

  std::size_t size_ = 0;
  Backend backend_;

  // spectral
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;

  // krylov and chebyshev: CSR adjacency
  std::vector<std::size_t> row_start_;
  std::vector<NodeId> columns_;
  double radius_bound_ = 0.0;
};

/// One-shot U(t) psi on graph g.
WalkerState evolve(const Graph& g, const WalkerState& psi, double t,
                   Backend backend = Backend::spectral);

/*
 * Samples a node with probability |a_v|^2 using exactly one uniform draw:
 * the draw is scaled by the exact probability sum and inverted through the
 * cumulative distribution. Rejects states whose norm is off by more than 1e-6.
 */
NodeId measure(const WalkerState& psi, RandomStream& rng);

/// Basis state at `v`, sized for a graph of `node_count` nodes (>= psi.size()).
WalkerState collapse_to(const WalkerState& psi, NodeId v, std::size_t node_count);
WalkerState collapse_to(const WalkerState& psi, NodeId v);

/// t = -tau * ln(u) with u uniform in (0, 1]; one draw.
double sample_collapse_time(double tau, RandomStream& rng);

}  // namespace qwgrow
