#include "qwgrow/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qwgrow/error.hpp"

namespace qwgrow {

namespace {

constexpr std::size_t kKrylovDimension = 30;
constexpr double kKrylovTolerance = 1e-13;
constexpr double kChebyshevMaxArgument = 400.0;
constexpr double kMeasureNormTolerance = 1e-6;

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidArgument("evolution time must be finite and non-negative, got " +
                          std::to_string(t));
  }
}

}  // namespace

WalkerState WalkerState::normalized(Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite state");
  amplitudes /= n;
  return WalkerState(std::move(amplitudes));
}

WalkerState WalkerState::basis(std::size_t size, NodeId v) {
  if (v >= size) {
    throw InvalidArgument("basis state: node " + std::to_string(v) + " out of range for size " +
                          std::to_string(size));
  }
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
  a(v) = 1.0;
  return WalkerState(std::move(a));
}

Propagator::Propagator(const Graph& g, Backend backend) : size_(g.node_count()), backend_(backend) {
  if (backend_ == Backend::spectral) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.dense_adjacency());
    if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  } else {
    row_start_.reserve(size_ + 1);
    columns_.reserve(2 * g.edge_count());
    row_start_.push_back(0);
    for (NodeId u = 0; u < size_; ++u) {
      auto nbrs = g.neighbors(u);
      columns_.insert(columns_.end(), nbrs.begin(), nbrs.end());
      row_start_.push_back(columns_.size());
    }
    for (const Edge& e : g.edges()) {
      const double d = static_cast<double>(g.degree(e.first)) * static_cast<double>(g.degree(e.second));
      radius_bound_ = std::max(radius_bound_, std::sqrt(d));
    }
  }
}

const Eigen::VectorXd& Propagator::eigenvalues() const {
  if (backend_ != Backend::spectral) throw Error("eigenvalues are only kept by the spectral backend");
  return eigenvalues_;
}

WalkerState Propagator::apply(const WalkerState& psi, double t) const {
  check_time(t);
  if (psi.size() != size_) {
    throw InvalidArgument("walker dimension " + std::to_string(psi.size()) +
                          " does not match graph size " + std::to_string(size_));
  }
  if (t == 0.0) return psi;
  switch (backend_) {
    case Backend::spectral: return WalkerState(apply_spectral(psi.amplitudes(), t));
    case Backend::krylov: return WalkerState(apply_krylov(psi.amplitudes(), t));
    case Backend::chebyshev: return WalkerState(apply_chebyshev(psi.amplitudes(), t));
  }
  throw Error("unknown propagator backend");
}

Eigen::VectorXcd Propagator::apply_spectral(const Eigen::VectorXcd& psi, double t) const {
  const Eigen::VectorXd re = psi.real();
  const Eigen::VectorXd im = psi.imag();
  const Eigen::VectorXd c_re = eigenvectors_.transpose() * re;
  const Eigen::VectorXd c_im = eigenvectors_.transpose() * im;

  Eigen::VectorXd r_re(c_re.size());
  Eigen::VectorXd r_im(c_re.size());
  for (Eigen::Index k = 0; k < c_re.size(); ++k) {
    const double phase = -eigenvalues_(k) * t;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    r_re(k) = c * c_re(k) - s * c_im(k);
    r_im(k) = s * c_re(k) + c * c_im(k);
  }

  Eigen::VectorXcd out(psi.size());
  out.real() = eigenvectors_ * r_re;
  out.imag() = eigenvectors_ * r_im;
  return out;
}

Eigen::VectorXcd Propagator::multiply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  for (std::size_t u = 0; u < size_; ++u) {
    Amplitude acc = 0.0;
    for (std::size_t k = row_start_[u]; k < row_start_[u + 1]; ++k) acc += x(columns_[k]);
    y(static_cast<Eigen::Index>(u)) = acc;
  }
  return y;
}

Eigen::VectorXcd Propagator::apply_krylov(const Eigen::VectorXcd& psi, double t) const {
  const auto n = static_cast<Eigen::Index>(size_);
  const auto max_dim = static_cast<Eigen::Index>(std::min(kKrylovDimension, size_));

  Eigen::VectorXcd v = psi;
  double remaining = t;
  Eigen::MatrixXcd basis(n, max_dim);
  std::vector<double> alpha;
  std::vector<double> beta;

  while (remaining > 0.0) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;

    alpha.clear();
    beta.clear();
    basis.col(0) = v / beta0;
    Eigen::Index dim = 0;
    double residual = 0.0;
    for (Eigen::Index j = 0; j < max_dim; ++j) {
      Eigen::VectorXcd w = multiply(basis.col(j));
      alpha.push_back(basis.col(j).dot(w).real());
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd coeff = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * coeff;
      }
      residual = w.norm();
      dim = j + 1;
      if (residual <= 1e-12 * std::max(1.0, std::abs(alpha.back()))) {
        residual = 0.0;
        break;
      }
      if (j + 1 < max_dim) {
        beta.push_back(residual);
        basis.col(j + 1) = w / residual;
      }
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      tri(j, j) = alpha[static_cast<std::size_t>(j)];
      if (j + 1 < dim) tri(j, j + 1) = tri(j + 1, j) = beta[static_cast<std::size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
    const Eigen::VectorXd& theta = small.eigenvalues();
    const Eigen::MatrixXd& s = small.eigenvectors();

    auto project = [&](double h) {
      Eigen::VectorXcd y(dim);
      Eigen::VectorXcd phased(dim);
      for (Eigen::Index k = 0; k < dim; ++k) phased(k) = std::polar(s(0, k), -theta(k) * h);
      y = s.cast<Amplitude>() * phased;
      return y;
    };

    double h = remaining;
    Eigen::VectorXcd y = project(h);
    // The projection is exact once the Krylov space is invariant (residual 0).
    while (residual > 0.0 && residual * std::abs(y(dim - 1)) > kKrylovTolerance) {
      h *= 0.5;
      y = project(h);
    }
    v = beta0 * (basis.leftCols(dim) * y);
    remaining = (h == remaining) ? 0.0 : remaining - h;
  }
  return v;
}

Eigen::VectorXcd Propagator::apply_chebyshev(const Eigen::VectorXcd& psi, double t) const {
  if (radius_bound_ == 0.0) return psi;  // no edges: A = 0
  const double r = radius_bound_;
  // std::cyl_bessel_j is only trustworthy for arguments below about 1000, so
  // long times are split into pieces with r * h <= kChebyshevMaxArgument.
  const auto pieces = static_cast<std::size_t>(std::ceil(r * t / kChebyshevMaxArgument));
  const double x = r * t / static_cast<double>(pieces);
  const std::size_t hard_limit = static_cast<std::size_t>(x) + 10 * static_cast<std::size_t>(std::cbrt(x)) + 200;

  std::vector<double> coeff{std::cyl_bessel_j(0.0, x)};
  for (std::size_t k = 1;; ++k) {
    const double j = std::cyl_bessel_j(static_cast<double>(k), x);
    coeff.push_back(2.0 * j);
    if (static_cast<double>(k) > x && std::abs(j) < 1e-17) break;
    if (k >= hard_limit) throw Error("chebyshev propagator did not converge");
  }

  const Amplitude minus_i(0.0, -1.0);
  Eigen::VectorXcd v = psi;
  for (std::size_t piece = 0; piece < pieces; ++piece) {
    // phi_k = T_k(A / r) v by the three-term recurrence.
    Eigen::VectorXcd prev = v;
    Eigen::VectorXcd cur = multiply(v) / r;
    Eigen::VectorXcd out = coeff[0] * v;
    Amplitude phase = minus_i;
    for (std::size_t k = 1; k < coeff.size(); ++k) {
      out += coeff[k] * phase * cur;
      if (k + 1 == coeff.size()) break;
      Eigen::VectorXcd next = (2.0 / r) * multiply(cur) - prev;
      prev = std::move(cur);
      cur = std::move(next);
      phase *= minus_i;
    }
    v = std::move(out);
  }
  return v;
}

WalkerState evolve(const Graph& g, const WalkerState& psi, double t, Backend backend) {
  check_time(t);
  if (psi.size() != g.node_count()) {
    throw InvalidArgument("walker dimension " + std::to_string(psi.size()) +
                          " does not match graph size " + std::to_string(g.node_count()));
  }
  if (t == 0.0) return psi;
  return Propagator(g, backend).apply(psi, t);
}

NodeId measure(const WalkerState& psi, RandomStream& rng) {
  if (psi.size() == 0) throw InvalidArgument("measure: empty state");
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= kMeasureNormTolerance)) {
    throw InvalidArgument("measure: state norm " + std::to_string(norm) +
                          " deviates from 1 by more than 1e-6");
  }
  const Eigen::VectorXd p = psi.probabilities();
  const double total = p.sum();
  const double target = rng.uniform() * total;

  double cumulative = 0.0;
  NodeId last_supported = 0;
  for (Eigen::Index v = 0; v < p.size(); ++v) {
    if (p(v) <= 0.0) continue;
    cumulative += p(v);
    last_supported = static_cast<NodeId>(v);
    if (target < cumulative) return last_supported;
  }
  return last_supported;
}

WalkerState collapse_to(const WalkerState& psi, NodeId v, std::size_t node_count) {
  if (v >= psi.size()) {
    throw InvalidArgument("collapse_to: node " + std::to_string(v) + " out of range for state of size " +
                          std::to_string(psi.size()));
  }
  if (node_count < psi.size()) throw InvalidArgument("collapse_to: graph cannot shrink");
  return WalkerState::basis(node_count, v);
}

WalkerState collapse_to(const WalkerState& psi, NodeId v) { return collapse_to(psi, v, psi.size()); }

double sample_collapse_time(double tau, RandomStream& rng) {
  if (!std::isfinite(tau) || !(tau > 0.0)) {
    throw InvalidArgument("collapse time scale tau must be positive and finite, got " +
                          std::to_string(tau));
  }
  const double t = -tau * std::log(rng.uniform_open_closed());
  return t == 0.0 ? 0.0 : t;
}

}  // namespace qwgrow
