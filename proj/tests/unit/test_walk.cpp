#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qwgrow/error.hpp"
#include "qwgrow/walk.hpp"

using namespace qwgrow;

namespace {

WalkerState random_state(std::size_t n, RandomStream& rng) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Amplitude(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return WalkerState::normalized(a);
}

WalkerState with_probabilities(const std::vector<double>& p) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) a(static_cast<Eigen::Index>(i)) = std::sqrt(p[i]);
  return WalkerState(a);
}

}  // namespace

TEST_CASE("evolve: four-node star example") {
  const WalkerState psi = evolve(star_graph(3), WalkerState::basis(4, 0), 0.5);
  const Eigen::VectorXd p = psi.probabilities();
  const double c = std::cos(std::sqrt(3.0) * 0.5);
  CHECK(std::abs(p(0) - c * c) <= 1e-12);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(p(i) - (1.0 - c * c) / 3.0) <= 1e-12);
  // Target values are (0.42, 0.20, 0.19, 0.19). The leaves are symmetric, so the
  // 0.20 entry cannot hold: every leaf carries 0.1934.
  CHECK(std::abs(p(0) - 0.42) <= 0.005);
  CHECK(std::abs(p(2) - 0.19) <= 0.005);
  CHECK(std::abs(p(3) - 0.19) <= 0.005);
  CHECK(std::abs(p(1) - 0.20) > 0.005);
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-9);
}

TEST_CASE("evolve: zero time is the identity") {
  RandomStream rng(3);
  const Graph g = oracle::random_connected_graph(12, 5, 3);
  const WalkerState psi = random_state(12, rng);
  CHECK(evolve(g, psi, 0.0).amplitudes() == psi.amplitudes());
  CHECK(evolve(g, psi, 0.0, Backend::krylov).amplitudes() == psi.amplitudes());
  CHECK(evolve(g, psi, 0.0, Backend::chebyshev).amplitudes() == psi.amplitudes());
  // Without edges A = 0 and every backend is the identity.
  for (Backend backend : {Backend::spectral, Backend::krylov, Backend::chebyshev}) {
    CHECK(evolve(Graph(3), WalkerState::basis(3, 1), 2.0, backend).amplitudes() == WalkerState::basis(3, 1).amplitudes());
  }
}

TEST_CASE("evolve: two-node path has closed form cos^2(t)") {
  // exp(-i t X) = cos t I - i sin t X
  for (double t : {0.1, 0.7, 1.3, 2.9, 10.0, 123.4}) {
    for (Backend backend : {Backend::spectral, Backend::krylov, Backend::chebyshev}) {
      const WalkerState psi = evolve(path_graph(2), WalkerState::basis(2, 0), t, backend);
      CHECK(std::abs(psi.probabilities()(0) - std::cos(t) * std::cos(t)) <= 1e-9);
      CHECK(std::abs(psi[1] - Amplitude(0.0, -std::sin(t))) <= 1e-9);
    }
  }
}

TEST_CASE("evolve: argument checks") {
  const Graph g = path_graph(3);
  CHECK_THROWS_AS(evolve(g, WalkerState::basis(2, 0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(evolve(g, WalkerState::basis(3, 0), -1.0), InvalidArgument);
  CHECK_THROWS_AS(evolve(g, WalkerState::basis(3, 0), std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(evolve(g, WalkerState::basis(3, 0), INFINITY), InvalidArgument);
}

TEST_CASE("evolve: unitarity and composition on random fixtures") {
  RandomStream rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::size_t>(2 + rng.uniform() * 40);
    const Graph g = oracle::random_connected_graph(n, static_cast<std::size_t>(rng.uniform() * n), 100 + trial);
    const WalkerState psi = random_state(n, rng);
    const double t1 = 5.0 * rng.uniform();
    const double t2 = 5.0 * rng.uniform();
    for (Backend backend : {Backend::spectral, Backend::krylov, Backend::chebyshev}) {
      const Propagator u(g, backend);
      const WalkerState once = u.apply(psi, t1);
      CHECK(std::abs(once.norm() - 1.0) <= 1e-9);
      const WalkerState twice = u.apply(once, t2);
      const WalkerState direct = u.apply(psi, t1 + t2);
      CHECK((twice.amplitudes() - direct.amplitudes()).norm() <= 1e-8);
    }
  }
}

TEST_CASE("evolve: sparse backends agree with the spectral backend") {
  RandomStream rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<std::size_t>(20 + rng.uniform() * 150);
    const Graph g = oracle::random_connected_graph(n, trial % 3 == 0 ? n / 4 : 0, 500 + trial);
    const WalkerState psi = WalkerState::basis(n, static_cast<NodeId>(rng.uniform() * n));
    const double t = 30.0 * rng.uniform();
    const WalkerState a = evolve(g, psi, t, Backend::spectral);
    const WalkerState b = evolve(g, psi, t, Backend::krylov);
    const WalkerState c = evolve(g, psi, t, Backend::chebyshev);
    CHECK((a.amplitudes() - b.amplitudes()).norm() <= 1e-9);
    CHECK((a.amplitudes() - c.amplitudes()).norm() <= 1e-9);
  }
}

TEST_CASE("evolve: star center return probability is cos^2(sqrt(l) t)") {
  for (Backend backend : {Backend::spectral, Backend::krylov, Backend::chebyshev}) {
    RandomStream rng(5);
    for (std::size_t leaves = 1; leaves <= 50; ++leaves) {
      const Propagator u(star_graph(leaves), backend);
      for (int i = 0; i < 20; ++i) {
        const double t = 10.0 * rng.uniform();
        const double p = u.apply(WalkerState::basis(leaves + 1, 0), t).probabilities()(0);
        const double c = std::cos(std::sqrt(static_cast<double>(leaves)) * t);
        CHECK(std::abs(p - c * c) <= 1e-9);
      }
    }
  }
}

TEST_CASE("evolve: long times stay accurate") {
  const Graph g = oracle::random_connected_graph(120, 10, 12);
  const WalkerState psi = WalkerState::basis(120, 7);
  for (double t : {50.0, 200.0}) {
    const WalkerState a = evolve(g, psi, t, Backend::spectral);
    CHECK((a.amplitudes() - evolve(g, psi, t, Backend::krylov).amplitudes()).norm() <= 1e-8);
    CHECK((a.amplitudes() - evolve(g, psi, t, Backend::chebyshev).amplitudes()).norm() <= 1e-8);
  }
}

TEST_CASE("measure") {
  SUBCASE("basis state is deterministic") {
    RandomStream rng(1);
    for (int i = 0; i < 100; ++i) CHECK(measure(WalkerState::basis(6, 3), rng) == 3);
    CHECK(rng.draws() == 100);
  }

  SUBCASE("frequencies pass a chi-square test against the four-node example") {
    const std::vector<double> p{0.42, 0.20, 0.19, 0.19};
    const WalkerState psi = with_probabilities(p);
    RandomStream rng(99);
    constexpr int kDraws = 100000;
    std::vector<int> counts(4, 0);
    for (int i = 0; i < kDraws; ++i) ++counts[measure(psi, rng)];
    double chi2 = 0.0;
    for (int v = 0; v < 4; ++v) {
      const double expected = kDraws * p[v];
      chi2 += (counts[v] - expected) * (counts[v] - expected) / expected;
    }
    // 0.999 quantile of chi-square with 3 degrees of freedom
    CHECK(chi2 < 16.266);
  }

  SUBCASE("uniform superposition within 3 sigma per node") {
    constexpr std::size_t n = 7;
    const WalkerState psi = with_probabilities(std::vector<double>(n, 1.0 / n));
    RandomStream rng(1234);
    constexpr int kDraws = 100000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < kDraws; ++i) ++counts[measure(psi, rng)];
    const double mean = kDraws / static_cast<double>(n);
    const double sigma = std::sqrt(kDraws * (1.0 / n) * (1.0 - 1.0 / n));
    for (int c : counts) CHECK(std::abs(c - mean) <= 3.0 * sigma);
  }

  SUBCASE("unnormalized state is rejected") {
    RandomStream rng(1);
    Eigen::VectorXcd a = Eigen::VectorXcd::Constant(4, 0.5);
    a(0) = 0.5 + 1e-5;
    CHECK_THROWS_AS(measure(WalkerState(a), rng), InvalidArgument);
    a(0) = 0.5 + 1e-9;
    CHECK_NOTHROW(measure(WalkerState(a), rng));
  }

  SUBCASE("fixed seed reproduces the measured sequence") {
    const WalkerState psi = evolve(oracle::random_connected_graph(30, 10, 8), WalkerState::basis(30, 0), 2.0);
    RandomStream a(55);
    RandomStream b(55);
    for (int i = 0; i < 500; ++i) CHECK(measure(psi, a) == measure(psi, b));
  }
}

TEST_CASE("collapse_to") {
  const WalkerState psi = evolve(star_graph(3), WalkerState::basis(4, 0), 0.5);
  const WalkerState c = collapse_to(psi, 1, 5);
  CHECK(c.size() == 5);
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(5);
  expected(1) = 1.0;
  CHECK(c.amplitudes() == expected);

  RandomStream rng(3);
  for (int i = 0; i < 20; ++i) CHECK(measure(collapse_to(psi, 2), rng) == 2);

  CHECK_THROWS_AS(collapse_to(psi, 4, 5), InvalidArgument);
  CHECK_THROWS_AS(collapse_to(psi, 1, 3), InvalidArgument);
}

TEST_CASE("sample_collapse_time") {
  RandomStream rng(8);
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double t = sample_collapse_time(1.0, rng);
    CHECK(t >= 0.0);
    sum += t;
  }
  const double mean = sum / kDraws;
  CHECK(mean >= 0.98);
  CHECK(mean <= 1.02);
  CHECK(rng.draws() == kDraws);

  RandomStream forced(ScriptedSource::from_uniforms({0.0}));
  CHECK(sample_collapse_time(2.0, forced) == 0.0);  // u = 1 - 0 = 1

  CHECK_THROWS_AS(sample_collapse_time(0.0, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_collapse_time(-1.0, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_collapse_time(INFINITY, rng), InvalidArgument);
}
