#include <benchmark/benchmark.h>

#include "qwgrow/growth.hpp"
#include "qwgrow/walk.hpp"

using namespace qwgrow;

namespace {

// A grown tree is the graph shape the propagator sees in practice.
Graph grown_tree(std::size_t nodes, double tau) {
  RunConfig config;
  config.tau = tau;
  config.steps = nodes - 1;
  config.seed = 11;
  config.backend = Backend::chebyshev;
  return grow(config).final_graph;
}

void evolve_backend(benchmark::State& state, Backend backend) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double t = static_cast<double>(state.range(1));
  const Graph g = grown_tree(n, 1.0);
  const WalkerState psi = WalkerState::basis(n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(g, psi, t, backend));
}

void BM_EvolveSpectral(benchmark::State& state) { evolve_backend(state, Backend::spectral); }
void BM_EvolveKrylov(benchmark::State& state) { evolve_backend(state, Backend::krylov); }
void BM_EvolveChebyshev(benchmark::State& state) { evolve_backend(state, Backend::chebyshev); }

void evolve_args(benchmark::internal::Benchmark* b) {
  for (int n : {50, 200, 500}) {
    for (int t : {1, 10}) b->Args({n, t});
  }
  b->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_EvolveSpectral)->Apply(evolve_args);
BENCHMARK(BM_EvolveKrylov)->Apply(evolve_args);
BENCHMARK(BM_EvolveChebyshev)->Apply(evolve_args);
