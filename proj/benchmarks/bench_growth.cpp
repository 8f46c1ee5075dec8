#include <benchmark/benchmark.h>

#include "qwgrow/growth.hpp"

using namespace qwgrow;

namespace {

void BM_GrowRun(benchmark::State& state) {
  RunConfig config;
  config.walkers = static_cast<std::size_t>(state.range(0));
  config.tau = 1.0;
  config.steps = static_cast<std::size_t>(state.range(1));
  config.backend = Backend::chebyshev;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(grow(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

}  // namespace

BENCHMARK(BM_GrowRun)->Args({1, 100})->Args({1, 300})->Args({2, 100})->Unit(benchmark::kMillisecond);
