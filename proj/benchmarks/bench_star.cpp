#include <benchmark/benchmark.h>

#include "qwgrow/star.hpp"

using namespace qwgrow;

namespace {

void BM_CharpolyExact(benchmark::State& state) {
  const auto stars = static_cast<std::size_t>(state.range(0));
  const Graph g = star_chain_graph(StarChain{std::vector<std::size_t>(stars, 3)});
  for (auto _ : state) benchmark::DoNotOptimize(charpoly_exact(g));
}

void BM_ExpectedStarSize(benchmark::State& state) {
  const double tau = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expected_star_size(tau));
}

}  // namespace

BENCHMARK(BM_CharpolyExact)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExpectedStarSize)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);
