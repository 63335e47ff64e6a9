#include <benchmark/benchmark.h>

#include "gammaflow/decomposition.hpp"
#include "gammaflow/rng.hpp"

using namespace gammaflow;

namespace {

void Decompose(benchmark::State& state) {
  CounterRng rng(3);
  ZeroCurrent t(2);
  for (int i = 0; i < state.range(0); ++i)
    t.add(Point(rng.uniform(0.2, 9.8), rng.uniform(0.2, 9.8)), rng.next_below(2) ? 1 : -1);
  const Domain omega(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0)));
  const DecompParams params{2, 1.9, 0.9};
  for (auto _ : state) {
    auto res = decompose(t, omega, params);
    benchmark::DoNotOptimize(res.trace.size());
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(Decompose)->RangeMultiplier(2)->Range(16, 256)->Complexity();
