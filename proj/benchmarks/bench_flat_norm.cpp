#include <benchmark/benchmark.h>

#include "gammaflow/flat_norm.hpp"
#include "gammaflow/rng.hpp"

using namespace gammaflow;

namespace {

ZeroCurrent random_current(int atoms, std::uint64_t seed) {
  CounterRng rng(seed);
  ZeroCurrent t(2);
  for (int i = 0; i < atoms; ++i)
    t.add(Point(rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5)), rng.next_below(2) ? 1 : -1);
  return t;
}

void FlatNormZero(benchmark::State& state) {
  const int atoms = int(state.range(0));
  const ZeroCurrent t = random_current(atoms, 42);
  const Domain omega(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0)));
  for (auto _ : state) {
    auto r = flat_norm_zero(t, omega);
    benchmark::DoNotOptimize(r.value);
  }
  state.SetComplexityN(state.range(0));
}

void PairMinBench(benchmark::State& state) {
  const ZeroCurrent t = random_current(int(state.range(0)), 7);
  const Domain omega(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0)));
  for (auto _ : state) {
    auto r = pair_min(t, omega);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(FlatNormZero)->RangeMultiplier(2)->Range(8, 256)->Complexity();
BENCHMARK(PairMinBench)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
