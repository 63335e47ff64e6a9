#include <benchmark/benchmark.h>

#include "gammaflow/lattice_field.hpp"
#include "gammaflow/jacobian.hpp"
#include "gammaflow/vortex_maps.hpp"

using namespace gammaflow;

namespace {

LatticeField vortex_field(int nodes) {
  const BoxDomain box(Point(0.0, 0.0), Point(1.0, 1.0));
  const double h = 1.0 / (nodes - 1);
  return product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, box, h);
}

void PEnergy(benchmark::State& state) {
  const LatticeField f = vortex_field(int(state.range(0)));
  for (auto _ : state) {
    auto rep = p_energy(f, 1.5, false, /*with_density=*/false);
    benchmark::DoNotOptimize(rep.total);
  }
  state.SetItemsProcessed(state.iterations() * int64_t(f.cell_count()));
}

void PlaquetteVorticity(benchmark::State& state) {
  const LatticeField f = vortex_field(int(state.range(0)));
  for (auto _ : state) {
    auto v = plaquette_vorticity(f);
    benchmark::DoNotOptimize(v.atoms.size());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(f.cell_count()));
}

}  // namespace

BENCHMARK(PEnergy)->Arg(129)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK(PlaquetteVorticity)->Arg(257)->Arg(1025);
