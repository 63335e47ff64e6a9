#include <doctest.h>

#include <cmath>

#include "gammaflow/jacobian.hpp"
#include "gammaflow/minimizer.hpp"

using namespace gammaflow;

namespace {

BoundaryDatum disk_datum(int degree, int grid = 64) {
  BoundaryDatum d;
  d.shape = BoundaryDatum::Shape::Disk;
  d.degree = degree;
  d.grid_nodes = grid;
  d.center = Point(0.0, 0.0);
  d.radius = 1.0;
  return d;
}

}  // namespace

TEST_SUITE("minimizer") {
  TEST_CASE("datum boundary winding equals the degree") {
    CHECK(datum_boundary_winding(disk_datum(1)) == 1);
    CHECK(datum_boundary_winding(disk_datum(2)) == 2);
    CHECK(datum_boundary_winding(disk_datum(0)) == 0);
  }

  TEST_CASE("descent: energy never above the initialization") {
    BoundaryDatum datum = disk_datum(1);
    SolveOptions opts;
    opts.p = 1.5;
    opts.max_sweeps = 40;
    opts.seed = 5;
    const double init_energy = p_energy(datum_field(datum), 1.5, false, false).total;
    MinimizeResult res = minimize(datum, opts);
    CHECK(res.report.total <= init_energy + 1e-12);
  }

  TEST_CASE("degree conservation and centered vortex for d=1") {
    BoundaryDatum datum = disk_datum(1);
    SolveOptions opts;
    opts.p = 1.5;
    opts.max_sweeps = 120;
    opts.seed = 9;
    MinimizeResult res = minimize(datum, opts);
    ZeroCurrent v = plaquette_vorticity(res.field);
    long long total = 0;
    for (const auto& a : v.atoms) total += a.m;
    CHECK(total == 1);
    // The (single) vortex stays within 3h of the disk center.
    REQUIRE(v.atoms.size() >= 1);
    double closest = 1e300;
    for (const auto& a : v.atoms) closest = std::min(closest, dist(a.p, datum.center));
    CHECK(closest <= 3 * res.field.h);
  }

  TEST_CASE("budget exhaustion is flagged, not silently accepted") {
    BoundaryDatum datum = disk_datum(2, 96);
    SolveOptions opts;
    opts.p = 1.5;
    opts.max_sweeps = 1;
    opts.tol = 1e-14;
    MinimizeResult res = minimize(datum, opts);
    CHECK_FALSE(res.converged);
  }

  TEST_CASE("red-black scheme is deterministic and also descends") {
    BoundaryDatum datum = disk_datum(1, 48);
    SolveOptions opts;
    opts.p = 1.5;
    opts.scheme = SolveOptions::Scheme::RedBlack;
    opts.max_sweeps = 30;
    opts.seed = 4;
    MinimizeResult a = minimize(datum, opts);
    MinimizeResult b = minimize(datum, opts);
    CHECK(a.report.total == b.report.total);
    CHECK(a.field.values == b.field.values);
  }

  TEST_CASE("density map sums to the rescaled energy and ignores rotation") {
    BoundaryDatum datum = disk_datum(1, 48);
    LatticeField f = datum_field(datum);
    auto density = energy_density_map(f, 1.5);
    const EnergyReport rep = p_energy(f, 1.5, false, false);
    CHECK(pairwise_sum(density) == doctest::Approx(rep.rescaled).epsilon(1e-12));
    // The density peaks at the cells adjacent to the vortex.
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < density.size(); ++i)
      if (density[i] > density[argmax]) argmax = i;
    const auto cd = f.cell_dims();
    const Point peak = f.cell_center(int(argmax / cd[1]), int(argmax % cd[1]));
    CHECK(dist(peak, datum.center) <= 2 * f.h);
  }

  TEST_CASE("vortex sweep records conserve total vorticity across p") {
    BoundaryDatum datum = disk_datum(1, 48);
    SolveOptions opts;
    opts.max_sweeps = 60;
    opts.seed = 2;
    auto records = vortex_sweep(datum, {1.7, 1.5}, opts);
    REQUIRE(records.size() == 2);
    for (const auto& rec : records) {
      long long total = 0;
      for (const auto& a : rec.vortices.atoms) total += a.m;
      CHECK(total == 1);
      CHECK(rec.concentration_ratio > 0.0);
      CHECK(rec.concentration_ratio <= 1.0);
    }
    // Warm start keeps the Jacobian put: consecutive flat step stays small.
    CHECK(records[1].flat_step <= 6 * 2.0 / 47);
  }
}
