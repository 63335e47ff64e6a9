#include <doctest.h>

#include <cmath>

#include "gammaflow/constants.hpp"
#include "gammaflow/flat_norm.hpp"
#include "gammaflow/jacobian.hpp"
#include "gammaflow/rng.hpp"
#include "gammaflow/vortex_maps.hpp"

using namespace gammaflow;

namespace {

const BoxDomain kUnit(Point(0.0, 0.0), Point(1.0, 1.0));

std::vector<std::array<int, 3>> rect_loop(int lo, int hi) {
  std::vector<std::array<int, 3>> loop;
  for (int i = lo; i < hi; ++i) loop.push_back({i, lo, 0});
  for (int j = lo; j < hi; ++j) loop.push_back({hi, j, 0});
  for (int i = hi; i > lo; --i) loop.push_back({i, hi, 0});
  for (int j = hi; j > lo; --j) loop.push_back({lo, j, 0});
  return loop;
}

}  // namespace

TEST_SUITE("jacobian") {
  TEST_CASE("vorticity recovers multi-vortex configurations exactly") {
    // Centers at plaquette centers (node + h/2) so atoms match bit-exactly.
    const double h = 1.0 / 64;
    const std::vector<VortexCenter> centers = {{Point(16.5 * h, 16.5 * h), 1},
                                               {Point(48.5 * h, 20.5 * h), -1},
                                               {Point(28.5 * h, 45.5 * h), 1}};
    LatticeField f = product_vortex(centers, kUnit, h);
    ZeroCurrent v = plaquette_vorticity(f);
    REQUIRE(v.atoms.size() == 3);
    for (const auto& c : centers) {
      bool found = false;
      for (const auto& a : v.atoms)
        if (dist(a.p, c.position) < 1e-12 && a.m == c.degree) found = true;
      CHECK(found);
    }
  }

  TEST_CASE("total vorticity equals the boundary degree") {
    const double h = 1.0 / 64;
    LatticeField f = product_vortex(
        {{Point(0.3 + h / 2, 0.4 + h / 2), 1}, {Point(0.6 + h / 2, 0.6 + h / 2), 1}}, kUnit, h);
    ZeroCurrent v = plaquette_vorticity(f);
    long long total = 0;
    for (const auto& a : v.atoms) total += a.m;
    CHECK(total == degree_loop(f, rect_loop(1, 63)));
  }

  TEST_CASE("degree-3 loop winding") {
    const double h = 1.0 / 64;
    LatticeField f = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 3}}, kUnit, h);
    CHECK(degree_loop(f, rect_loop(8, 56)) == 3);
  }

  TEST_CASE("gauge invariance and orientation reversal") {
    const double h = 1.0 / 64;
    LatticeField f = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, kUnit, h);
    LatticeField g = f;
    for (auto& v : g.values) v = wrap_phase(v + 1.234);
    ZeroCurrent vf = plaquette_vorticity(f);
    ZeroCurrent vg = plaquette_vorticity(g);
    REQUIRE(vf.atoms.size() == vg.atoms.size());
    CHECK(vf.atoms[0].m == vg.atoms[0].m);

    LatticeField r = f;
    for (auto& v : r.values) v = wrap_phase(-v);
    ZeroCurrent vr = plaquette_vorticity(r);
    REQUIRE(vr.atoms.size() == 1);
    CHECK(vr.atoms[0].m == -vf.atoms[0].m);
  }

  TEST_CASE("under-resolved fields are refused") {
    LatticeField f(kUnit, {9, 9, 1}, Target::S1);
    // Neighbor jumps of exactly pi.
    for (int ix = 0; ix < 9; ++ix)
      for (int iy = 0; iy < 9; ++iy) f.values[f.node_index(ix, iy)] = (ix % 2) ? kPi : 0.0;
    CHECK_THROWS_AS(plaquette_vorticity(f), InvariantError);
  }

  TEST_CASE("3-D closedness at interior dual vertices") {
    const double h = 1.0 / 16;
    const BoxDomain cube(Point(0.0, 0.0, 0.0), Point(1.0, 1.0, 1.0));
    LatticeField f = axis_vortex_3d(Point(0.5 + h / 2, 0.5 + h / 2, 0.0), 2, cube, h);
    OneCurrent chain = face_vorticity_3d(f);
    const Domain interior(BoxDomain(Point(h, h, h), Point(1.0 - h, 1.0 - h, 1.0 - h)));
    CHECK(boundary_one(chain, interior).atoms.empty());
  }

  TEST_CASE("jform ratio: equality for radial vortices, bounded for smooth fields") {
    const double h = 1.0 / 128;
    const BoxDomain box(Point(-0.5, -0.5), Point(0.5, 0.5));
    LatticeField vortex = product_vortex({{Point(h / 2, h / 2), 1}}, box, h);
    const double r = jform_max_ratio(vortex);
    CHECK(r <= 1.0 + 1e-12);
    CHECK(r > 0.99);

    LatticeField smooth(box, {65, 65, 1}, Target::S1);
    CounterRng rng(5);
    for (int ix = 0; ix < 65; ++ix)
      for (int iy = 0; iy < 65; ++iy) {
        const Point x = smooth.node_point(ix, iy);
        smooth.values[smooth.node_index(ix, iy)] =
            0.8 * std::sin(2 * kPi * x[0]) + 0.5 * std::cos(2 * kPi * x[1]);
      }
    CHECK(jform_max_ratio(smooth) <= 1.05);
  }

  TEST_CASE("continuity ratio: shifted vortices give the exact flat distance") {
    const double h = 1.0 / 128;
    const BoxDomain box(Point(0.0, 0.0), Point(1.0, 1.0));
    const double shift = 16 * h;
    LatticeField u = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, box, h);
    LatticeField v = product_vortex({{Point(0.5 + shift + h / 2, 0.5 + h / 2), 1}}, box, h);
    ZeroCurrent ju = plaquette_vorticity(u);
    ZeroCurrent jv = plaquette_vorticity(v);
    CHECK(flat_distance(ju, jv, Domain(box)) == doctest::Approx(shift).epsilon(1e-9));
    const double ratio = continuity_ratio(u, v, 1.5, 3.0);
    CHECK(ratio > 0.0);
    CHECK(std::isfinite(ratio));
  }

  TEST_CASE("continuity ratio stays in a band across perturbation amplitudes") {
    const double h = 1.0 / 64;
    const BoxDomain box(Point(0.0, 0.0), Point(1.0, 1.0));
    LatticeField u = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, box, h);
    double lo = 1e300, hi = 0.0;
    for (double shift : {4 * h, 8 * h, 16 * h}) {
      LatticeField v = product_vortex({{Point(0.5 + shift + h / 2, 0.5 + h / 2), 1}}, box, h);
      const double r = continuity_ratio(u, v, 1.5, 3.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 4.0);
  }
}
