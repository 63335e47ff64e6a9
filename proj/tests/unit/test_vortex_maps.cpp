#include <doctest.h>

#include <cmath>

#include "gammaflow/constants.hpp"
#include "gammaflow/jacobian.hpp"
#include "gammaflow/vortex_maps.hpp"

using namespace gammaflow;

namespace {

// Winding of the analytic (continuum) map along a densely sampled circle; an
// oracle independent of the lattice plaquette path.
int sampled_winding(const std::function<double(const Point&)>& phase, const Point& center,
                    double radius, int n = 4096) {
  double total = 0.0, prev = 0.0, first = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    Point x = center;
    x[0] += radius * std::cos(t);
    x[1] += radius * std::sin(t);
    const double ang = phase(x);
    if (k == 0)
      first = ang;
    else
      total += wrap_phase(ang - prev);
    prev = ang;
  }
  total += wrap_phase(first - prev);
  return int(std::lround(total / (2 * kPi)));
}

}  // namespace

TEST_SUITE("vortex_maps") {
  TEST_CASE("product map winds by the summed degrees") {
    auto phase2 = [](const Point& x) {
      return std::atan2(x[1] - 0.21, x[0] - 0.33) - 2.0 * std::atan2(x[1] + 0.4, x[0] + 0.1);
    };
    CHECK(sampled_winding(phase2, Point(0.0, 0.0), 0.9) == -1);
    CHECK(sampled_winding(phase2, Point(0.33, 0.21), 0.05) == 1);
  }

  TEST_CASE("builders reject centers on lattice nodes") {
    const BoxDomain box(Point(0.0, 0.0), Point(1.0, 1.0));
    CHECK_THROWS_AS(product_vortex({{Point(0.5, 0.5), 1}}, box, 1.0 / 32),
                    std::invalid_argument);
  }

  TEST_CASE("axis vortex links transverse rings and not longitudinal ones") {
    const double h = 1.0 / 16;
    const BoxDomain cube(Point(0.0, 0.0, 0.0), Point(1.0, 1.0, 1.0));
    LatticeField f = axis_vortex_3d(Point(0.5 + h / 2, 0.5 + h / 2, 0.0), 2, cube, h);
    OneCurrent chain = face_vorticity_3d(f);
    // One winding face per z-plane of nodes, including both boundary planes.
    CHECK(chain.segments.size() == std::size_t(f.dims[2]));
    for (const auto& s : chain.segments) {
      CHECK(s.m == 1);
      CHECK(s.a[0] == doctest::Approx(s.b[0]));
      CHECK(s.a[1] == doctest::Approx(s.b[1]));
    }
  }

  TEST_CASE("solid angle of a triangle matches the analytic octant") {
    // The positive octant corner at the origin subtends 4pi/8.
    const double omega = triangle_solid_angle(Point(1.0, 0.0, 0.0), Point(0.0, 1.0, 0.0),
                                              Point(0.0, 0.0, 1.0));
    CHECK(std::abs(omega) == doctest::Approx(0.5 * kPi).epsilon(1e-12));
  }

  TEST_CASE("solid-angle map winds once around a linking ring") {
    OneCurrent loop(3);
    loop.add(Point(0.1, 0.1, 0.55), Point(0.9, 0.1, 0.55), 1);
    loop.add(Point(0.9, 0.1, 0.55), Point(0.9, 0.9, 0.55), 1);
    loop.add(Point(0.9, 0.9, 0.55), Point(0.1, 0.9, 0.55), 1);
    loop.add(Point(0.1, 0.9, 0.55), Point(0.1, 0.1, 0.55), 1);
    const Point apex = curve_centroid(loop);
    // Ring in the xz-plane around the segment y in [0.1, 0.9] at x=0.9, z=0.55:
    // parametrize a small circle in (x, z) centered on the edge midpoint.
    double total = 0.0, prev = 0.0, first = 0.0;
    const int n = 2048;
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * kPi * k / n;
      const Point x(0.9 + 0.05 * std::cos(t), 0.5, 0.55 + 0.05 * std::sin(t));
      const double ang = 0.5 * cone_solid_angle(loop, apex, x);
      if (k == 0)
        first = ang;
      else
        total += wrap_phase(ang - prev);
      prev = ang;
    }
    total += wrap_phase(first - prev);
    CHECK(std::abs(std::lround(total / (2 * kPi)))== 1);
  }

  TEST_CASE("solid-angle lattice field winds on a linking plaquette ring") {
    OneCurrent loop(3);
    const double z = 0.50077;
    loop.add(Point(0.2003, 0.20051, z), Point(1.2003, 0.20051, z), 1);
    loop.add(Point(1.2003, 0.20051, z), Point(1.2003, 1.20051, z), 1);
    loop.add(Point(1.2003, 1.20051, z), Point(0.2003, 1.20051, z), 1);
    loop.add(Point(0.2003, 1.20051, z), Point(0.2003, 0.20051, z), 1);
    const double h = 1.0 / 24;
    const BoxDomain box(Point(-0.5, -0.5, -0.5), Point(2.0, 2.0, 2.0));
    LatticeField f = solid_angle_vortex(loop, box, h);
    OneCurrent chain = face_vorticity_3d(f);
    CHECK_FALSE(chain.empty());
    // Chain sits within a lattice step of the loop.
    for (const auto& s : chain.segments) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& ls : loop.segments)
        d = std::min({d, point_segment_distance(s.a, ls.a, ls.b),
                      point_segment_distance(s.b, ls.a, ls.b)});
      CHECK(d <= h * std::sqrt(3.0) + 1e-12);
    }
    // Mass close to the loop perimeter.
    CHECK(mass_one(chain) == doctest::Approx(4.0).epsilon(2 * h * 4.0));
    // Boundary-free away from the walls.
    const Domain inner(BoxDomain(Point(-0.4, -0.4, -0.4), Point(1.9, 1.9, 1.9)));
    CHECK(boundary_one(chain, inner).atoms.empty());
  }

  TEST_CASE("reversing the curve reverses the extracted chain") {
    OneCurrent loop(3), rev(3);
    const double z = 0.517;
    loop.add(Point(0.21, 0.22, z), Point(0.81, 0.22, z), 1);
    loop.add(Point(0.81, 0.22, z), Point(0.81, 0.82, z), 1);
    loop.add(Point(0.81, 0.82, z), Point(0.21, 0.82, z), 1);
    loop.add(Point(0.21, 0.82, z), Point(0.21, 0.22, z), 1);
    for (const auto& s : loop.segments) rev.add(s.b, s.a, 1);
    const double h = 1.0 / 16;
    const BoxDomain box(Point(-0.5, -0.5, -0.5), Point(1.5, 1.5, 1.5));
    LatticeField f1 = solid_angle_vortex(loop, box, h);
    LatticeField f2 = solid_angle_vortex(rev, box, h);
    OneCurrent c1 = face_vorticity_3d(f1);
    OneCurrent c2 = face_vorticity_3d(f2);
    REQUIRE(c1.segments.size() == c2.segments.size());
    // Same support, opposite multiplicities.
    for (std::size_t i = 0; i < c1.segments.size(); ++i) {
      CHECK(c1.segments[i].a == c2.segments[i].a);
      CHECK(c1.segments[i].m == -c2.segments[i].m);
    }
    // Energy unchanged by orientation reversal (theta -> -theta symmetry).
    CHECK(p_energy(f1, 1.4, false).total ==
          doctest::Approx(p_energy(f2, 1.4, false).total).epsilon(1e-9));
  }

  TEST_CASE("axis vortex tube energy matches the flat-vortex formula") {
    // Energy over B^2_delta x A with the 4h core excluded, against
    // 2 pi H^1(A) (delta^{2-p} - (4h)^{2-p})/(2-p).
    const double h = 1.0 / 64;
    const BoxDomain cube(Point(0.0, 0.0, 0.0), Point(1.0, 1.0, 1.0));
    const Point axis_pt(0.5 + h / 2, 0.5 + h / 2, 0.0);
    LatticeField f = axis_vortex_3d(axis_pt, 2, cube, h);
    const double delta = 0.25, z0 = 0.25, z1 = 0.75, p = 1.4;
    auto parts = p_energy_partition(f, p, false, 1, [&](const Point& cc) {
      const double r = std::hypot(cc[0] - axis_pt[0], cc[1] - axis_pt[1]);
      return (r > 4 * h && r <= delta && cc[2] >= z0 && cc[2] <= z1) ? 0 : -1;
    });
    const double analytic = 2 * kPi * (z1 - z0) *
                            (std::pow(delta, 2 - p) - std::pow(4 * h, 2 - p)) / (2 - p);
    CHECK(parts[0] == doctest::Approx(analytic).epsilon(0.02));
    // Independence of the along-axis coordinate: the two halves of A match.
    auto halves = p_energy_partition(f, p, false, 2, [&](const Point& cc) {
      const double r = std::hypot(cc[0] - axis_pt[0], cc[1] - axis_pt[1]);
      if (!(r > 4 * h && r <= delta && cc[2] >= z0 && cc[2] <= z1)) return -1;
      return cc[2] < 0.5 ? 0 : 1;
    });
    CHECK(halves[0] == doctest::Approx(halves[1]).epsilon(1e-9));
  }

  TEST_CASE("open curves are rejected") {
    OneCurrent open_curve(3);
    open_curve.add(Point(0.1, 0.1, 0.1), Point(0.9, 0.1, 0.1), 1);
    const BoxDomain box(Point(0.0, 0.0, 0.0), Point(1.0, 1.0, 1.0));
    CHECK_THROWS_AS(solid_angle_vortex(open_curve, box, 1.0 / 8), std::invalid_argument);
  }
}
