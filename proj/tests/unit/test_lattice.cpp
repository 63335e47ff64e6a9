#include <doctest.h>

#include <cmath>

#include "gammaflow/constants.hpp"
#include "gammaflow/lattice_field.hpp"
#include "gammaflow/vortex_maps.hpp"

using namespace gammaflow;

namespace {

// Truncated radial vortex energy: int_{r0 < |x| < r1} (d/|x|)^p dx.
double annulus_energy(double degree, double p, double r0, double r1) {
  return 2.0 * kPi * std::pow(degree, p) * (std::pow(r1, 2.0 - p) - std::pow(r0, 2.0 - p)) /
         (2.0 - p);
}

LatticeField centered_vortex(double h, int degree, double half_span) {
  const BoxDomain box(Point(-half_span, -half_span), Point(half_span, half_span));
  return product_vortex({{Point(h / 2, h / 2), degree}}, box, h);
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("constant fields carry zero energy; variant integrates the volume") {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(2.0, 1.0)), {65, 33, 1}, Target::S1);
    for (auto& v : f.values) v = 0.3;
    CHECK(p_energy(f, 1.3, false).total == 0.0);
    CHECK(p_energy(f, 1.3, true).total == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("report invariants: density sums to total, rescaled factor") {
    const double h = 1.0 / 64;
    LatticeField f = centered_vortex(h, 1, 1.0);
    EnergyReport rep = p_energy(f, 1.5, false);
    CHECK(rep.rescaled == doctest::Approx((2.0 - 1.5) * rep.total).epsilon(1e-15));
    CHECK(pairwise_sum(rep.density) == doctest::Approx(rep.total).epsilon(1e-12));
  }

  TEST_CASE("variant energy dominates the plain energy per cell") {
    const double h = 1.0 / 32;
    LatticeField f = centered_vortex(h, 1, 0.5);
    EnergyReport plain = p_energy(f, 1.5, false);
    EnergyReport variant = p_energy(f, 1.5, true);
    for (std::size_t i = 0; i < plain.density.size(); ++i)
      CHECK(variant.density[i] >= plain.density[i]);
  }

  TEST_CASE("unit vortex annulus energy matches the analytic radial integral") {
    const double h = 1.0 / 128;
    LatticeField f = centered_vortex(h, 1, 1.0 + 8 * h);
    const Point center(h / 2, h / 2);
    for (double p : {1.5, 1.9}) {
      auto parts = p_energy_partition(f, p, false, 1, [&](const Point& cc) {
        const double r = dist(cc, center);
        return (r > 4 * h && r < 1.0) ? 0 : -1;
      });
      const double analytic = annulus_energy(1.0, p, 4 * h, 1.0);
      CHECK(parts[0] == doctest::Approx(analytic).epsilon(0.01));
    }
  }

  TEST_CASE("lattice gradient of a degree-d vortex tracks |d|/r") {
    const double h = 1.0 / 128;
    for (int d : {1, 3}) {
      LatticeField f = centered_vortex(h, d, 0.5);
      // Probe cells at radius ~r along the +x axis.
      const double r = 40 * h;
      const int cx = int((r - f.box.lo[0]) / h);
      const int cy = int((0.0 - f.box.lo[1]) / h);
      const Point cc = f.cell_center(cx, cy);
      const double expected = std::abs(d) / dist(cc, Point(h / 2, h / 2));
      CHECK(std::sqrt(f.cell_grad2(cx, cy)) == doctest::Approx(expected).epsilon(0.02));
    }
  }

  TEST_CASE("energy is invariant under global phase rotation") {
    const double h = 1.0 / 64;
    LatticeField f = centered_vortex(h, 1, 0.5);
    const double before = p_energy(f, 1.4, false).total;
    for (auto& v : f.values) v = wrap_phase(v + 2.1);
    CHECK(p_energy(f, 1.4, false).total == doctest::Approx(before).epsilon(1e-12));
  }

  TEST_CASE("energy is invariant under whole-step domain translation") {
    const double h = 1.0 / 32;
    const BoxDomain box1(Point(0.0, 0.0), Point(1.0, 1.0));
    const BoxDomain box2(Point(3 * h, 5 * h), Point(1.0 + 3 * h, 1.0 + 5 * h));
    LatticeField f1 = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, box1, h);
    LatticeField f2 =
        product_vortex({{Point(0.5 + 3 * h + h / 2, 0.5 + 5 * h + h / 2), 1}}, box2, h);
    CHECK(p_energy(f1, 1.5, false).total ==
          doctest::Approx(p_energy(f2, 1.5, false).total).epsilon(1e-12));
  }

  TEST_CASE("p outside (1,2) is rejected") {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(1.0, 1.0)), {9, 9, 1}, Target::S1);
    CHECK_THROWS_AS(p_energy(f, 2.0, false), std::invalid_argument);
    CHECK_THROWS_AS(p_energy(f, 0.9, false), std::invalid_argument);
  }

  TEST_CASE("field files round-trip bit-exactly") {
    const double h = 1.0 / 32;
    LatticeField f = centered_vortex(h, 1, 0.5);
    const std::string path = "test_field_roundtrip.sphf";
    write_field(f, path, R"({"note":"test"})");
    LatticeField g = read_field(path);
    REQUIRE(g.dims == f.dims);
    CHECK(g.h == f.h);
    CHECK(g.box.lo == f.box.lo);
    CHECK(g.values == f.values);
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
  }

  TEST_CASE("pairwise_sum matches plain summation") {
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i) * 1e-3);
    double plain = 0;
    for (double x : xs) plain += x;
    CHECK(pairwise_sum(xs) == doctest::Approx(plain).epsilon(1e-12));
  }
}
