#include <doctest.h>

#include <cmath>

#include "gammaflow/flat_norm.hpp"
#include "gammaflow/rng.hpp"
#include "support/matching_oracle.hpp"

using namespace gammaflow;

namespace {

const Domain kBox(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0)));

ZeroCurrent random_units(CounterRng& rng, int count, double margin = 0.3) {
  ZeroCurrent t(2);
  for (int i = 0; i < count; ++i)
    t.add(Point(rng.uniform(margin, 10.0 - margin), rng.uniform(margin, 10.0 - margin)),
          rng.next_below(2) ? 1 : -1);
  return t;
}

}  // namespace

TEST_SUITE("flat_norm") {
  TEST_CASE("direct segment beats the boundary route") {
    ZeroCurrent t(2);
    t.add(Point(2.0, 2.0), 1);
    t.add(Point(5.0, 6.0), -1);
    auto r = flat_norm_zero(t, kBox);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.witness.segments.size() == 1);
  }

  TEST_CASE("boundary route wins for separated same-sign atoms") {
    ZeroCurrent t(2);
    t.add(Point(1.0, 5.0), 1);
    t.add(Point(9.0, 5.0), 1);
    auto r = flat_norm_zero(t, kBox);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("witness boundary reproduces the input and mass equals value") {
    CounterRng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      ZeroCurrent t = merged(random_units(rng, 1 + int(rng.next_below(8))));
      auto r = flat_norm_zero(t, kBox);
      CHECK(mass_one(r.witness) == doctest::Approx(r.value).epsilon(1e-12));
      ZeroCurrent back = boundary_one(r.witness, kBox);
      CHECK((back - t).atoms.empty());
    }
  }

  TEST_CASE("matches exhaustive enumeration for up to 6 atoms") {
    CounterRng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      ZeroCurrent t = random_units(rng, 1 + int(rng.next_below(6)));
      const double exact = testing::flat_norm_by_enumeration(t, kBox);
      const double got = flat_norm_zero(t, kBox).value;
      CHECK(got == doctest::Approx(exact).epsilon(1e-9));
    }
  }

  TEST_CASE("bounded by mass times diameter and by explicit fillings") {
    CounterRng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      ZeroCurrent t = random_units(rng, 6);
      auto r = flat_norm_zero(t, kBox);
      CHECK(r.value <= mass_zero(t, kBox) * kBox.diameter() + 1e-9);
      // Explicit filling: route everything to the boundary.
      double all_boundary = 0;
      for (const auto& a : t.atoms)
        all_boundary += std::abs(double(a.m)) * kBox.boundary_distance(a.p);
      CHECK(r.value <= all_boundary + 1e-9);
    }
  }

  TEST_CASE("subadditive on random pairs") {
    CounterRng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      ZeroCurrent t1 = random_units(rng, 4);
      ZeroCurrent t2 = random_units(rng, 4);
      const double lhs = flat_norm_zero(t1 + t2, kBox).value;
      const double rhs = flat_norm_zero(t1, kBox).value + flat_norm_zero(t2, kBox).value;
      CHECK(lhs <= rhs + 1e-9);
    }
  }

  TEST_CASE("flat_distance is a metric on random triples") {
    CounterRng rng(37);
    for (int trial = 0; trial < 25; ++trial) {
      ZeroCurrent a = random_units(rng, 3);
      ZeroCurrent b = random_units(rng, 3);
      ZeroCurrent c = random_units(rng, 3);
      CHECK(flat_distance(a, a, kBox) == doctest::Approx(0.0));
      const double ab = flat_distance(a, b, kBox);
      const double bc = flat_distance(b, c, kBox);
      const double ac = flat_distance(a, c, kBox);
      CHECK(ac <= ab + bc + 1e-9);
    }
  }

  TEST_CASE("multiplicities expand to unit matches") {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 2);
    t.add(Point(5.0, 6.0), -1);
    t.add(Point(6.0, 5.0), -1);
    auto r = flat_norm_zero(t, kBox);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("size cap is enforced") {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), kFlatNormSizeCap + 1);
    CHECK_THROWS_AS(flat_norm_zero(t, kBox), std::invalid_argument);
  }

  TEST_CASE("pair_min never matches same-sign pairs") {
    ZeroCurrent t(2);
    t.add(Point(4.9, 5.0), 1);
    t.add(Point(5.1, 5.0), 1);  // 0.2 apart but same sign
    auto pm = pair_min(t, kBox);
    REQUIRE(pm.has_value());
    CHECK(pm->distance == doctest::Approx(4.9));  // boundary distance, not 0.2
  }

  TEST_CASE("pair_min empty for the zero current") {
    CHECK_FALSE(pair_min(ZeroCurrent(2), kBox).has_value());
  }

  TEST_CASE("disk domains use radial feet") {
    const Domain disk(DiskDomain(Point(0.0, 0.0), 2.0));
    ZeroCurrent t(2);
    t.add(Point(1.5, 0.0), 1);
    auto r = flat_norm_zero(t, disk);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(boundary_one(r.witness, disk).atoms.size() == 1);
  }
}
