#include <doctest.h>

#include "gammaflow/currents.hpp"
#include "gammaflow/rng.hpp"

using namespace gammaflow;

namespace {
const Domain kBox(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0)));
}

TEST_SUITE("currents") {
  TEST_CASE("mass counts only strict interior atoms") {
    ZeroCurrent t(2);
    t.add(Point(1.0, 1.0), 1);
    t.add(Point(11.0, 0.0), 1);
    t.add(Point(0.0, 5.0), 3);  // on the wall: outside by the open convention
    CHECK(mass_zero(t, kBox) == 1.0);
    CHECK(mass_zero(t) == 5.0);
  }

  TEST_CASE("merging preserves mass and cancels opposite atoms") {
    ZeroCurrent t(2);
    t.add(Point(2.0, 2.0), 2);
    t.add(Point(2.0, 2.0), -1);
    t.add(Point(3.0, 3.0), 1);
    t.add(Point(3.0, 3.0), -1);
    ZeroCurrent m = merged(t);
    CHECK(m.atoms.size() == 1);
    CHECK(m.atoms[0].m == 1);
    CHECK(mass_zero(m, kBox) == 1.0);
  }

  TEST_CASE("mass is invariant under permutation and merging") {
    CounterRng rng(11);
    ZeroCurrent t(2);
    for (int i = 0; i < 40; ++i)
      t.add(Point(rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5)),
            1 + (long long)rng.next_below(3));
    ZeroCurrent shuffled = t;
    for (std::size_t k = shuffled.atoms.size(); k > 1; --k)
      std::swap(shuffled.atoms[k - 1], shuffled.atoms[rng.next_below(k)]);
    CHECK(mass_zero(t, kBox) == mass_zero(shuffled, kBox));
    CHECK(mass_zero(merged(t), kBox) == mass_zero(t, kBox));
  }

  TEST_CASE("boundary of a segment chain telescopes") {
    OneCurrent s(2);
    s.add(Point(1.0, 1.0), Point(2.0, 1.5), 1);
    s.add(Point(2.0, 1.5), Point(3.0, 1.0), 1);
    ZeroCurrent b = boundary_one(s, kBox);
    REQUIRE(b.atoms.size() == 2);
    CHECK(b.atoms[0].p == Point(1.0, 1.0));
    CHECK(b.atoms[0].m == -1);
    CHECK(b.atoms[1].p == Point(3.0, 1.0));
    CHECK(b.atoms[1].m == 1);
  }

  TEST_CASE("segment endpoints on the boundary contribute nothing") {
    OneCurrent s(2);
    s.add(Point(0.0, 5.0), Point(4.0, 5.0), 2);
    ZeroCurrent b = boundary_one(s, kBox);
    REQUIRE(b.atoms.size() == 1);
    CHECK(b.atoms[0].m == 2);
  }

  TEST_CASE("degenerate segments are rejected") {
    OneCurrent s(2);
    CHECK_THROWS_AS(s.add(Point(1.0, 1.0), Point(1.0, 1.0), 1), std::invalid_argument);
  }

  TEST_CASE("mass_one sums multiplicity-weighted lengths") {
    OneCurrent s(2);
    s.add(Point(0.0, 0.0), Point(3.0, 4.0), -2);
    s.add(Point(1.0, 1.0), Point(1.0, 2.0), 1);
    CHECK(mass_one(s) == doctest::Approx(11.0).epsilon(1e-15));
  }

  TEST_CASE("current arithmetic merges bit-exact coordinates") {
    ZeroCurrent a(2), b(2);
    a.add(Point(1.0, 1.0), 2);
    b.add(Point(1.0, 1.0), 2);
    CHECK((a - b).atoms.empty());
    CHECK((a + b).atoms.size() == 1);
    CHECK((a + b).atoms[0].m == 4);
  }
}
