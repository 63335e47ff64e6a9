#include <doctest.h>

#include <cmath>
#include <limits>

#include "gammaflow/constants.hpp"
#include "gammaflow/decomposition.hpp"
#include "gammaflow/flat_norm.hpp"
#include "gammaflow/rng.hpp"
#include "gammaflow/vortex_maps.hpp"

using namespace gammaflow;

namespace {

const Domain kBox(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0)));

ZeroCurrent random_units(CounterRng& rng, int count) {
  ZeroCurrent t(2);
  for (int i = 0; i < count; ++i)
    t.add(Point(rng.uniform(0.05, 9.95), rng.uniform(0.05, 9.95)), rng.next_below(2) ? 1 : -1);
  return merged(t);
}

}  // namespace

TEST_SUITE("decomposition") {
  TEST_CASE("admissibility threshold near n-p = 4.7e-3 at alpha 0.95") {
    CHECK_FALSE(check_admissible(2, 2.0 - 5e-3, 0.95).ok);
    CHECK(check_admissible(2, 2.0 - 4.5e-3, 0.95).ok);
    auto rep = check_admissible(2, 1.999, 0.95);
    CHECK(rep.lhs <= rep.rhs);
  }

  TEST_CASE("alpha_1 underflow guard") {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    CHECK_THROWS_AS(decompose(t, kBox, DecompParams{2, 2.0 - 1e-9, 0.95}),
                    std::invalid_argument);
  }

  TEST_CASE("non-finite coordinates are rejected") {
    ZeroCurrent t(2);
    t.add(Point(std::numeric_limits<double>::quiet_NaN(), 5.0), 1);
    CHECK_THROWS_AS(decompose(t, kBox, DecompParams{2, 1.9, 0.9}), std::invalid_argument);
  }

  TEST_CASE("exactness X + dS = T on random instances (stress parameters)") {
    CounterRng rng(101);
    const DecompParams params{2, 1.9, 0.9};
    const double alpha1 = params.alpha1();
    for (int trial = 0; trial < 60; ++trial) {
      ZeroCurrent t = random_units(rng, 1 + int(rng.next_below(30)));
      auto res = decompose(t, kBox, params);
      ZeroCurrent rebuilt = res.X + boundary_one(res.S, kBox);
      CHECK((rebuilt - t).atoms.empty());
      // Guard: leftover pairs are farther than alpha_1; segments at most alpha_1.
      auto pm = pair_min(res.X, kBox);
      if (pm) CHECK(pm->distance > alpha1);
      for (const auto& seg : res.S.segments)
        CHECK(dist(seg.a, seg.b) <= alpha1 + 1e-12);
      // Termination: one pairing per trace row, mass drops accordingly.
      CHECK(res.trace.size() <= std::size_t(mass_zero(t, kBox)));
      // Witness property: S fills T - X within its own mass.
      CHECK(flat_distance(t, res.X, kBox) <= mass_one(res.S) + 1e-9);
    }
  }

  TEST_CASE("scale ledger classifies pair distances into (alpha_{k+1}, alpha_k]") {
    CounterRng rng(55);
    const DecompParams params{2, 1.9, 0.9};
    for (int trial = 0; trial < 30; ++trial) {
      ZeroCurrent t = random_units(rng, 24);
      auto res = decompose(t, kBox, params);
      long long paired_pos = 0, paired_neg = 0;
      for (const auto& tr : res.trace) {
        CHECK(tr.distance <= params.alpha_k(tr.scale_k) + 1e-15);
        CHECK(tr.distance > params.alpha_k(tr.scale_k + 1));
        if (!tr.y_is_boundary) ++paired_pos;
        if (!tr.z_is_boundary) ++paired_neg;
      }
      // Ledger bookkeeping: every positive unit is either in X or paired.
      long long pos_mass = 0;
      for (const auto& a : t.atoms)
        if (a.m > 0) pos_mass += a.m;
      long long ek_sum = 0;
      for (const auto& [k, e] : res.ledger.e) ek_sum += e;
      CHECK(ek_sum == paired_pos);
      CHECK(res.ledger.e0 + ek_sum == pos_mass);
    }
  }

  TEST_CASE("multiplicity expansion lets one location pair repeatedly") {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 2);
    t.add(Point(5.1, 5.0), -1);
    t.add(Point(4.9, 5.0), -1);
    auto res = decompose(t, kBox, DecompParams{2, 1.9, 0.9});
    CHECK(res.X.empty());
    CHECK(res.S.segments.size() == 2);
  }

  TEST_CASE("deterministic tie-breaking reproduces the pair multiset") {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    t.add(Point(5.1, 5.0), -1);
    t.add(Point(5.2, 5.0), 1);  // two candidate pairs at distance 0.1
    t.add(Point(5.3, 5.0), -1);
    auto r1 = decompose(t, kBox, DecompParams{2, 1.9, 0.9});
    ZeroCurrent shuffled(2);
    for (auto it = t.atoms.rbegin(); it != t.atoms.rend(); ++it)
      shuffled.atoms.push_back(*it);
    auto r2 = decompose(shuffled, kBox, DecompParams{2, 1.9, 0.9});
    REQUIRE(r1.trace.size() == r2.trace.size());
    for (std::size_t i = 0; i < r1.trace.size(); ++i)
      CHECK(r1.trace[i].distance == r2.trace[i].distance);
  }

  TEST_CASE("verify_bounds holds with the analytic oracle at admissible parameters") {
    CounterRng rng(77);
    const DecompParams params{2, 2.0 - 2e-3, 0.95};
    REQUIRE(check_admissible(params.n, params.p, params.alpha).ok);
    for (int trial = 0; trial < 20; ++trial) {
      ZeroCurrent t = random_units(rng, 1 + int(rng.next_below(50)));
      std::vector<VortexCenter> centers;
      for (const auto& a : t.atoms) centers.push_back({a.p, int(a.m)});
      const double energy = analytic_vortex_energy(centers, kBox.box, params.p);
      auto res = decompose(t, kBox, params);
      auto rep = verify_bounds(res, mass_zero(t, kBox), energy, params);
      CHECK(rep.mass_ok);
      CHECK(rep.flat_ok);
      CHECK(rep.sharp_ok);
    }
  }

  TEST_CASE("verify_bounds refuses inadmissible parameters") {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    const DecompParams stress{2, 1.9, 0.9};
    auto res = decompose(t, kBox, stress);
    CHECK_THROWS_AS(verify_bounds(res, 1.0, 1.0, stress), std::invalid_argument);
  }

  TEST_CASE("constant C(2, 0.95) is about 601") {
    const DecompParams params{2, 2.0 - 1e-3, 0.95};
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    auto res = decompose(t, kBox, params);
    auto rep = verify_bounds(res, 1.0, 2.0 * kPi, params);
    CHECK(rep.constant_C == doctest::Approx(601.0).epsilon(0.01));
  }

  TEST_CASE("boundary energy lemma: radial equality within tolerance") {
    const double h = 1.0 / 256;
    const BoxDomain box(Point(-1.25, -1.25), Point(1.25, 1.25));
    for (int d : {1, 2}) {
      LatticeField f = product_vortex({{Point(h / 2, h / 2), d}}, box, h);
      for (double radius : {0.5, 1.0}) {
        auto [lhs, rhs] = boundary_energy_lower_bound(f, Point(h / 2, h / 2), radius, 1.5);
        const double analytic = 2.0 * kPi * std::pow(double(d), 1.5) * std::pow(radius, -0.5);
        CHECK(lhs / rhs > 0.99);
        CHECK(lhs / rhs < 1.03);
        CHECK(lhs == doctest::Approx(analytic).epsilon(0.02));
      }
    }
  }

  TEST_CASE("boundary energy lemma: strict inequality off-center") {
    const double h = 1.0 / 256;
    const BoxDomain box(Point(-1.25, -1.25), Point(1.25, 1.25));
    LatticeField f = product_vortex({{Point(0.2 + h / 2, h / 2), 1}}, box, h);
    auto [lhs, rhs] = boundary_energy_lower_bound(f, Point(h / 2, h / 2), 0.7, 1.5);
    CHECK(lhs > rhs);
  }

  TEST_CASE("sequence inequality on random instances") {
    CounterRng rng(13);
    for (int trial = 0; trial < 20000; ++trial) {
      std::vector<long long> a(1 + rng.next_below(9));
      for (auto& v : a) v = (long long)rng.next_below(21);
      const double beta = rng.uniform(1.0 + 1e-9, 2.0 - 1e-9);
      const double lambda = rng.uniform(0.75 + 1e-9, 1.0 - 1e-9);
      auto [lhs, rhs] = lemma_ai_check(a, beta, lambda);
      CHECK(lhs >= rhs - 1e-12);
    }
  }

  TEST_CASE("sequence inequality rejects out-of-range parameters") {
    CHECK_THROWS_AS(lemma_ai_check({1, 2}, 2.5, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(lemma_ai_check({1, 2}, 1.5, 0.5), std::invalid_argument);
  }
}
