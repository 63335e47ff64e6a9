#include <cmath>
#include <functional>

#include "gammaflow/constants.hpp"
#include "gammaflow/decomposition.hpp"
#include "gammaflow/flat_norm.hpp"
#include "gammaflow/grid.hpp"
#include "gammaflow/harness.hpp"
#include "gammaflow/jacobian.hpp"
#include "gammaflow/minimizer.hpp"
#include "gammaflow/mollify.hpp"
#include "gammaflow/recovery.hpp"
#include "gammaflow/vortex_maps.hpp"

namespace gammaflow {

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Domain box10() { return Domain(BoxDomain(Point(0.0, 0.0), Point(10.0, 10.0))); }

}  // namespace

std::vector<std::pair<std::string, bool>> run_selftest_table() {
  std::vector<std::pair<std::string, bool>> out;
  auto check = [&](const char* name, const std::function<bool()>& body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception&) {
      ok = false;
    }
    out.emplace_back(name, ok);
  };

  // constants
  check("constants.omega1", [] { return near(Constants(2).omega, 2 * kPi, 1e-12); });
  check("constants.omega2", [] { return near(Constants(3).omega, 4 * kPi, 1e-12); });
  check("constants.gamma2", [] { return near(Constants(2).gamma_n, kPi, 1e-12); });

  // currents
  check("currents.mass_zero_single", [] {
    ZeroCurrent t(2);
    t.add(Point(1.0, 1.0), 1);
    return mass_zero(t, box10()) == 1.0;
  });
  check("currents.mass_zero_sum", [] {
    ZeroCurrent t(2);
    t.add(Point(1.0, 1.0), 2);
    t.add(Point(2.0, 2.0), -1);
    return mass_zero(t, box10()) == 3.0;
  });
  check("currents.mass_zero_outside", [] {
    ZeroCurrent t(2);
    t.add(Point(11.0, 0.0), 1);
    return mass_zero(t, box10()) == 0.0;
  });
  check("currents.mass_one_length", [] {
    OneCurrent s(2);
    s.add(Point(0.0, 0.0), Point(3.0, 4.0), 1);
    return near(mass_one(s), 5.0, 1e-15);
  });
  check("currents.mass_one_empty", [] { return mass_one(OneCurrent(2)) == 0.0; });
  check("currents.mass_one_multiplicity", [] {
    OneCurrent s(2);
    s.add(Point(0.0, 0.0), Point(1.0, 0.0), 2);
    return near(mass_one(s), 2.0, 1e-15);
  });
  check("currents.boundary_dipole", [] {
    OneCurrent s(2);
    s.add(Point(2.0, 2.0), Point(5.0, 6.0), 1);
    ZeroCurrent b = boundary_one(s, box10());
    return b.atoms.size() == 2 && mass_zero(b, box10()) == 2.0;
  });
  check("currents.boundary_on_wall", [] {
    OneCurrent s(2);
    s.add(Point(0.0, 5.0), Point(4.0, 5.0), 1);
    ZeroCurrent b = boundary_one(s, box10());
    return b.atoms.size() == 1 && b.atoms[0].m == 1 && b.atoms[0].p == Point(4.0, 5.0);
  });
  check("currents.boundary_cancel", [] {
    OneCurrent s(2);
    s.add(Point(1.0, 1.0), Point(2.0, 2.0), 1);
    s.add(Point(2.0, 2.0), Point(3.0, 1.0), 1);
    ZeroCurrent b = boundary_one(s, box10());
    return b.atoms.size() == 2;  // middle point cancels
  });

  // flat norm / pair_min
  check("flatnorm.single_atom", [] {
    ZeroCurrent t(2);
    t.add(Point(1.0, 5.0), 1);
    return near(flat_norm_zero(t, box10()).value, 1.0, 1e-12);
  });
  check("flatnorm.zero_current", [] {
    return flat_norm_zero(ZeroCurrent(2), box10()).value == 0.0;
  });
  check("flatnorm.dipole_direct", [] {
    ZeroCurrent t(2);
    t.add(Point(2.0, 2.0), 1);
    t.add(Point(5.0, 6.0), -1);
    return near(flat_norm_zero(t, box10()).value, 5.0, 1e-12);
  });
  check("flatnorm.pair_min_dipole", [] {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    t.add(Point(5.0, 6.0), -1);
    auto pm = pair_min(t, box10());
    return pm && near(pm->distance, 1.0, 1e-15) && !pm->y_is_boundary && !pm->z_is_boundary;
  });
  check("flatnorm.pair_min_boundary", [] {
    ZeroCurrent t(2);
    t.add(Point(0.3, 5.0), 1);
    auto pm = pair_min(t, box10());
    return pm && near(pm->distance, 0.3, 1e-15) && pm->z_is_boundary &&
           pm->z == Point(0.0, 5.0);
  });
  check("flatnorm.pair_min_same_sign", [] {
    ZeroCurrent t(2);
    t.add(Point(3.0, 3.0), 1);
    t.add(Point(7.0, 7.0), 1);
    auto pm = pair_min(t, box10());
    return pm && near(pm->distance, 3.0, 1e-15) && pm->z_is_boundary;
  });

  // lattice fields
  check("lattice.constant_energy", [] {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(1.0, 1.0)), {33, 33, 1}, Target::S1);
    for (auto& v : f.values) v = 0.7;
    return p_energy(f, 1.5, false).total == 0.0;
  });
  check("lattice.variant_volume", [] {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(1.0, 1.0)), {33, 33, 1}, Target::S1);
    for (auto& v : f.values) v = 0.7;
    return near(p_energy(f, 1.5, true).total, 1.0, 1e-12);
  });
  check("lattice.mollify_constant", [] {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(1.0, 1.0)), {65, 65, 1}, Target::S1);
    for (auto& v : f.values) v = 0.3;
    LatticeField g = mollify(f, 4.0 / 64.0);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (!near(g.values[2 * i], std::cos(0.3), 1e-12)) return false;
      if (!near(g.values[2 * i + 1], std::sin(0.3), 1e-12)) return false;
    }
    return true;
  });
  check("lattice.project_center_origin", [] {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(1.0, 1.0)), {5, 5, 1}, Target::R2);
    for (std::size_t i = 0; i < f.node_count(); ++i) {
      f.values[2 * i] = 0.3;
      f.values[2 * i + 1] = 0.4;
    }
    LatticeField g = project_center(f, Point(0.0, 0.0));
    return near(g.values[0], std::atan2(0.4, 0.3), 1e-12);
  });
  check("lattice.project_fixed_point", [] {
    const Point a(0.05, -0.03);
    const Point x(std::cos(1.1), std::sin(1.1));
    const double t = radial_projection_scale(a, x);
    const Point d = x - a;
    const Point y = a + (t / d.norm()) * d;
    return near(dist(y, x), 0.0, 1e-12);
  });
  check("lattice.select_center_constant", [] {
    LatticeField f(BoxDomain(Point(0.0, 0.0), Point(1.0, 1.0)), {9, 9, 1}, Target::R2);
    for (std::size_t i = 0; i < f.node_count(); ++i) {
      f.values[2 * i] = 1.0;
      f.values[2 * i + 1] = 0.0;
    }
    return select_projection_center(f, 0.1, 8, 1).preimage_count == 0;
  });

  // vortex maps
  const BoxDomain unit_box(Point(0.0, 0.0), Point(1.0, 1.0));
  auto rect_ring = [](int lo, int hi, int iz) {
    std::vector<std::array<int, 3>> loop;
    for (int i = lo; i < hi; ++i) loop.push_back({i, lo, iz});
    for (int j = lo; j < hi; ++j) loop.push_back({hi, j, iz});
    for (int i = hi; i > lo; --i) loop.push_back({i, hi, iz});
    for (int j = hi; j > lo; --j) loop.push_back({lo, j, iz});
    return loop;
  };
  check("vortex.single_winding", [&] {
    const double h = 1.0 / 32;
    LatticeField f = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, unit_box, h);
    return degree_loop(f, rect_ring(4, 28, 0)) == 1;
  });
  check("vortex.pair_cancel", [&] {
    const double h = 1.0 / 32;
    LatticeField f = product_vortex(
        {{Point(0.4 + h / 2, 0.5 + h / 2), 1}, {Point(0.6 + h / 2, 0.5 + h / 2), -1}}, unit_box,
        h);
    return degree_loop(f, rect_ring(2, 30, 0)) == 0;
  });
  const BoxDomain cube(Point(0.0, 0.0, 0.0), Point(1.0, 1.0, 1.0));
  check("vortex.axis_ring", [&] {
    const double h = 1.0 / 16;
    LatticeField f = axis_vortex_3d(Point(0.5 + h / 2, 0.5 + h / 2, 0.0), 2, cube, h);
    return degree_loop(f, rect_ring(3, 13, 8)) == 1;
  });
  check("vortex.axis_translation", [&] {
    const double h = 1.0 / 16;
    LatticeField f = axis_vortex_3d(Point(0.5 + h / 2, 0.5 + h / 2, 0.0), 2, cube, h);
    for (int iz = 1; iz < f.dims[2]; ++iz)
      if (f.phase(f.node_index(3, 4, iz)) != f.phase(f.node_index(3, 4, 0))) return false;
    return true;
  });
  check("vortex.solid_angle_far", [] {
    OneCurrent loop(3);
    loop.add(Point(0.0, 0.0, 0.0), Point(0.2, 0.0, 0.0), 1);
    loop.add(Point(0.2, 0.0, 0.0), Point(0.2, 0.2, 0.0), 1);
    loop.add(Point(0.2, 0.2, 0.0), Point(0.0, 0.2, 0.0), 1);
    loop.add(Point(0.0, 0.2, 0.0), Point(0.0, 0.0, 0.0), 1);
    const Point apex = curve_centroid(loop);
    return std::abs(cone_solid_angle(loop, apex, Point(30.0, 31.0, 29.0))) < 1e-3;
  });
  check("vortex.solid_angle_antipodal", [] {
    OneCurrent loop(3);
    loop.add(Point(0.0, 0.0, 0.0), Point(1.0, 0.0, 0.0), 1);
    loop.add(Point(1.0, 0.0, 0.0), Point(1.0, 1.0, 0.0), 1);
    loop.add(Point(1.0, 1.0, 0.0), Point(0.0, 1.0, 0.0), 1);
    loop.add(Point(0.0, 1.0, 0.0), Point(0.0, 0.0, 0.0), 1);
    const Point apex = curve_centroid(loop);
    const double up = cone_solid_angle(loop, apex, Point(0.3, 0.4, 0.7));
    const double down = cone_solid_angle(loop, apex, Point(0.3, 0.4, -0.7));
    const double sum = std::fmod(std::abs(up + down), 4.0 * kPi);
    return sum < 1e-9 || std::abs(sum - 4.0 * kPi) < 1e-9;
  });

  // jacobian
  check("jacobian.single_atom", [&] {
    const double h = 1.0 / 32;
    const Point c(0.5 + h / 2, 0.5 + h / 2);
    LatticeField f = product_vortex({{c, 1}}, unit_box, h);
    ZeroCurrent v = plaquette_vorticity(f);
    return v.atoms.size() == 1 && v.atoms[0].m == 1 && near(dist(v.atoms[0].p, c), 0.0, 1e-12);
  });
  check("jacobian.constant_empty", [&] {
    LatticeField f(unit_box, {17, 17, 1}, Target::S1);
    for (auto& v : f.values) v = 1.2;
    return plaquette_vorticity(f).empty();
  });
  check("jacobian.degree_pair", [&] {
    const double h = 1.0 / 32;
    LatticeField f = product_vortex(
        {{Point(0.4 + h / 2, 0.5 + h / 2), 1}, {Point(0.6 + h / 2, 0.5 + h / 2), -1}}, unit_box,
        h);
    ZeroCurrent v = plaquette_vorticity(f);
    long long total = 0;
    for (const auto& a : v.atoms) total += a.m;
    return v.atoms.size() == 2 && total == 0;
  });
  check("jacobian.jform_constant", [&] {
    LatticeField f(unit_box, {17, 17, 1}, Target::S1);
    for (auto& v : f.values) v = -0.4;
    return jform_max_ratio(f) == 0.0;
  });
  check("jacobian.continuity_identical_error", [&] {
    const double h = 1.0 / 32;
    LatticeField f = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, unit_box, h);
    try {
      continuity_ratio(f, f, 1.5, 3.0);
    } catch (const std::invalid_argument&) {
      return true;
    }
    return false;
  });

  // decomposition
  check("decomposition.admissible_examples", [] {
    return !check_admissible(2, 1.7, 0.95).ok && !check_admissible(2, 1.9, 0.8).ok &&
           !check_admissible(2, 1.99, 0.95).ok && check_admissible(2, 1.999, 0.95).ok;
  });
  check("decomposition.far_atom", [] {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    DecompParams prm{2, 1.9, 0.9};
    auto res = decompose(t, box10(), prm);
    return res.S.empty() && res.X.atoms.size() == 1 && res.ledger.e0 == 1;
  });
  check("decomposition.dipole_pair", [] {
    ZeroCurrent t(2);
    t.add(Point(5.0, 5.0), 1);
    t.add(Point(5.2, 5.0), -1);
    DecompParams prm{2, 1.9, 0.9};
    auto res = decompose(t, box10(), prm);
    return res.X.empty() && res.S.segments.size() == 1 && near(mass_one(res.S), 0.2, 1e-12);
  });
  check("decomposition.boundary_atom", [] {
    ZeroCurrent t(2);
    t.add(Point(0.1, 5.0), 1);
    DecompParams prm{2, 1.9, 0.9};
    auto res = decompose(t, box10(), prm);
    ZeroCurrent b = boundary_one(res.S, box10());
    return res.X.empty() && b.atoms.size() == 1 && b.atoms[0].m == 1 &&
           b.atoms[0].p == Point(0.1, 5.0);
  });
  check("decomposition.lemma_base", [] {
    auto [lhs, rhs] = lemma_ai_check({5}, 1.5, 0.9);
    return near(lhs, 5.0, 1e-12) && near(rhs, (2 * 0.9 - 1) / (2 * 0.9) * 5.0, 1e-12);
  });
  check("decomposition.lemma_zeros", [] {
    auto [lhs, rhs] = lemma_ai_check({0, 0, 0}, 1.5, 0.9);
    return lhs == 0.0 && rhs == 0.0;
  });
  check("decomposition.lemma_example", [] {
    auto [lhs, rhs] = lemma_ai_check({1, 1}, 1.5, 0.9);
    return near(lhs, 1.8, 1e-12) && near(rhs, 0.84444444444444444, 1e-10);
  });

  // grid
  check("grid.center_distance", [] {
    GridSpec g(1.0, Point(0.0, 0.0, 0.0));
    return near(skeleton_distance(Point(0.5, 0.5, 0.5), g, 2), 0.5, 1e-15);
  });
  check("grid.vertex_distance", [] {
    GridSpec g(1.0, Point(0.0, 0.0, 0.0));
    return skeleton_distance(Point(2.0, 3.0, 1.0), g, 0) == 0.0;
  });
  check("grid.vertical_crossings", [] {
    OneCurrent c(3);
    c.add(Point(0.2, 0.2, 0.2), Point(0.2, 0.2, 2.7), 1);
    GridSpec g(1.0, Point(0.0, 0.0, 0.0));
    auto counts = intersection_numbers(c, g);
    if (counts.size() != 2) return false;
    for (const auto& [key, m] : counts)
      if (key.axis != 2 || m != 1) return false;
    return true;
  });
  check("grid.orientation_flip", [] {
    OneCurrent c(3);
    c.add(Point(0.2, 0.2, 2.7), Point(0.2, 0.2, 0.2), 1);
    GridSpec g(1.0, Point(0.0, 0.0, 0.0));
    for (const auto& [key, m] : intersection_numbers(c, g))
      if (m != -1) return false;
    return true;
  });
  check("grid.dual_involution", [] {
    GridSpec g(0.7, Point(0.1, 0.2, 0.3));
    GridCell q{0b011u, {2, -1, 4}};  // a 2-cell
    GridCell qd = dual_cell(q, g);
    GridCell qdd = dual_cell(qd, g.dual());
    return q.dimension() + qd.dimension() == 3 &&
           near(dist(q.center(g), qd.center(g.dual())), 0.0, 1e-12) &&
           near(dist(q.center(g), qdd.center(GridSpec(g.ell, g.dual().dual().shift))), 0.0,
                1e-12);
  });

  // recovery
  check("recovery.flat_vortex_2d", [] {
    return near(flat_vortex_energy(2, 0, 1.5, 1.0, 1.0), 4 * kPi, 1e-12);
  });
  check("recovery.flat_vortex_3d", [] {
    return near(flat_vortex_energy(3, 0, 2.5, 1.0, 1.0), std::pow(2.0, 1.25) * 4 * kPi / 0.5,
                1e-9);
  });
  check("recovery.flat_vortex_delta_limit", [] {
    return flat_vortex_energy(2, 0, 1.5, 1e-9, 1.0) < 1e-3 &&
           flat_vortex_energy(2, 0, 1.5, 1e-13, 1.0) < 1e-5;
  });

  // minimizer
  check("minimizer.zero_datum", [] {
    BoundaryDatum datum;
    datum.shape = BoundaryDatum::Shape::Disk;
    datum.degree = 0;
    datum.grid_nodes = 32;
    SolveOptions opts;
    opts.p = 1.5;
    opts.max_sweeps = 5;
    MinimizeResult res = minimize(datum, opts);
    return res.report.total < 1e-12;
  });
  check("minimizer.density_rotation", [&] {
    const double h = 1.0 / 32;
    LatticeField f = product_vortex({{Point(0.5 + h / 2, 0.5 + h / 2), 1}}, unit_box, h);
    auto d1 = energy_density_map(f, 1.5);
    for (auto& v : f.values) v = wrap_phase(v + 1.0);
    auto d2 = energy_density_map(f, 1.5);
    for (std::size_t i = 0; i < d1.size(); ++i)
      if (!near(d1[i], d2[i], 1e-12)) return false;
    return true;
  });

  // harness
  check("harness.fixture_roundtrip", [] {
    json fx = json::parse(fixtures().at("dipole.json"));
    ZeroCurrent t = zero_current_from_json(fx);
    json back = current_to_json(t);
    back["domain"] = fx.at("domain");
    return zero_current_from_json(back).atoms.size() == t.atoms.size() &&
           back.at("atoms") == fx.at("atoms");
  });

  return out;
}

}  // namespace gammaflow
