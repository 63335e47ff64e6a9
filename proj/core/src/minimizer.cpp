#include "gammaflow/minimizer.hpp"

#include <algorithm>
#include <cmath>

#include "gammaflow/constants.hpp"
#include "gammaflow/flat_norm.hpp"
#include "gammaflow/jacobian.hpp"
#include "gammaflow/rng.hpp"

namespace gammaflow {

namespace {

constexpr double kGradFloor = 1e-12;  // smooths the p/2 power at zero gradient

struct LocalEnergy {
  const LatticeField* f;
  double p;
  bool variant;
  double hd;

  double cell(double t00, double t10, double t01) const {
    const double s1 = std::sin(0.5 * (t10 - t00));
    const double s2 = std::sin(0.5 * (t01 - t00));
    const double g2 = 4.0 * (s1 * s1 + s2 * s2) / (f->h * f->h);
    return (variant ? std::pow(1.0 + g2, 0.5 * p) : std::pow(g2 + kGradFloor, 0.5 * p)) * hd;
  }
};

}  // namespace

LatticeField datum_field(const BoundaryDatum& datum) {
  if (datum.grid_nodes < 32)
    throw std::invalid_argument("datum_field: grid must have at least 32 nodes per axis");
  BoxDomain box;
  if (datum.shape == BoundaryDatum::Shape::Disk) {
    Point lo(datum.center[0] - datum.radius, datum.center[1] - datum.radius);
    Point hi(datum.center[0] + datum.radius, datum.center[1] + datum.radius);
    box = BoxDomain(lo, hi);
  } else {
    box = datum.box;
  }
  LatticeField f(box, {datum.grid_nodes, datum.grid_nodes, 1}, Target::S1);

  if (datum.shape == BoundaryDatum::Shape::Disk) {
    f.mask.assign(f.node_count(), 0);
    for (int ix = 0; ix < f.dims[0]; ++ix)
      for (int iy = 0; iy < f.dims[1]; ++iy)
        if (dist(f.node_point(ix, iy), datum.center) <= datum.radius)
          f.mask[f.node_index(ix, iy)] = 1;
  }
  for (int ix = 0; ix < f.dims[0]; ++ix)
    for (int iy = 0; iy < f.dims[1]; ++iy) {
      const std::size_t i = f.node_index(ix, iy);
      if (!f.node_active(i)) continue;
      const Point x = f.node_point(ix, iy);
      f.values[i] = wrap_phase(datum.degree *
                               std::atan2(x[1] - datum.center[1], x[0] - datum.center[0]));
    }
  return f;
}

std::vector<std::size_t> free_nodes(const LatticeField& field) {
  std::vector<std::size_t> free;
  for (int ix = 0; ix < field.dims[0]; ++ix)
    for (int iy = 0; iy < field.dims[1]; ++iy) {
      const std::size_t i = field.node_index(ix, iy);
      if (!field.node_active(i)) continue;
      bool boundary = ix == 0 || iy == 0 || ix == field.dims[0] - 1 || iy == field.dims[1] - 1;
      if (!boundary && !field.mask.empty()) {
        const int nx[4] = {ix - 1, ix + 1, ix, ix};
        const int ny[4] = {iy, iy, iy - 1, iy + 1};
        for (int k = 0; k < 4 && !boundary; ++k)
          if (!field.mask[field.node_index(nx[k], ny[k])]) boundary = true;
      }
      if (!boundary) free.push_back(i);
    }
  return free;
}

int datum_boundary_winding(const BoundaryDatum& datum) {
  // Walk the boundary ring ordered by angle around the datum center and sum
  // the wrapped phase differences. (The plaquette sum is unusable here: a
  // degree >= 2 datum is under-resolved at its core by construction.)
  LatticeField f = datum_field(datum);
  struct RingNode {
    double angle;
    double phase;
  };
  std::vector<RingNode> ring;
  const std::vector<std::size_t> interior = free_nodes(f);
  std::vector<char> is_free(f.node_count(), 0);
  for (std::size_t i : interior) is_free[i] = 1;
  for (int ix = 0; ix < f.dims[0]; ++ix)
    for (int iy = 0; iy < f.dims[1]; ++iy) {
      const std::size_t i = f.node_index(ix, iy);
      if (!f.node_active(i) || is_free[i]) continue;
      const Point x = f.node_point(ix, iy);
      ring.push_back({std::atan2(x[1] - datum.center[1], x[0] - datum.center[0]), f.values[i]});
    }
  std::sort(ring.begin(), ring.end(),
            [](const RingNode& a, const RingNode& b) { return a.angle < b.angle; });
  double total = 0.0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const double d = wrap_phase(ring[(k + 1) % ring.size()].phase - ring[k].phase);
    if (std::abs(d) >= kPi - 1e-9)
      throw InvariantError("datum_boundary_winding: datum under-resolved on the ring");
    total += d;
  }
  return int(std::llround(total / (2.0 * kPi)));
}

namespace {

struct Engine {
  LatticeField f;
  std::vector<std::size_t> free;
  SolveOptions opts;
  LocalEnergy local;
  std::vector<int> fx, fy;  // lattice coordinates of free nodes

  explicit Engine(const LatticeField& init, const std::vector<std::size_t>& free_set,
                  const SolveOptions& o)
      : f(init), free(free_set), opts(o) {
    local = {&f, opts.p, opts.variant, f.h * f.h};
    fx.resize(free.size());
    fy.resize(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
      fx[k] = int(free[k] / (std::size_t(f.dims[1]) * f.dims[2]));
      fy[k] = int(free[k] % (std::size_t(f.dims[1]) * f.dims[2]) / f.dims[2]);
    }
  }

  double node_local_energy(int ix, int iy, double theta) const {
    double e = 0.0;
    // Cells with (ix,iy) as a corner; each cell reads its own lower corner.
    const int cxs[4] = {ix - 1, ix, ix - 1, ix};
    const int cys[4] = {iy - 1, iy - 1, iy, iy};
    for (int k = 0; k < 4; ++k) {
      const int cx = cxs[k], cy = cys[k];
      if (cx < 0 || cy < 0 || cx >= f.dims[0] - 1 || cy >= f.dims[1] - 1) continue;
      if (!f.cell_active(cx, cy)) continue;
      const std::size_t i00 = f.node_index(cx, cy);
      const std::size_t i10 = f.node_index(cx + 1, cy);
      const std::size_t i01 = f.node_index(cx, cy + 1);
      auto val = [&](std::size_t idx) {
        return idx == f.node_index(ix, iy) ? theta : f.values[idx];
      };
      e += local.cell(val(i00), val(i10), val(i01));
    }
    return e;
  }

  long long plaquette_winding_or_min(int cx, int cy, double theta_at, std::size_t node) const {
    // Winding with an overridden phase; returns a large sentinel on a pi-jump.
    auto val = [&](std::size_t idx) { return idx == node ? theta_at : f.values[idx]; };
    const std::size_t loop[4] = {f.node_index(cx, cy), f.node_index(cx + 1, cy),
                                 f.node_index(cx + 1, cy + 1), f.node_index(cx, cy + 1)};
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = wrap_phase(val(loop[(k + 1) % 4]) - val(loop[k]));
      if (std::abs(d) >= kPi - 1e-9) return 1 << 20;
      sum += d;
    }
    return std::llround(sum / (2.0 * kPi));
  }

  bool vorticity_safe(int ix, int iy, double theta_new) const {
    const std::size_t node = f.node_index(ix, iy);
    const int cxs[4] = {ix - 1, ix, ix - 1, ix};
    const int cys[4] = {iy - 1, iy - 1, iy, iy};
    for (int k = 0; k < 4; ++k) {
      const int cx = cxs[k], cy = cys[k];
      if (cx < 0 || cy < 0 || cx >= f.dims[0] - 1 || cy >= f.dims[1] - 1) continue;
      if (!f.cell_active(cx, cy)) continue;
      const long long before = plaquette_winding_or_min(cx, cy, f.values[node], node);
      const long long after = plaquette_winding_or_min(cx, cy, theta_new, node);
      if (before != after) return false;
    }
    return true;
  }

  /// Period-aware line search: coarse scan of the circle, then golden section
  /// inside the best bracket.
  double line_search(int ix, int iy, double theta0, double e0) const {
    constexpr int kCoarse = 12;
    double best_t = theta0, best_e = e0;
    for (int s = 0; s < kCoarse; ++s) {
      const double t = wrap_phase(theta0 + 2.0 * kPi * s / kCoarse);
      const double e = node_local_energy(ix, iy, t);
      if (e < best_e) {
        best_e = e;
        best_t = t;
      }
    }
    const double half = 2.0 * kPi / kCoarse;
    double a = best_t - half, b = best_t + half;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double ec = node_local_energy(ix, iy, wrap_phase(c));
    double ed = node_local_energy(ix, iy, wrap_phase(d));
    for (int it = 0; it < 40 && (b - a) > 1e-10; ++it) {
      if (ec < ed) {
        b = d;
        d = c;
        ed = ec;
        c = b - gr * (b - a);
        ec = node_local_energy(ix, iy, wrap_phase(c));
      } else {
        a = c;
        c = d;
        ec = ed;
        d = a + gr * (b - a);
        ed = node_local_energy(ix, iy, wrap_phase(d));
      }
    }
    const double mid = wrap_phase(0.5 * (a + b));
    const double em = node_local_energy(ix, iy, mid);
    if (em < best_e) return mid;
    return best_t;
  }

  double total_objective() const {
    const auto cd = f.cell_dims();
    std::vector<double> rows;
    rows.reserve(std::size_t(cd[0]));
    for (int cx = 0; cx < cd[0]; ++cx) {
      double row = 0.0;
      for (int cy = 0; cy < cd[1]; ++cy) {
        if (!f.cell_active(cx, cy)) continue;
        row += local.cell(f.values[f.node_index(cx, cy)], f.values[f.node_index(cx + 1, cy)],
                          f.values[f.node_index(cx, cy + 1)]);
      }
      rows.push_back(row);
    }
    return pairwise_sum(std::move(rows));
  }

  MinimizeResult run() {
    MinimizeResult res;
    double prev = total_objective();
    int sweep = 0;
    bool converged = false;
    std::vector<std::size_t> order(free.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

    for (sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
      CounterRng rng(opts.seed, std::uint64_t(sweep));
      for (std::size_t k = order.size(); k > 1; --k)
        std::swap(order[k - 1], order[rng.next_below(k)]);

      auto update_node = [&](std::size_t k) {
        const int ix = fx[k], iy = fy[k];
        const std::size_t node = free[k];
        const double t0 = f.values[node];
        const double e0 = node_local_energy(ix, iy, t0);
        const double t1 = line_search(ix, iy, t0, e0);
        if (t1 == t0) return;
        const double e1 = node_local_energy(ix, iy, t1);
        if (!(e1 < e0)) return;
        if (opts.preserve_vorticity && !vorticity_safe(ix, iy, t1)) return;
        f.values[node] = t1;
      };

      if (opts.scheme == SolveOptions::Scheme::RedBlack) {
        for (int color = 0; color < 2; ++color)
          for (std::size_t k : order)
            if (((fx[k] + fy[k]) & 1) == color) update_node(k);
      } else {
        for (std::size_t k : order) update_node(k);
      }

      const double cur = total_objective();
      if (cur > prev + 1e-9 * std::max(1.0, prev))
        throw InvariantError("minimize: objective increased across a sweep");
      const double rel = (prev - cur) / std::max(cur, 1e-300);
      prev = cur;
      if (rel < opts.tol) {
        converged = true;
        break;
      }
    }

    res.field = std::move(f);
    res.report = p_energy(res.field, opts.p, opts.variant, /*with_density=*/false);
    res.sweeps = std::min(sweep, opts.max_sweeps);
    res.converged = converged;
    res.objective = prev;
    return res;
  }
};

}  // namespace

MinimizeResult minimize_field(const LatticeField& init, const std::vector<std::size_t>& free,
                              const SolveOptions& opts) {
  if (!(opts.p > 1.0 && opts.p < 2.0)) throw std::invalid_argument("minimize: p must be in (1,2)");
  if (!(opts.tol > 0)) throw std::invalid_argument("minimize: tolerance must be positive");
  Engine eng(init, free, opts);
  return eng.run();
}

MinimizeResult minimize(const BoundaryDatum& datum, const SolveOptions& opts) {
  LatticeField init = datum_field(datum);
  return minimize_field(init, free_nodes(init), opts);
}

std::vector<double> energy_density_map(const LatticeField& field, double p) {
  EnergyReport rep = p_energy(field, p, /*variant=*/false, /*with_density=*/true);
  for (auto& d : rep.density) d *= (2.0 - p);
  return rep.density;
}

std::vector<VortexRecord> vortex_sweep(const BoundaryDatum& datum,
                                       const std::vector<double>& p_schedule,
                                       const SolveOptions& base_opts) {
  std::vector<VortexRecord> records;
  std::optional<LatticeField> warm;
  std::optional<ZeroCurrent> prev_jac;
  const Domain domain = datum.domain();

  for (double p : p_schedule) {
    SolveOptions opts = base_opts;
    opts.p = p;
    MinimizeResult mr;
    if (warm) {
      mr = minimize_field(*warm, free_nodes(*warm), opts);
    } else {
      mr = minimize(datum, opts);
    }
    warm = mr.field;

    VortexRecord rec;
    rec.p = p;
    rec.converged = mr.converged;
    EnergyReport rep = p_energy(mr.field, p, opts.variant, /*with_density=*/true);
    rec.energy = rep.total;
    rec.rescaled_energy = rep.rescaled;
    rec.vortices = plaquette_vorticity(mr.field);

    double near = 0.0;
    const auto cd = mr.field.cell_dims();
    for (int cx = 0; cx < cd[0]; ++cx)
      for (int cy = 0; cy < cd[1]; ++cy) {
        const double d = rep.density[mr.field.cell_index(cx, cy)];
        if (d == 0.0) continue;
        const Point cc = mr.field.cell_center(cx, cy);
        for (const auto& atom : rec.vortices.atoms)
          if (dist(cc, atom.p) <= 0.25) {
            near += d;
            break;
          }
      }
    rec.concentration_ratio = rep.total > 0 ? near / rep.total : 0.0;
    rec.flat_step = prev_jac ? flat_distance(rec.vortices, *prev_jac, domain) : 0.0;
    prev_jac = rec.vortices;
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace gammaflow
