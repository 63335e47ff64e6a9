#include "gammaflow/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "gammaflow/rng.hpp"

namespace gammaflow {

int GridCell::dimension() const { return std::popcount(span_mask); }

Point GridCell::center(const GridSpec& g) const {
  Point p = g.shift;
  for (int a = 0; a < g.dim; ++a)
    p[a] += g.ell * (double(corner[a]) + ((span_mask >> a) & 1u ? 0.5 : 0.0));
  return p;
}

GridCell dual_cell(const GridCell& c, const GridSpec& g) {
  GridCell d;
  d.span_mask = ~c.span_mask & ((1u << g.dim) - 1u);
  for (int a = 0; a < g.dim; ++a)
    d.corner[a] = ((c.span_mask >> a) & 1u) ? c.corner[a] : c.corner[a] - 1;
  return d;
}

double skeleton_distance(const Point& x, const GridSpec& g, int h) {
  const int d = g.dim;
  if (h >= d) return 0.0;
  std::array<double, 3> t{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    double y = std::fmod(x[a] - g.shift[a], g.ell);
    if (y < 0) y += g.ell;
    t[a] = std::min(y, g.ell - y);
  }
  std::sort(t.begin(), t.begin() + d);
  double s = 0;
  for (int a = 0; a < d - h; ++a) s += t[a] * t[a];
  return std::sqrt(s);
}

namespace {

struct Crossing {
  double t;
  int axis;
  int dir;  // +1 along +axis
  Point point;
};

std::vector<Crossing> segment_crossings(const Point& p, const Point& q, const GridSpec& g,
                                        double tangential_margin) {
  std::vector<Crossing> out;
  const Point d = q - p;
  const double len = d.norm();
  for (int a = 0; a < g.dim; ++a) {
    if (std::abs(d[a]) < 1e-12 * len) {
      // Segment parallel to the planes of this axis: error only if it lies on one.
      double y = std::fmod(p[a] - g.shift[a], g.ell);
      if (y < 0) y += g.ell;
      if (std::min(y, g.ell - y) < tangential_margin)
        throw std::invalid_argument("grid crossing: segment lies in a grid plane (tangential)");
      continue;
    }
    const double c0 = (std::min(p[a], q[a]) - g.shift[a]) / g.ell;
    const double c1 = (std::max(p[a], q[a]) - g.shift[a]) / g.ell;
    for (long long i = (long long)std::ceil(c0); i <= (long long)std::floor(c1); ++i) {
      const double plane = g.shift[a] + g.ell * double(i);
      const double t = (plane - p[a]) / d[a];
      if (t <= 0.0 || t >= 1.0) continue;
      Crossing cr;
      cr.t = t;
      cr.axis = a;
      cr.dir = d[a] > 0 ? +1 : -1;
      cr.point = p + t * d;
      cr.point[a] = plane;  // exact plane coordinate
      out.push_back(cr);
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
  return out;
}

FaceKey face_of_crossing(const Crossing& cr, const GridSpec& g, double tangential_margin) {
  FaceKey key;
  key.axis = cr.axis;
  key.index[cr.axis] = (long long)std::llround((cr.point[cr.axis] - g.shift[cr.axis]) / g.ell);
  for (int b = 0; b < g.dim; ++b) {
    if (b == cr.axis) continue;
    const double f = (cr.point[b] - g.shift[b]) / g.ell;
    const double fl = std::floor(f);
    const double frac = f - fl;
    if (std::min(frac, 1.0 - frac) * g.ell < tangential_margin)
      throw std::invalid_argument("grid crossing: crossing point grazes a cell edge");
    key.index[b] = (long long)fl;
  }
  return key;
}

long long cube_index_of(double x, double shift, double ell) {
  return (long long)std::floor((x - shift) / ell);
}

}  // namespace

std::map<FaceKey, long long> intersection_numbers(const OneCurrent& curve, const GridSpec& grid) {
  if (grid.dim != 3 || curve.dim != 3)
    throw std::invalid_argument("intersection_numbers: 3-D only");
  const double margin = 1e-9 * grid.ell;
  std::map<FaceKey, long long> counts;
  for (const auto& seg : curve.segments) {
    const Point a = seg.m >= 0 ? seg.a : seg.b;
    const Point b = seg.m >= 0 ? seg.b : seg.a;
    const long long mult = std::llabs(seg.m);
    for (const auto& cr : segment_crossings(a, b, grid, margin))
      counts[face_of_crossing(cr, grid, margin)] += mult * cr.dir;
  }
  for (auto it = counts.begin(); it != counts.end();)
    it = it->second == 0 ? counts.erase(it) : std::next(it);
  return counts;
}

OneCurrent deform_to_dual(const OneCurrent& curve, const GridSpec& grid, const BoxDomain& v) {
  if (grid.dim != 3 || curve.dim != 3)
    throw std::invalid_argument("deform_to_dual: 3-D only");
  if (!boundary_one(curve).empty())
    throw std::invalid_argument("deform_to_dual: curve is not closed");
  (void)v;  // the output chain is intrinsic; V scopes the boundary-free claim
  const double margin = 1e-9 * grid.ell;

  // Vertices must sit strictly inside cubes so cube tracking is exact.
  for (const auto& seg : curve.segments)
    for (const Point* e : {&seg.a, &seg.b})
      for (int a = 0; a < 3; ++a) {
        double y = std::fmod((*e)[a] - grid.shift[a], grid.ell);
        if (y < 0) y += grid.ell;
        if (std::min(y, grid.ell - y) < margin)
          throw std::invalid_argument("deform_to_dual: curve vertex on a grid plane; re-shift grid");
      }

  // Projection centers (cube centers and face centers) must stay clear.
  for (const auto& seg : curve.segments) {
    Point lo = seg.a, hi = seg.b;
    for (int a = 0; a < 3; ++a) {
      if (lo[a] > hi[a]) std::swap(lo[a], hi[a]);
      lo[a] -= grid.ell;
      hi[a] += grid.ell;
    }
    long long r0[3], r1[3];
    for (int a = 0; a < 3; ++a) {
      r0[a] = cube_index_of(lo[a], grid.shift[a], grid.ell);
      r1[a] = cube_index_of(hi[a], grid.shift[a], grid.ell);
    }
    for (long long i = r0[0]; i <= r1[0]; ++i)
      for (long long j = r0[1]; j <= r1[1]; ++j)
        for (long long k = r0[2]; k <= r1[2]; ++k) {
          const Point cc = grid.cube_center(i, j, k);
          if (point_segment_distance(cc, seg.a, seg.b) < margin)
            throw std::invalid_argument("deform_to_dual: curve through a cube center; re-shift grid");
          for (int a = 0; a < 3; ++a) {
            Point fc = cc;
            fc[a] += 0.5 * grid.ell;
            if (point_segment_distance(fc, seg.a, seg.b) < margin)
              throw std::invalid_argument(
                  "deform_to_dual: curve through a face center; re-shift grid");
          }
        }
  }

  std::map<FaceKey, long long> counts;
  for (const auto& seg : curve.segments) {
    const Point a = seg.m >= 0 ? seg.a : seg.b;
    const Point b = seg.m >= 0 ? seg.b : seg.a;
    const long long mult = std::llabs(seg.m);

    long long cube[3];
    for (int ax = 0; ax < 3; ++ax) cube[ax] = cube_index_of(a[ax], grid.shift[ax], grid.ell);

    for (const auto& cr : segment_crossings(a, b, grid, margin)) {
      const FaceKey key = face_of_crossing(cr, grid, margin);
      // Incremental cube tracking must agree with the face's transverse index.
      for (int bx = 0; bx < 3; ++bx)
        if (bx != cr.axis && key.index[bx] != cube[bx])
          throw InvariantError("deform_to_dual: cube tracking drifted off the crossing face");
      const long long leave_plane = cr.dir > 0 ? key.index[cr.axis] - 1 : key.index[cr.axis];
      if (cube[cr.axis] != leave_plane)
        throw InvariantError("deform_to_dual: cube tracking inconsistent along the crossing axis");
      counts[key] += mult * cr.dir;
      cube[cr.axis] += cr.dir;
    }
  }

  OneCurrent out(3);
  for (const auto& [key, m] : counts) {
    if (m == 0) continue;
    long long below[3] = {key.index[0], key.index[1], key.index[2]};
    below[key.axis] -= 1;
    const Point c_minus = grid.cube_center(below[0], below[1], below[2]);
    const Point c_plus = grid.cube_center(key.index[0], key.index[1], key.index[2]);
    out.add(c_minus, c_plus, m);
  }
  return merged(out);
}

double curve_skeleton_distance(const OneCurrent& curve, const GridSpec& grid) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : curve.segments) {
    for (int axis = 0; axis < 3; ++axis) {
      // Lattice lines run along `axis`; transverse coordinates are the others.
      const int b = (axis + 1) % 3, c = (axis + 2) % 3;
      const double lob = std::min(seg.a[b], seg.b[b]) - grid.ell;
      const double hib = std::max(seg.a[b], seg.b[b]) + grid.ell;
      const double loc = std::min(seg.a[c], seg.b[c]) - grid.ell;
      const double hic = std::max(seg.a[c], seg.b[c]) + grid.ell;
      for (long long i = (long long)std::ceil((lob - grid.shift[b]) / grid.ell);
           i <= (long long)std::floor((hib - grid.shift[b]) / grid.ell); ++i)
        for (long long j = (long long)std::ceil((loc - grid.shift[c]) / grid.ell);
             j <= (long long)std::floor((hic - grid.shift[c]) / grid.ell); ++j) {
          // Distance in the transverse plane from the projected segment.
          Point q(0, 0), pa(0, 0), pb(0, 0);
          q[0] = grid.shift[b] + grid.ell * double(i);
          q[1] = grid.shift[c] + grid.ell * double(j);
          pa[0] = seg.a[b];
          pa[1] = seg.a[c];
          pb[0] = seg.b[b];
          pb[1] = seg.b[c];
          best = std::min(best, point_segment_distance(q, pa, pb));
        }
    }
  }
  return best;
}

double curve_inverse_distance_integral(const OneCurrent& curve, const GridSpec& grid) {
  double total = 0.0;
  for (const auto& seg : curve.segments) {
    const double len = dist(seg.a, seg.b);
    const int nq = std::max(16, int(std::ceil(len / (grid.ell / 64.0))));
    const Point d = seg.b - seg.a;
    for (int i = 0; i < nq; ++i) {
      const Point x = seg.a + ((i + 0.5) / nq) * d;
      total += (len / nq) / skeleton_distance(x, grid, 1);
    }
  }
  return total;
}

ShiftCriteria calibrate_shift_criteria(const OneCurrent& curve, double ell, double delta,
                                       std::uint64_t seed) {
  if (!(delta > 0)) throw std::invalid_argument("calibrate_shift_criteria: delta must be positive");
  CounterRng rng(seed, /*stream=*/11);
  double mean = 0.0;
  const int pilots = 64;
  for (int s = 0; s < pilots; ++s) {
    Point a(0, 0, 0);
    for (int i = 0; i < 3; ++i) a[i] = rng.uniform(0.0, ell);
    mean += curve_inverse_distance_integral(curve, GridSpec(ell, a));
  }
  mean /= pilots;
  ShiftCriteria crit;
  crit.ell = ell;
  crit.delta = delta;
  crit.margin = 1e-3 * ell;
  crit.pilot_mean = mean;
  crit.threshold = (2.0 / delta) * mean;
  return crit;
}

bool shift_acceptable(const OneCurrent& curve, const Point& a, const ShiftCriteria& crit) {
  const GridSpec grid(crit.ell, a);
  if (curve_skeleton_distance(curve, grid) < crit.margin) return false;
  return curve_inverse_distance_integral(curve, grid) <= crit.threshold;
}

Point select_shift(const OneCurrent& curve, double ell, double delta, std::uint64_t seed,
                   ShiftDiagnostics* diag) {
  const ShiftCriteria crit = calibrate_shift_criteria(curve, ell, delta, seed);
  CounterRng rng(seed, /*stream=*/13);
  for (int attempt = 1; attempt <= 10000; ++attempt) {
    Point a(0, 0, 0);
    for (int i = 0; i < 3; ++i) a[i] = rng.uniform(0.0, ell);
    if (shift_acceptable(curve, a, crit)) {
      if (diag) {
        diag->attempts = attempt;
        diag->criteria = crit;
        diag->accepted_margin = curve_skeleton_distance(curve, GridSpec(ell, a));
        diag->accepted_integral = curve_inverse_distance_integral(curve, GridSpec(ell, a));
      }
      return a;
    }
  }
  throw std::runtime_error("select_shift: 10^4 rejections (pathological curve/grid ratio)");
}

double distance_integral_scaling(const std::vector<std::pair<Point, Point>>& sites, double p_exp,
                                 double t, int sample_count, std::uint64_t seed) {
  if (sites.empty()) throw std::invalid_argument("distance_integral_scaling: no sites");
  const int d = sites[0].first.dim;
  Point lo = sites[0].first, hi = sites[0].first;
  for (const auto& [a, b] : sites)
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min({lo[i], a[i], b[i]});
      hi[i] = std::max({hi[i], a[i], b[i]});
    }
  double vol = 1.0;
  for (int i = 0; i < d; ++i) {
    lo[i] -= t;
    hi[i] += t;
    vol *= hi[i] - lo[i];
  }
  CounterRng rng(seed, /*stream=*/17);
  double acc = 0.0;
  long long hits = 0;
  for (int s = 0; s < sample_count; ++s) {
    Point x = lo;
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : sites) dmin = std::min(dmin, point_segment_distance(x, a, b));
    if (dmin < t && dmin > 0) {
      acc += std::pow(dmin, -p_exp);
      ++hits;
    }
  }
  if (hits < 1000)
    throw std::runtime_error("distance_integral_scaling: sample starvation (fewer than 10^3 hits)");
  return vol * acc / sample_count;
}

}  // namespace gammaflow
