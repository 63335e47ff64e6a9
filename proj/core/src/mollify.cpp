#include "gammaflow/mollify.hpp"

#include <cmath>

#include "gammaflow/constants.hpp"
#include "gammaflow/rng.hpp"

namespace gammaflow {

namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

}  // namespace

Mollifier::Mollifier(double eps_, double h, int dim_) : eps(eps_), dim(dim_) {
  radius_nodes = int(std::ceil(eps / h)) - 1;  // support strictly inside B_eps
  if (radius_nodes < 1) radius_nodes = 1;
  const int w = 2 * radius_nodes + 1;
  const int count = dim == 3 ? w * w * w : w * w;
  weights.assign(std::size_t(count), 0.0);
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    int rem = i;
    int off[3] = {0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      off[a] = rem % w - radius_nodes;
      rem /= w;
    }
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += double(off[a]) * off[a];
    r2 *= (h * h) / (eps * eps);
    weights[i] = bump(r2);
    sum += weights[i];
  }
  if (sum <= 0) throw std::invalid_argument("Mollifier: empty stencil");
  for (auto& x : weights) x /= sum;
}

LatticeField mollify(const LatticeField& field, double eps) {
  if (!(eps >= 2.0 * field.h))
    throw std::invalid_argument("mollify: eps < 2h (kernel under-resolved)");
  if (!field.mask.empty()) throw std::invalid_argument("mollify: masked fields unsupported");

  Mollifier ker(eps, field.h, field.dim);
  const int r = ker.radius_nodes;
  const int w = 2 * r + 1;
  for (int a = 0; a < field.dim; ++a)
    if (field.dims[a] - 2 * r < 2)
      throw std::invalid_argument("mollify: field margin too small for eps");

  std::array<int, 3> odims = field.dims;
  Point lo = field.box.lo, hi = field.box.hi;
  for (int a = 0; a < field.dim; ++a) {
    odims[a] -= 2 * r;
    lo[a] += r * field.h;
    hi[a] -= r * field.h;
  }
  LatticeField out(BoxDomain(lo, hi), odims, Target::R2);

  const int zlim = field.dim == 3 ? odims[2] : 1;
  for (int ix = 0; ix < odims[0]; ++ix)
    for (int iy = 0; iy < odims[1]; ++iy)
      for (int iz = 0; iz < zlim; ++iz) {
        double sx = 0.0, sy = 0.0;
        for (int dx = -r; dx <= r; ++dx)
          for (int dy = -r; dy <= r; ++dy) {
            if (field.dim == 3) {
              for (int dz = -r; dz <= r; ++dz) {
                const double wgt =
                    ker.weights[std::size_t((dx + r) * w + (dy + r)) * w + (dz + r)];
                if (wgt == 0.0) continue;
                double vx, vy;
                field.vec(field.node_index(ix + r + dx, iy + r + dy, iz + r + dz), vx, vy);
                sx += wgt * vx;
                sy += wgt * vy;
              }
            } else {
              const double wgt = ker.weights[std::size_t(dx + r) * w + (dy + r)];
              if (wgt == 0.0) continue;
              double vx, vy;
              field.vec(field.node_index(ix + r + dx, iy + r + dy), vx, vy);
              sx += wgt * vx;
              sy += wgt * vy;
            }
          }
        const std::size_t oi = out.node_index(ix, iy, iz);
        out.values[2 * oi] = sx;
        out.values[2 * oi + 1] = sy;
      }
  return out;
}

double radial_projection_scale(const Point& a, const Point& x) {
  const Point d = x - a;
  const double nd = d.norm();
  const double s = dot(a, d) / nd;
  return -s + std::sqrt(s * s + 1.0 - a.norm2());
}

LatticeField project_center(const LatticeField& field, const Point& a) {
  if (field.target != Target::R2)
    throw std::invalid_argument("project_center: expects an R2 field");
  if (!(a.norm() < 0.125)) throw std::invalid_argument("project_center: |a| must be < 1/8");

  LatticeField out(field.box, field.dims, Target::S1);
  out.mask = field.mask;
  for (std::size_t i = 0; i < field.node_count(); ++i) {
    Point v(field.values[2 * i], field.values[2 * i + 1]);
    Point d = v - a;
    if (d.norm() < 1e-12) throw std::invalid_argument("project_center: non-regular center");
    const double t = radial_projection_scale(a, v);
    const Point y = a + (t / d.norm()) * d;
    out.values[i] = std::atan2(y[1], y[0]);
  }
  return out;
}

int cell_image_winding(const LatticeField& field, int ix, int iy, const Point& a) {
  const std::size_t i00 = field.node_index(ix, iy);
  const std::size_t i10 = field.node_index(ix + 1, iy);
  const std::size_t i11 = field.node_index(ix + 1, iy + 1);
  const std::size_t i01 = field.node_index(ix, iy + 1);
  const std::size_t loop[5] = {i00, i10, i11, i01, i00};
  double total = 0.0;
  double prev = 0.0;
  for (int k = 0; k < 5; ++k) {
    double vx, vy;
    field.vec(loop[k], vx, vy);
    const double ang = std::atan2(vy - a[1], vx - a[0]);
    if (k > 0) total += wrap_phase(ang - prev);
    prev = ang;
  }
  return int(std::lround(total / (2.0 * kPi)));
}

ProjectionCenter select_projection_center(const LatticeField& field, double delta,
                                          int sample_count, std::uint64_t rng_seed) {
  if (field.target != Target::R2)
    throw std::invalid_argument("select_projection_center: expects an R2 field");
  if (!(delta > 0 && delta < 0.125))
    throw std::invalid_argument("select_projection_center: delta must lie in (0, 1/8)");

  CounterRng rng(rng_seed, /*stream=*/7);
  struct Sample {
    Point a;
    bool regular;
    int count;
  };
  std::vector<Sample> samples;
  const auto cd = field.cell_dims();

  for (int s = 0; s < sample_count; ++s) {
    Point a(0, 0);
    do {
      a[0] = rng.uniform(-delta, delta);
      a[1] = rng.uniform(-delta, delta);
    } while (a.norm() >= delta);

    bool regular = true;
    int count = 0;
    for (int ix = 0; ix < cd[0] && regular; ++ix)
      for (int iy = 0; iy < cd[1]; ++iy) {
        const std::size_t corners[4] = {
            field.node_index(ix, iy), field.node_index(ix + 1, iy),
            field.node_index(ix + 1, iy + 1), field.node_index(ix, iy + 1)};
        Point v[4];
        for (int k = 0; k < 4; ++k) {
          double vx, vy;
          field.vec(corners[k], vx, vy);
          v[k] = Point(vx, vy);
        }
        for (int k = 0; k < 4; ++k)
          if (point_segment_distance(a, v[k], v[(k + 1) % 4]) < 1e-6) {
            regular = false;
            break;
          }
        if (!regular) break;
        if (cell_image_winding(field, ix, iy, a) != 0) ++count;
      }
    samples.push_back({a, regular, count});
  }

  double mean = 0.0;
  int regulars = 0;
  for (const auto& s : samples)
    if (s.regular) {
      mean += s.count;
      ++regulars;
    }
  if (regulars == 0)
    throw std::runtime_error("select_projection_center: all samples irregular; raise sample_count");
  mean /= regulars;

  for (const auto& s : samples) {
    if (!s.regular) continue;
    if (double(s.count) <= 3.0 * mean) return {s.a, s.count, sample_count, mean};
  }
  // Some regular sample is at or below the mean, so this is unreachable.
  throw std::runtime_error("select_projection_center: no sample met the count bound");
}

}  // namespace gammaflow
