#include "gammaflow/vortex_maps.hpp"

#include <cmath>

#include "gammaflow/constants.hpp"

namespace gammaflow {

std::array<int, 3> lattice_dims(const BoxDomain& box, double h) {
  if (!(h > 0)) throw std::invalid_argument("lattice_dims: h must be positive");
  std::array<int, 3> dims{1, 1, 1};
  for (int a = 0; a < box.dim(); ++a) {
    const double steps = box.side(a) / h;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps) || rounded < 1)
      throw std::invalid_argument("lattice_dims: box span is not a multiple of h");
    dims[a] = int(rounded) + 1;
  }
  return dims;
}

namespace {

// A point is "on a lattice node" when every coordinate lies on the node grid.
bool on_lattice_node(const Point& c, const BoxDomain& box, double h, int dims_used) {
  for (int a = 0; a < dims_used; ++a) {
    const double steps = (c[a] - box.lo[a]) / h;
    if (std::abs(steps - std::round(steps)) > 1e-9) return false;
  }
  return true;
}

}  // namespace

LatticeField product_vortex(const std::vector<VortexCenter>& centers, const BoxDomain& box,
                            double h) {
  if (box.dim() != 2) throw std::invalid_argument("product_vortex: 2-D domains only");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!box.contains_strict(centers[i].position))
      throw std::invalid_argument("product_vortex: center outside the domain");
    if (on_lattice_node(centers[i].position, box, h, 2))
      throw std::invalid_argument("product_vortex: center on a lattice node; shift it off-lattice");
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (centers[i].position == centers[j].position)
        throw std::invalid_argument("product_vortex: duplicate centers");
  }
  LatticeField f(box, lattice_dims(box, h), Target::S1);
  for (int ix = 0; ix < f.dims[0]; ++ix) {
    for (int iy = 0; iy < f.dims[1]; ++iy) {
      const Point x = f.node_point(ix, iy);
      double theta = 0.0;
      for (const auto& c : centers)
        theta += c.degree * std::atan2(x[1] - c.position[1], x[0] - c.position[0]);
      f.values[f.node_index(ix, iy)] = wrap_phase(theta);
    }
  }
  return f;
}

LatticeField axis_vortex_3d(const Point& axis_point, int axis, const BoxDomain& box, double h) {
  if (box.dim() != 3) throw std::invalid_argument("axis_vortex_3d: 3-D domains only");
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis_vortex_3d: axis must be 0, 1 or 2");
  const int b = (axis + 1) % 3, c = (axis + 2) % 3;
  for (int a : {b, c}) {
    const double steps = (axis_point[a] - box.lo[a]) / h;
    if (std::abs(steps - std::round(steps)) < 1e-9)
      throw std::invalid_argument("axis_vortex_3d: axis intersects lattice nodes; shift it");
  }
  LatticeField f(box, lattice_dims(box, h), Target::S1);
  for (int ix = 0; ix < f.dims[0]; ++ix)
    for (int iy = 0; iy < f.dims[1]; ++iy)
      for (int iz = 0; iz < f.dims[2]; ++iz) {
        const Point x = f.node_point(ix, iy, iz);
        f.values[f.node_index(ix, iy, iz)] =
            wrap_phase(std::atan2(x[c] - axis_point[c], x[b] - axis_point[b]));
      }
  return f;
}

double triangle_solid_angle(const Point& a, const Point& b, const Point& c) {
  const double la = a.norm(), lb = b.norm(), lc = c.norm();
  const double num = dot(a, cross(b, c));
  const double den = la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
  return 2.0 * std::atan2(num, den);
}

Point curve_centroid(const OneCurrent& curve) {
  Point c;
  c.dim = curve.dim;
  double n = 0;
  for (const auto& s : curve.segments) {
    c = c + s.a + s.b;
    n += 2;
  }
  return (1.0 / n) * c;
}

double cone_solid_angle(const OneCurrent& curve, const Point& apex, const Point& x) {
  double omega = 0.0;
  for (const auto& s : curve.segments)
    omega += s.m * triangle_solid_angle(apex - x, s.a - x, s.b - x);
  return omega;
}

LatticeField solid_angle_vortex(const OneCurrent& curve, const BoxDomain& box, double h) {
  if (box.dim() != 3 || curve.dim != 3)
    throw std::invalid_argument("solid_angle_vortex: 3-D curves and domains only");
  if (curve.empty()) throw std::invalid_argument("solid_angle_vortex: empty curve");
  if (!boundary_one(curve).empty())
    throw std::invalid_argument("solid_angle_vortex: curve is not closed");

  LatticeField f(box, lattice_dims(box, h), Target::S1);

  // Nodes on the curve itself have no well-defined phase.
  for (const auto& s : curve.segments) {
    Point lo = s.a, hi = s.b;
    for (int a = 0; a < 3; ++a) {
      if (lo[a] > hi[a]) std::swap(lo[a], hi[a]);
      lo[a] -= 2 * h;
      hi[a] += 2 * h;
    }
    const auto clampi = [&](double v, int a) {
      return std::max(0, std::min(f.dims[a] - 1, int(std::floor((v - box.lo[a]) / h))));
    };
    for (int ix = clampi(lo[0], 0); ix <= clampi(hi[0], 0); ++ix)
      for (int iy = clampi(lo[1], 1); iy <= clampi(hi[1], 1); ++iy)
        for (int iz = clampi(lo[2], 2); iz <= clampi(hi[2], 2); ++iz)
          if (point_segment_distance(f.node_point(ix, iy, iz), s.a, s.b) < 1e-9)
            throw std::invalid_argument("solid_angle_vortex: curve passes through a node");
  }

  const Point apex = curve_centroid(curve);
  for (int ix = 0; ix < f.dims[0]; ++ix)
    for (int iy = 0; iy < f.dims[1]; ++iy)
      for (int iz = 0; iz < f.dims[2]; ++iz) {
        const Point x = f.node_point(ix, iy, iz);
        f.values[f.node_index(ix, iy, iz)] = wrap_phase(0.5 * cone_solid_angle(curve, apex, x));
      }
  return f;
}

}  // namespace gammaflow
