#ifndef GAMMAFLOW_VORTEX_MAPS_HPP
#define GAMMAFLOW_VORTEX_MAPS_HPP

#include <utility>
#include <vector>

#include "gammaflow/currents.hpp"
#include "gammaflow/lattice_field.hpp"

namespace gammaflow {

/// Node counts for a lattice of spacing h on the box; every span must be an
/// integer multiple of h (within 1e-9 relative).
std::array<int, 3> lattice_dims(const BoxDomain& box, double h);

struct VortexCenter {
  Point position;
  int degree = 1;
};

/// Multi-vortex phase field theta(x) = sum_i d_i * arg(x - a_i) on a 2-D
/// lattice. Centers must be inside the box, pairwise distinct, and off the
/// node lattice.
LatticeField product_vortex(const std::vector<VortexCenter>& centers, const BoxDomain& box,
                            double h);

/// 3-D field winding once around an axis-aligned line: the phase is the
/// argument of the transverse displacement, with the transverse plane
/// oriented by the right-hand rule around +e_axis.
LatticeField axis_vortex_3d(const Point& axis_point, int axis, const BoxDomain& box, double h);

/// Signed solid angle subtended at the origin by the triangle (a, b, c)
/// (van Oosterom-Strackee), in (-2 pi, 2 pi].
double triangle_solid_angle(const Point& a, const Point& b, const Point& c);

/// Phase field theta(x) = Omega(x)/2, where Omega is the signed solid angle
/// of the triangulated cone over the curve's centroid. The phase jumps by
/// 2 pi across the cone surface, so the unit-vector field is continuous off
/// the curve and winds once around it.
LatticeField solid_angle_vortex(const OneCurrent& curve, const BoxDomain& box, double h);

/// Signed solid angle of the spanning cone at an arbitrary point (exposed for
/// sampled winding oracles).
double cone_solid_angle(const OneCurrent& curve, const Point& apex, const Point& x);

/// Centroid of the curve's segment endpoints (the cone apex used above).
Point curve_centroid(const OneCurrent& curve);

}  // namespace gammaflow

#endif
