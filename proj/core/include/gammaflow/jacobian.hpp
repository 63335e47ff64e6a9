#ifndef GAMMAFLOW_JACOBIAN_HPP
#define GAMMAFLOW_JACOBIAN_HPP

#include <array>
#include <vector>

#include "gammaflow/currents.hpp"
#include "gammaflow/lattice_field.hpp"

namespace gammaflow {

/// Discrete Jacobian of a 2-D circle-valued field as an integer 0-current:
/// one atom per plaquette with nonzero winding, at the plaquette center.
/// Equals the normalized Jacobian (integer multiplicities, positive vortex
/// gives a +1 atom). Throws InvariantError when any edge phase jump comes
/// within 1e-9 of pi ("under-resolved field").
ZeroCurrent plaquette_vorticity(const LatticeField& field);

/// Discrete Jacobian of a 3-D circle-valued field as an integer chain of
/// dual-lattice edges: each lattice 2-face with nonzero ring winding emits
/// the edge through its center along the face normal, length h, multiplicity
/// = winding (right-hand orientation, so a small positively oriented
/// transverse loop links a +1 chain once). Closed at interior dual vertices.
OneCurrent face_vorticity_3d(const LatticeField& field);

/// Winding of the field along a closed cycle of lattice nodes (consecutive
/// entries must be lattice neighbors). Exact integer; guards pi-jumps.
int degree_loop(const LatticeField& field, const std::vector<std::array<int, 3>>& loop);

/// max over cells of |ju| / |grad u| with ju = u1 grad u2 - u2 grad u1
/// (forward differences); cells with vanishing gradient count as 0.
double jform_max_ratio(const LatticeField& field);

/// Flat-distance continuity quotient
///   F(Ju - Jv) / ( ||u-v||_q (||grad u||_p + ||grad v||_p)^{n-1} ),  n = 2,
/// with discrete lattice norms and the field box as the domain. Requires
/// (n-1)/p + 1/q = 1; errors when the fields are (numerically) identical.
double continuity_ratio(const LatticeField& u, const LatticeField& v, double p, double q);

}  // namespace gammaflow

#endif
