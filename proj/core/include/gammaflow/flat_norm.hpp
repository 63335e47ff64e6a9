#ifndef GAMMAFLOW_FLAT_NORM_HPP
#define GAMMAFLOW_FLAT_NORM_HPP

#include <optional>

#include "gammaflow/currents.hpp"

namespace gammaflow {

struct FlatNormResult {
  double value = 0.0;
  OneCurrent witness;  // boundary_one(witness, omega) reproduces the input
};

/// Flat norm of an integral 0-current on a convex domain, computed as the
/// exact optimum of the transportation problem with the domain boundary as a
/// free sink. Atoms are expanded to unit atoms; each positive unit matches a
/// negative unit (cost = Euclidean distance) or the boundary (cost = boundary
/// distance), and symmetrically for negative units.
///
/// The solver is a shortest-augmenting-path assignment on the implicit square
/// matrix with dummy rows/columns for the boundary, so memory stays linear in
/// the unit count. Rejects instances with more than `kFlatNormSizeCap` units.
FlatNormResult flat_norm_zero(const ZeroCurrent& t, const Domain& omega);

inline constexpr long long kFlatNormSizeCap = 10000;

/// Minimizing pair of m(T) = min |y - z| over
/// T+ x T-  u  T+ x bdry  u  bdry x T-. Boundary ends are realized by their
/// foot points. Empty optional when T restricted to omega vanishes.
struct PairMin {
  bool y_is_boundary = false;
  Point y;
  bool z_is_boundary = false;
  Point z;
  double distance = 0.0;
};

std::optional<PairMin> pair_min(const ZeroCurrent& t, const Domain& omega);

/// flat_norm_zero(t1 - t2).value
double flat_distance(const ZeroCurrent& t1, const ZeroCurrent& t2, const Domain& omega);

}  // namespace gammaflow

#endif
