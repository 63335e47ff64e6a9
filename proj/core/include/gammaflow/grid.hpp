#ifndef GAMMAFLOW_GRID_HPP
#define GAMMAFLOW_GRID_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "gammaflow/currents.hpp"

namespace gammaflow {

/// Cube grid G(ell, a): cubes a + z*ell + [0, ell]^d over z in Z^d.
struct GridSpec {
  double ell = 1.0;
  Point shift;  // in [0, ell)^d
  int dim = 3;

  GridSpec() = default;
  GridSpec(double side, const Point& a) : ell(side), shift(a), dim(a.dim) {}

  /// Dual grid: shifted by ell/2 on every axis.
  GridSpec dual() const {
    Point s = shift;
    for (int i = 0; i < dim; ++i) s[i] += 0.5 * ell;
    return GridSpec(ell, s);
  }
  Point cube_center(long long i, long long j, long long k) const {
    Point p = shift;
    p[0] += ell * (double(i) + 0.5);
    p[1] += ell * (double(j) + 0.5);
    if (dim == 3) p[2] += ell * (double(k) + 0.5);
    return p;
  }
};

/// General h-cell of a grid: the axes it spans plus the lattice index of its
/// lower corner. Dual cells live in the dual grid, span the complementary
/// axes, and share the center.
struct GridCell {
  unsigned span_mask = 0;
  std::array<long long, 3> corner{0, 0, 0};

  int dimension() const;
  Point center(const GridSpec& g) const;
};

/// Dual cell in g.dual(); (dual of dual) recovers the original center/span.
GridCell dual_cell(const GridCell& c, const GridSpec& g);

/// Euclidean distance from x to the h-skeleton R_h(ell, a), by folding into
/// the fundamental cube and snapping the d-h nearest coordinates.
double skeleton_distance(const Point& x, const GridSpec& g, int h);

/// 2-cell of a 3-D grid identified by its normal axis and the lattice index
/// of its lower corner (index[axis] is the plane index).
struct FaceKey {
  int axis = 0;
  std::array<long long, 3> index{0, 0, 0};
  auto operator<=>(const FaceKey&) const = default;
};

/// Signed transversal crossing counts of the polygonal curve with every
/// 2-cell it meets (sign = direction against the +axis face normal). Errors
/// on tangential or edge-grazing crossings.
std::map<FaceKey, long long> intersection_numbers(const OneCurrent& curve, const GridSpec& grid);

/// Deformation of a closed polygonal 1-current onto the dual 1-skeleton: the
/// curve is subdivided at grid planes and every in-cube piece is pushed onto
/// the tree of dual half-edges inside its cube (entry-face center -> cube
/// center -> exit-face center). Transversal crossings compose to full dual
/// edges, so the output is an integer chain of dual 1-cells whose
/// multiplicity on the edge dual to a 2-cell equals the signed intersection
/// number, and which has no boundary in V when the input is closed.
OneCurrent deform_to_dual(const OneCurrent& curve, const GridSpec& grid, const BoxDomain& v);

/// Exact distance from the curve to the 1-skeleton (closed-form
/// segment-to-lattice-line enumeration).
double curve_skeleton_distance(const OneCurrent& curve, const GridSpec& grid);

/// Midpoint-rule quadrature of the inverse-distance integral
/// int_curve dist(x, R_1)^{-1} dH^1.
double curve_inverse_distance_integral(const OneCurrent& curve, const GridSpec& grid);

/// Empirically calibrated acceptance test for grid shifts: a transversality
/// margin on the 1-skeleton plus a Markov-style cap on the inverse-distance
/// integral (threshold = (2/delta) * pilot mean over 64 shifts).
struct ShiftCriteria {
  double ell = 1.0;
  double delta = 0.5;
  double margin = 0.0;     // required curve-to-skeleton distance
  double threshold = 0.0;  // cap on the inverse-distance integral
  double pilot_mean = 0.0;
};

ShiftCriteria calibrate_shift_criteria(const OneCurrent& curve, double ell, double delta,
                                       std::uint64_t seed);
bool shift_acceptable(const OneCurrent& curve, const Point& a, const ShiftCriteria& crit);

struct ShiftDiagnostics {
  int attempts = 0;
  ShiftCriteria criteria;
  double accepted_margin = 0.0;
  double accepted_integral = 0.0;
};

/// Rejection-samples shifts until one passes; errors after 10^4 rejections.
Point select_shift(const OneCurrent& curve, double ell, double delta, std::uint64_t seed,
                   ShiftDiagnostics* diag = nullptr);

/// Monte-Carlo estimate of int_{S_t} dist(x, S)^{-p} dx over the tube of
/// radius t around a set of segments (degenerate segments are points).
/// Errors below 10^3 tube hits (sample starvation).
double distance_integral_scaling(const std::vector<std::pair<Point, Point>>& sites, double p_exp,
                                 double t, int sample_count, std::uint64_t seed);

}  // namespace gammaflow

#endif
