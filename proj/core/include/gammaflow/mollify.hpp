#ifndef GAMMAFLOW_MOLLIFY_HPP
#define GAMMAFLOW_MOLLIFY_HPP

#include <cstdint>

#include "gammaflow/lattice_field.hpp"

namespace gammaflow {

/// Discrete mollification stencil: the smooth radial bump
/// rho(x) ~ exp(-1/(1 - |x|^2)) on the unit ball, scaled to radius eps and
/// normalized numerically so the weights sum to 1 (within 1e-8 of the
/// continuum normalization by construction, exactly 1 discretely).
struct Mollifier {
  double eps;
  int radius_nodes;                 // stencil half-width in nodes
  std::vector<double> weights;      // (2r+1)^dim stencil, row-major
  int dim;

  Mollifier(double eps_, double h, int dim_);
};

/// Convolution on the valid interior: the output lattice is shrunk by the
/// stencil radius on every side and carries R2 values with |u| <= 1.
/// Requires eps >= 2h and a caller-enlarged input (margin >= eps).
LatticeField mollify(const LatticeField& field, double eps);

/// Radial projection from a onto the unit circle, applied node-wise to an
/// R2 field; returns an S1 field. Requires |a| < 1/8; a node value within
/// 1e-12 of a is a non-regular center.
LatticeField project_center(const LatticeField& field, const Point& a);

/// The scalar factor t_a(x) with a + t_a (x-a)/|x-a| on the unit circle.
double radial_projection_scale(const Point& a, const Point& x);

struct ProjectionCenter {
  Point a;
  int preimage_count = 0;     // cells whose bilinear image winds around a
  int samples_tried = 0;
  double mean_count = 0.0;    // over the regular samples
};

/// Samples candidate centers uniformly in the delta-ball and returns one that
/// is a regular value (no cell-image edge within 1e-6) with preimage count at
/// most 3x the sample mean. Errors when every sample is irregular.
ProjectionCenter select_projection_center(const LatticeField& field, double delta,
                                          int sample_count, std::uint64_t rng_seed);

/// Winding number of the quadrilateral image of cell (ix,iy) around a
/// (angle-sum of the 4-corner loop). Exposed for the selection logic and its
/// oracle tests.
int cell_image_winding(const LatticeField& field, int ix, int iy, const Point& a);

}  // namespace gammaflow

#endif
