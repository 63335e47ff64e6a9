#ifndef GAMMAFLOW_DECOMPOSITION_HPP
#define GAMMAFLOW_DECOMPOSITION_HPP

#include <map>
#include <utility>
#include <vector>

#include "gammaflow/currents.hpp"
#include "gammaflow/lattice_field.hpp"
#include "gammaflow/vortex_maps.hpp"

namespace gammaflow {

struct DecompParams {
  int n = 2;       // target dimension
  double p;        // exponent in (n-1, n)
  double alpha;    // dyadic ratio in (sqrt(3)/2, 1)

  /// alpha^{1/(n-p)}, the coarsest pairing scale (log-space evaluation).
  double alpha1() const;
  /// alpha^{k/(n-p)}.
  double alpha_k(int k) const;
};

struct AdmissibilityReport {
  bool ok = false;
  double lhs = 0.0;  // p(n-p)/(n-1) * alpha^{-1/(n-p)} / (alpha^{-1/(n-p)+2} - 1)
  double rhs = 0.0;  // (1-alpha)(2 alpha^2 - 1) / (4 alpha)
};

/// Admissibility of (n, p, alpha): alpha > sqrt(3)/2, n-p <= 1/4, and
/// lhs <= rhs. Both sides are returned for reporting.
AdmissibilityReport check_admissible(int n, double p, double alpha);

/// Per-scale pair counts: e_k counts pairs whose positive endpoint is
/// interior and whose distance lies in (alpha_{k+1}, alpha_k]; e'_k the same
/// for negative endpoints; e_0 / e'_0 are the masses surviving in X.
struct ScaleLedger {
  long long e0 = 0;
  long long e0_prime = 0;
  std::map<int, long long> e;
  std::map<int, long long> e_prime;

  int max_scale() const;  // largest k with e_k > 0 or e'_k > 0; 0 when none
};

struct DecompositionResult {
  ZeroCurrent X;
  OneCurrent S;  // in pairing order; segment (a=z_i, b=y_i) so bdry = +y -z
  ScaleLedger ledger;

  struct PairTrace {
    Point y, z;  // positive / negative endpoint (boundary feet when marked)
    bool y_is_boundary = false;
    bool z_is_boundary = false;
    double distance = 0.0;
    int scale_k = 0;
  };
  std::vector<PairTrace> trace;
};

/// Greedy pairing decomposition T = X + boundary(S): repeatedly match the
/// closest admissible pair (positive-negative, positive-boundary, or
/// boundary-negative) while the minimum is at most alpha_1, tie-breaking by
/// lexicographic (y, z). Exact in integer arithmetic: X + boundary_one(S,
/// omega) reproduces T after merging, bit-exact coordinates.
DecompositionResult decompose(const ZeroCurrent& t, const Domain& omega,
                              const DecompParams& params);

struct BoundsReport {
  double constant_C = 0.0;        // C(n, alpha, p)
  double constant_C_sharp = 0.0;  // C * n (n-1)^{p/2-1} omega_{n-1}
  double mass_X = 0.0;
  double mass_S = 0.0;
  double mass_rhs = 0.0;   // C * E_r
  double flat_rhs = 0.0;   // C * alpha * alpha^{1/(2(n-p))} * E_r
  double sharp_lhs = 0.0;
  double sharp_rhs = 0.0;
  bool mass_ok = false;
  bool flat_ok = false;
  bool sharp_ok = false;
};

/// Evaluates the three quantitative estimates of the decomposition theorem
/// against a trusted rescaled energy E_r = (n-p) * p-energy. Refuses
/// inadmissible parameters.
BoundsReport verify_bounds(const DecompositionResult& result, double input_mass,
                           double rescaled_energy, const DecompParams& params);

/// Analytic disjoint-disk energy oracle for a vortex configuration:
/// sum_i 2 pi |d_i|^p R_i^{2-p}, R_i = min(boundary distance, half minimum
/// separation). This is the rescaled energy of the radial profile on the
/// disjoint disks, a lower bound for any field with that vorticity.
double analytic_vortex_energy(const std::vector<VortexCenter>& atoms, const BoxDomain& omega,
                              double p);

/// Line integral of |grad u|^p over the circle (lhs, trapezoidal rule with
/// bilinearly interpolated cell gradients) against the boundary-energy lower
/// bound (rhs) evaluated from the circle's winding number. The circle must
/// stay clear of vortex cores (edge jump guard).
std::pair<double, double> boundary_energy_lower_bound(const LatticeField& field,
                                                      const Point& center, double radius,
                                                      double p);

/// Sequence inequality: lhs = sum_k max(S_k - a_{k+1}, 0)^beta / S_k^{beta-1}
/// * lambda^k (0 where S_k = 0), rhs = (2 lambda - 1)/(2 lambda) * sum a_k
/// lambda^k. Requires beta in (1,2), lambda in (3/4, 1).
std::pair<double, double> lemma_ai_check(const std::vector<long long>& a, double beta,
                                         double lambda);

}  // namespace gammaflow

#endif
