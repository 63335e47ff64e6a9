#include "gammaflow/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "gammaflow/constants.hpp"

namespace gammaflow {

double DecompParams::alpha1() const { return alpha_k(1); }

double DecompParams::alpha_k(int k) const {
  return std::exp(double(k) * std::log(alpha) / (n - p));
}

AdmissibilityReport check_admissible(int n, double p, double alpha) {
  if (n < 2 || !(p > n - 1 && p < n) || !(alpha > 0 && alpha < 1))
    throw std::invalid_argument("check_admissible: need n >= 2, p in (n-1, n), alpha in (0,1)");
  AdmissibilityReport rep;
  const double nmp = n - p;
  // alpha^{-1/(n-p)} / (alpha^{-1/(n-p)+2} - 1) == 1 / (alpha^2 - alpha^{1/(n-p)}),
  // which stays finite when alpha^{-1/(n-p)} overflows.
  const double a_pow = std::exp(std::log(alpha) / nmp);
  rep.lhs = (p * nmp / (n - 1)) / (alpha * alpha - a_pow);
  rep.rhs = (1.0 - alpha) * (2.0 * alpha * alpha - 1.0) / (4.0 * alpha);
  rep.ok = alpha > std::sqrt(3.0) / 2.0 && nmp <= 0.25 && rep.lhs <= rep.rhs;
  return rep;
}

int ScaleLedger::max_scale() const {
  int k = 0;
  if (!e.empty()) k = std::max(k, e.rbegin()->first);
  if (!e_prime.empty()) k = std::max(k, e_prime.rbegin()->first);
  return k;
}

namespace {

struct Unit {
  Point p;
  bool positive;
};

int classify_scale(double d, const DecompParams& params) {
  // Unique k >= 1 with alpha_{k+1} < d <= alpha_k.
  const double step = std::log(params.alpha) / (params.n - params.p);  // negative
  int k = std::max(1, int(std::floor(std::log(d) / step)));
  while (params.alpha_k(k) < d && k > 1) --k;
  while (params.alpha_k(k + 1) >= d) ++k;
  return k;
}

}  // namespace

DecompositionResult decompose(const ZeroCurrent& input, const Domain& omega,
                              const DecompParams& params) {
  if (!(params.n - params.p >= 1e-6))
    throw std::invalid_argument("decompose: scale underflow (n - p below 1e-6)");
  for (const auto& a : input.atoms)
    for (int i = 0; i < a.p.dim; ++i)
      if (!std::isfinite(a.p[i])) throw std::invalid_argument("decompose: non-finite coordinate");

  const ZeroCurrent t = merged(restricted(input, omega));
  std::vector<Unit> pos, neg;
  for (const auto& a : t.atoms)
    for (long long k = 0; k < std::llabs(a.m); ++k)
      (a.m > 0 ? pos : neg).push_back({a.p, a.m > 0});
  auto by_point = [](const Unit& a, const Unit& b) { return a.p < b.p; };
  std::sort(pos.begin(), pos.end(), by_point);
  std::sort(neg.begin(), neg.end(), by_point);

  const double alpha1 = params.alpha1();
  if (alpha1 == 0.0) throw std::invalid_argument("decompose: scale underflow");

  DecompositionResult res;
  res.X.dim = t.dim;
  res.S.dim = t.dim;

  std::vector<char> pos_used(pos.size(), 0), neg_used(neg.size(), 0);
  long long remaining = (long long)pos.size() + (long long)neg.size();

  while (remaining > 0) {
    // Minimizing admissible pair; tie-break on (distance, y, z) with boundary
    // ends realized by their foot points.
    bool found = false;
    double best_d = 0.0;
    Point best_y, best_z;
    int best_pi = -1, best_ni = -1;  // -1 marks a boundary end
    auto consider = [&](double d, const Point& y, const Point& z, int pi, int ni) {
      if (!found || d < best_d ||
          (d == best_d && (y < best_y || (y == best_y && z < best_z)))) {
        found = true;
        best_d = d;
        best_y = y;
        best_z = z;
        best_pi = pi;
        best_ni = ni;
      }
    };
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (pos_used[i]) continue;
      for (std::size_t j = 0; j < neg.size(); ++j) {
        if (neg_used[j]) continue;
        consider(dist(pos[i].p, neg[j].p), pos[i].p, neg[j].p, int(i), int(j));
      }
      consider(omega.boundary_distance(pos[i].p), pos[i].p, omega.boundary_foot(pos[i].p),
               int(i), -1);
    }
    for (std::size_t j = 0; j < neg.size(); ++j) {
      if (neg_used[j]) continue;
      consider(omega.boundary_distance(neg[j].p), omega.boundary_foot(neg[j].p), neg[j].p, -1,
               int(j));
    }
    if (!found || best_d > alpha1) break;

    const int k = classify_scale(best_d, params);
    DecompositionResult::PairTrace tr;
    tr.y = best_y;
    tr.z = best_z;
    tr.y_is_boundary = best_pi < 0;
    tr.z_is_boundary = best_ni < 0;
    tr.distance = best_d;
    tr.scale_k = k;
    res.trace.push_back(tr);

    // Segment oriented so its boundary is +delta_y - delta_z.
    res.S.add(best_z, best_y, 1);
    if (best_pi >= 0) {
      pos_used[best_pi] = 1;
      --remaining;
      res.ledger.e[k] += 1;
    }
    if (best_ni >= 0) {
      neg_used[best_ni] = 1;
      --remaining;
      res.ledger.e_prime[k] += 1;
    }
  }

  for (std::size_t i = 0; i < pos.size(); ++i)
    if (!pos_used[i]) {
      res.X.add(pos[i].p, 1);
      res.ledger.e0 += 1;
    }
  for (std::size_t j = 0; j < neg.size(); ++j)
    if (!neg_used[j]) {
      res.X.add(neg[j].p, -1);
      res.ledger.e0_prime += 1;
    }
  res.X = merged(res.X);
  return res;
}

BoundsReport verify_bounds(const DecompositionResult& result, double input_mass,
                           double rescaled_energy, const DecompParams& params) {
  const auto adm = check_admissible(params.n, params.p, params.alpha);
  if (!adm.ok) throw std::invalid_argument("verify_bounds: inadmissible (n, p, alpha)");

  const int n = params.n;
  const double p = params.p, alpha = params.alpha, nmp = n - p;
  const double omega_n1 = sphere_area(n);
  const double pre = std::pow(double(n - 1), 0.5 * p) * omega_n1;

  BoundsReport rep;
  rep.constant_C = (1.0 / pre) * 8.0 * alpha / ((1 - alpha) * (1 - alpha) * (2 * alpha * alpha - 1));
  rep.constant_C_sharp = rep.constant_C * n * std::pow(double(n - 1), 0.5 * p - 1.0) * omega_n1;

  rep.mass_X = mass_zero(result.X);
  rep.mass_S = mass_one(result.S);
  rep.mass_rhs = rep.constant_C * rescaled_energy;
  rep.flat_rhs =
      rep.constant_C * alpha * std::exp(std::log(alpha) / (2.0 * nmp)) * rescaled_energy;

  const double two_pow = std::pow(2.0, nmp) - 1.0;
  rep.sharp_lhs = pre * (alpha * rep.mass_X - p * two_pow / (n - 1));
  rep.sharp_rhs = (1.0 + rep.constant_C_sharp * (two_pow / std::sqrt(nmp)) *
                             (1.0 + 2.0 * std::log(std::max(input_mass, 1.0)) /
                                        std::abs(std::log(nmp)))) *
                  rescaled_energy;

  rep.mass_ok = rep.mass_X <= rep.mass_rhs + 1e-12;
  rep.flat_ok = rep.mass_S <= rep.flat_rhs + 1e-12;
  rep.sharp_ok = rep.sharp_lhs <= rep.sharp_rhs + 1e-12;
  return rep;
}

double analytic_vortex_energy(const std::vector<VortexCenter>& atoms, const BoxDomain& omega,
                              double p) {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double r = omega.boundary_distance(atoms[i].position);
    for (std::size_t j = 0; j < atoms.size(); ++j)
      if (j != i) r = std::min(r, 0.5 * dist(atoms[i].position, atoms[j].position));
    if (!(r > 0)) continue;
    total += 2.0 * kPi * std::pow(double(std::abs(atoms[i].degree)), p) * std::pow(r, 2.0 - p);
  }
  return total;
}

namespace {

// Forward-difference gradient matrix of the unit-vector field on cell
// (cx, cy): columns are the chord differences per axis, divided by h.
void cell_gradient(const LatticeField& f, int cx, int cy, double g[2][2]) {
  double u0x, u0y, u1x, u1y, u2x, u2y;
  f.vec(f.node_index(cx, cy), u0x, u0y);
  f.vec(f.node_index(cx + 1, cy), u1x, u1y);
  f.vec(f.node_index(cx, cy + 1), u2x, u2y);
  g[0][0] = (u1x - u0x) / f.h;
  g[1][0] = (u1y - u0y) / f.h;
  g[0][1] = (u2x - u0x) / f.h;
  g[1][1] = (u2y - u0y) / f.h;
}

}  // namespace

std::pair<double, double> boundary_energy_lower_bound(const LatticeField& field,
                                                      const Point& center, double radius,
                                                      double p) {
  if (field.dim != 2 || field.target != Target::S1)
    throw std::invalid_argument("boundary_energy_lower_bound: 2-D S1 fields only");
  const double h = field.h;
  const int samples = std::max(512, int(std::ceil(2 * kPi * radius / h)) * 4);

  auto grad_at = [&](const Point& x, double g[2][2]) {
    // Bilinear interpolation on the cell-center grid.
    const double fx = (x[0] - field.box.lo[0]) / h - 0.5;
    const double fy = (x[1] - field.box.lo[1]) / h - 0.5;
    const int cx = std::clamp(int(std::floor(fx)), 0, field.dims[0] - 3);
    const int cy = std::clamp(int(std::floor(fy)), 0, field.dims[1] - 3);
    const double tx = std::clamp(fx - cx, 0.0, 1.0), ty = std::clamp(fy - cy, 0.0, 1.0);
    double g00[2][2], g10[2][2], g01[2][2], g11[2][2];
    cell_gradient(field, cx, cy, g00);
    cell_gradient(field, cx + 1, cy, g10);
    cell_gradient(field, cx, cy + 1, g01);
    cell_gradient(field, cx + 1, cy + 1, g11);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        // chords approach 2 (antipodal nodes) only inside a vortex core
        const double chord_guard = h * std::max({std::abs(g00[i][j]), std::abs(g10[i][j]),
                                                 std::abs(g01[i][j]), std::abs(g11[i][j])});
        if (chord_guard >= 1.9)
          throw std::invalid_argument("boundary_energy_lower_bound: circle too close to a vortex");
        g[i][j] = (1 - tx) * ((1 - ty) * g00[i][j] + ty * g01[i][j]) +
                  tx * ((1 - ty) * g10[i][j] + ty * g11[i][j]);
      }
  };

  std::vector<double> parts(samples);
  double winding_sum = 0.0;
  double prev_angle = 0.0;
  double first_angle = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double phi = 2.0 * kPi * s / samples;
    Point x = center;
    x[0] += radius * std::cos(phi);
    x[1] += radius * std::sin(phi);
    double g[2][2];
    grad_at(x, g);
    const double fro2 =
        g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1];
    parts[s] = std::pow(fro2, 0.5 * p) * (2.0 * kPi * radius / samples);

    // Winding of the bilinearly interpolated field along the circle.
    const double fxn = (x[0] - field.box.lo[0]) / h;
    const double fyn = (x[1] - field.box.lo[1]) / h;
    const int nx = std::clamp(int(std::floor(fxn)), 0, field.dims[0] - 2);
    const int ny = std::clamp(int(std::floor(fyn)), 0, field.dims[1] - 2);
    const double tx = fxn - nx, ty = fyn - ny;
    double vx = 0, vy = 0, ax, ay;
    field.vec(field.node_index(nx, ny), ax, ay);
    vx += (1 - tx) * (1 - ty) * ax;
    vy += (1 - tx) * (1 - ty) * ay;
    field.vec(field.node_index(nx + 1, ny), ax, ay);
    vx += tx * (1 - ty) * ax;
    vy += tx * (1 - ty) * ay;
    field.vec(field.node_index(nx, ny + 1), ax, ay);
    vx += (1 - tx) * ty * ax;
    vy += (1 - tx) * ty * ay;
    field.vec(field.node_index(nx + 1, ny + 1), ax, ay);
    vx += tx * ty * ax;
    vy += tx * ty * ay;
    const double ang = std::atan2(vy, vx);
    if (s == 0)
      first_angle = ang;
    else
      winding_sum += wrap_phase(ang - prev_angle);
    prev_angle = ang;
  }
  winding_sum += wrap_phase(first_angle - prev_angle);
  const long long winding = std::llround(winding_sum / (2.0 * kPi));

  const double lhs = pairwise_sum(std::move(parts));
  const Constants cst(2);
  const double ju_mass = cst.gamma_n * double(std::llabs(winding));  // |star Ju(A)|
  const double rhs = std::pow(2.0, p) * std::pow(ju_mass, p) / std::pow(2.0 * kPi * radius, p - 1.0);
  return {lhs, rhs};
}

std::pair<double, double> lemma_ai_check(const std::vector<long long>& a, double beta,
                                         double lambda) {
  if (!(beta > 1.0 && beta < 2.0)) throw std::invalid_argument("lemma_ai_check: beta out of (1,2)");
  if (!(lambda > 0.75 && lambda < 1.0))
    throw std::invalid_argument("lemma_ai_check: lambda out of (3/4, 1)");
  for (long long v : a)
    if (v < 0) throw std::invalid_argument("lemma_ai_check: entries must be nonnegative");

  const int K = int(a.size()) - 1;
  double lhs = 0.0, rhs = 0.0, lam_k = 1.0;
  long long S_k = 0;
  for (int k = 0; k <= K; ++k) {
    S_k += a[std::size_t(k)];
    const long long a_next = k + 1 <= K ? a[std::size_t(k + 1)] : 0;
    if (S_k > 0) {
      const double top = double(std::max<long long>(S_k - a_next, 0));
      lhs += std::pow(top, beta) / std::pow(double(S_k), beta - 1.0) * lam_k;
    }
    rhs += double(a[std::size_t(k)]) * lam_k;
    lam_k *= lambda;
  }
  rhs *= (2.0 * lambda - 1.0) / (2.0 * lambda);
  return {lhs, rhs};
}

}  // namespace gammaflow
