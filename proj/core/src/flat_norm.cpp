#include "gammaflow/flat_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gammaflow {

namespace {

// Feet computed on curved boundaries can round to the strict interior; walk
// outward by ulps so the witness boundary stays clean.
Point foot_outside(const Domain& omega, const Point& x) {
  Point f = omega.boundary_foot(x);
  if (omega.kind == Domain::Kind::Box) return f;  // exact by construction
  const Point c = omega.disk.center;
  int guard = 0;
  while (omega.contains_strict(f) && guard++ < 64) {
    for (int i = 0; i < f.dim; ++i) {
      double d = f[i] - c[i];
      if (d != 0.0) f[i] = std::nextafter(f[i], d > 0 ? std::numeric_limits<double>::infinity()
                                                      : -std::numeric_limits<double>::infinity());
    }
  }
  return f;
}

// Shortest-augmenting-path solution of the assignment problem with an
// implicit cost callback; exact optimum up to floating roundoff.
template <class Cost>
std::vector<int> solve_assignment(int n, Cost cost) {
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  // row_of_col -> col_of_row
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace

FlatNormResult flat_norm_zero(const ZeroCurrent& input, const Domain& omega) {
  ZeroCurrent t = merged(restricted(input, omega));

  long long units = 0;
  for (const auto& a : t.atoms) units += std::llabs(a.m);
  if (units > kFlatNormSizeCap)
    throw std::invalid_argument("flat_norm_zero: instance above the size cap");

  std::vector<Point> pos, neg;
  for (const auto& a : t.atoms) {
    for (long long k = 0; k < std::llabs(a.m); ++k)
      (a.m > 0 ? pos : neg).push_back(a.p);
  }
  const int np = int(pos.size()), nn = int(neg.size());

  FlatNormResult res;
  res.witness.dim = t.dim;
  if (np + nn == 0) return res;

  std::vector<double> pos_bd(np), neg_bd(nn);
  for (int i = 0; i < np; ++i) pos_bd[i] = omega.boundary_distance(pos[i]);
  for (int j = 0; j < nn; ++j) neg_bd[j] = omega.boundary_distance(neg[j]);

  // Square matrix: rows = positives then nn dummies, cols = negatives then
  // np dummies. A positive in a dummy column routes to the boundary; a dummy
  // row on a real negative routes the boundary to it; dummy-dummy is free.
  const int n = np + nn;
  auto cost = [&](int i, int j) -> double {
    const bool ri = i < np, rj = j < nn;
    if (ri && rj) return dist(pos[i], neg[j]);
    if (ri) return pos_bd[i];
    if (rj) return neg_bd[j];
    return 0.0;
  };
  std::vector<int> match = solve_assignment(n, cost);

  for (int i = 0; i < n; ++i) {
    int j = match[i];
    const bool ri = i < np, rj = j < nn;
    if (ri && rj) {
      res.witness.add(neg[j], pos[i], 1);  // boundary +1 at the positive end
    } else if (ri) {
      res.witness.add(foot_outside(omega, pos[i]), pos[i], 1);
    } else if (rj) {
      res.witness.add(neg[j], foot_outside(omega, neg[j]), 1);
    }
  }
  res.witness = merged(res.witness);
  res.value = mass_one(res.witness);
  return res;
}

std::optional<PairMin> pair_min(const ZeroCurrent& input, const Domain& omega) {
  ZeroCurrent t = merged(restricted(input, omega));
  if (t.empty()) return std::nullopt;

  std::vector<Point> pos, neg;
  for (const auto& a : t.atoms) (a.m > 0 ? pos : neg).push_back(a.p);

  std::optional<PairMin> best;
  auto consider = [&](const PairMin& cand) {
    if (!best || cand.distance < best->distance ||
        (cand.distance == best->distance &&
         (cand.y < best->y || (cand.y == best->y && cand.z < best->z))))
      best = cand;
  };

  for (const auto& y : pos)
    for (const auto& z : neg) consider({false, y, false, z, dist(y, z)});
  for (const auto& y : pos)
    consider({false, y, true, foot_outside(omega, y), omega.boundary_distance(y)});
  for (const auto& z : neg)
    consider({true, foot_outside(omega, z), false, z, omega.boundary_distance(z)});
  return best;
}

double flat_distance(const ZeroCurrent& t1, const ZeroCurrent& t2, const Domain& omega) {
  return flat_norm_zero(t1 - t2, omega).value;
}

}  // namespace gammaflow
