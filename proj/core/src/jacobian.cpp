#include "gammaflow/jacobian.hpp"

#include <cmath>

#include "gammaflow/constants.hpp"
#include "gammaflow/flat_norm.hpp"

namespace gammaflow {

namespace {

constexpr double kJumpGuard = 1e-9;

double guarded_jump(double t1, double t0) {
  const double d = wrap_phase(t1 - t0);
  if (std::abs(d) >= kPi - kJumpGuard)
    throw InvariantError("under-resolved field: edge phase jump within 1e-9 of pi");
  return d;
}

long long ring_winding(const LatticeField& f, const std::size_t (&loop)[4]) {
  double sum = 0.0;
  for (int k = 0; k < 4; ++k)
    sum += guarded_jump(f.phase(loop[(k + 1) % 4]), f.phase(loop[k]));
  const double w = sum / (2.0 * kPi);
  const long long m = std::llround(w);
  if (std::abs(w - double(m)) > 1e-6)
    throw InvariantError("ring winding did not land on an integer");
  return m;
}

}  // namespace

ZeroCurrent plaquette_vorticity(const LatticeField& field) {
  if (field.dim != 2) throw std::invalid_argument("plaquette_vorticity: 2-D fields only");
  if (field.target != Target::S1)
    throw std::invalid_argument("plaquette_vorticity: S1 fields only");
  ZeroCurrent out(2);
  const auto cd = field.cell_dims();
  for (int ix = 0; ix < cd[0]; ++ix)
    for (int iy = 0; iy < cd[1]; ++iy) {
      if (!field.cell_active(ix, iy)) continue;
      const std::size_t loop[4] = {field.node_index(ix, iy), field.node_index(ix + 1, iy),
                                   field.node_index(ix + 1, iy + 1),
                                   field.node_index(ix, iy + 1)};
      const long long m = ring_winding(field, loop);
      if (m != 0) out.add(field.cell_center(ix, iy), m);
    }
  return out;
}

OneCurrent face_vorticity_3d(const LatticeField& field) {
  if (field.dim != 3) throw std::invalid_argument("face_vorticity_3d: 3-D fields only");
  if (field.target != Target::S1)
    throw std::invalid_argument("face_vorticity_3d: S1 fields only");
  OneCurrent out(3);

  auto cube_center = [&](int i, int j, int k) {
    Point p = field.box.lo;
    p[0] += field.h * (i + 0.5);
    p[1] += field.h * (j + 0.5);
    p[2] += field.h * (k + 0.5);
    return p;
  };

  // Faces with normal axis a at corner (i,j,k) span axes b, c with (a,b,c)
  // cyclic; the ring is oriented right-handed around +e_a.
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    int lim[3];
    lim[a] = field.dims[a];
    lim[b] = field.dims[b] - 1;
    lim[c] = field.dims[c] - 1;
    int idx[3];
    for (idx[0] = 0; idx[0] < lim[0]; ++idx[0])
      for (idx[1] = 0; idx[1] < lim[1]; ++idx[1])
        for (idx[2] = 0; idx[2] < lim[2]; ++idx[2]) {
          int n10[3] = {idx[0], idx[1], idx[2]};
          n10[b] += 1;
          int n11[3] = {n10[0], n10[1], n10[2]};
          n11[c] += 1;
          int n01[3] = {idx[0], idx[1], idx[2]};
          n01[c] += 1;
          const std::size_t loop[4] = {
              field.node_index(idx[0], idx[1], idx[2]),
              field.node_index(n10[0], n10[1], n10[2]),
              field.node_index(n11[0], n11[1], n11[2]),
              field.node_index(n01[0], n01[1], n01[2])};
          const long long m = ring_winding(field, loop);
          if (m == 0) continue;
          int lo_cube[3] = {idx[0], idx[1], idx[2]};
          lo_cube[a] -= 1;
          out.add(cube_center(lo_cube[0], lo_cube[1], lo_cube[2]),
                  cube_center(idx[0], idx[1], idx[2]), m);
        }
  }
  return merged(out);
}

int degree_loop(const LatticeField& field, const std::vector<std::array<int, 3>>& loop) {
  if (loop.size() < 3) throw std::invalid_argument("degree_loop: need at least 3 nodes");
  const std::size_t n = loop.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& cur = loop[k];
    const auto& nxt = loop[(k + 1) % n];
    int manhattan = 0;
    for (int a = 0; a < 3; ++a) manhattan += std::abs(cur[a] - nxt[a]);
    if (manhattan == 0 && k + 1 == n) continue;  // explicitly closed input
    if (manhattan != 1) throw std::invalid_argument("degree_loop: non-adjacent consecutive nodes");
    sum += guarded_jump(field.phase(field.node_index(nxt[0], nxt[1], nxt[2])),
                        field.phase(field.node_index(cur[0], cur[1], cur[2])));
  }
  const double w = sum / (2.0 * kPi);
  const long long m = std::llround(w);
  if (std::abs(w - double(m)) > 1e-6)
    throw InvariantError("degree_loop: winding did not land on an integer");
  return int(m);
}

double jform_max_ratio(const LatticeField& field) {
  if (field.target != Target::S1)
    throw std::invalid_argument("jform_max_ratio: S1 fields only");
  const auto cd = field.cell_dims();
  const std::size_t step[3] = {std::size_t(field.dims[1]) * field.dims[2],
                               std::size_t(field.dims[2]), 1};
  double worst = 0.0;
  for (int ix = 0; ix < cd[0]; ++ix)
    for (int iy = 0; iy < cd[1]; ++iy)
      for (int iz = 0; iz < (field.dim == 3 ? cd[2] : 1); ++iz) {
        if (!field.cell_active(ix, iy, iz)) continue;
        const std::size_t i0 = field.node_index(ix, iy, iz);
        double u1, u2;
        field.vec(i0, u1, u2);
        double j2 = 0.0, g2 = 0.0;
        for (int a = 0; a < field.dim; ++a) {
          double v1, v2;
          field.vec(i0 + step[a], v1, v2);
          const double ju = u1 * v2 - u2 * v1;  // = sin(theta1 - theta0) on S1
          j2 += ju * ju;
          g2 += (v1 - u1) * (v1 - u1) + (v2 - u2) * (v2 - u2);
        }
        if (g2 > 1e-28) worst = std::max(worst, std::sqrt(j2 / g2));
      }
  return worst;
}

double continuity_ratio(const LatticeField& u, const LatticeField& v, double p, double q) {
  if (u.dims != v.dims) throw std::invalid_argument("continuity_ratio: fields on different lattices");
  if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-9)
    throw std::invalid_argument("continuity_ratio: need (n-1)/p + 1/q = 1 with n = 2");
  const double denom = lq_distance(u, v, q) * (lp_gradient_norm(u, p) + lp_gradient_norm(v, p));
  if (denom < 1e-14) throw std::invalid_argument("continuity_ratio: identical fields");
  const Domain omega(u.box);
  const double num = flat_distance(plaquette_vorticity(u), plaquette_vorticity(v), omega);
  return num / denom;
}

}  // namespace gammaflow
