#include "gammaflow/currents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace gammaflow {

void OneCurrent::add(const Point& a, const Point& b, long long m) {
  if (m == 0) return;
  if (a == b) throw std::invalid_argument("OneCurrent: degenerate segment (a == b)");
  segments.push_back({a, b, m});
}

ZeroCurrent merged(const ZeroCurrent& t) {
  std::map<std::array<double, 3>, long long> acc;
  for (const auto& a : t.atoms) acc[a.p.c] += a.m;
  ZeroCurrent r(t.dim);
  for (const auto& [c, m] : acc) {
    if (m == 0) continue;
    Point p;
    p.c = c;
    p.dim = t.dim;
    r.atoms.push_back({p, m});
  }
  return r;
}

OneCurrent merged(const OneCurrent& s) {
  std::map<std::pair<std::array<double, 3>, std::array<double, 3>>, long long> acc;
  for (const auto& seg : s.segments) acc[{seg.a.c, seg.b.c}] += seg.m;
  OneCurrent r(s.dim);
  for (const auto& [key, m] : acc) {
    if (m == 0) continue;
    Point a, b;
    a.c = key.first;
    b.c = key.second;
    a.dim = b.dim = s.dim;
    r.segments.push_back({a, b, m});
  }
  return r;
}

ZeroCurrent restricted(const ZeroCurrent& t, const Domain& omega) {
  ZeroCurrent r(t.dim);
  for (const auto& a : t.atoms)
    if (omega.contains_strict(a.p)) r.atoms.push_back(a);
  return r;
}

ZeroCurrent operator+(const ZeroCurrent& a, const ZeroCurrent& b) {
  ZeroCurrent r(a.dim);
  r.atoms = a.atoms;
  r.atoms.insert(r.atoms.end(), b.atoms.begin(), b.atoms.end());
  return merged(r);
}

ZeroCurrent operator-(const ZeroCurrent& a, const ZeroCurrent& b) {
  ZeroCurrent r(a.dim);
  r.atoms = a.atoms;
  for (const auto& atom : b.atoms) r.atoms.push_back({atom.p, -atom.m});
  return merged(r);
}

OneCurrent operator+(const OneCurrent& a, const OneCurrent& b) {
  OneCurrent r(a.dim);
  r.segments = a.segments;
  r.segments.insert(r.segments.end(), b.segments.begin(), b.segments.end());
  return merged(r);
}

double mass_zero(const ZeroCurrent& t, const Domain& omega) {
  double m = 0;
  for (const auto& a : t.atoms)
    if (omega.contains_strict(a.p)) m += double(std::llabs(a.m));
  return m;
}

double mass_zero(const ZeroCurrent& t) {
  double m = 0;
  for (const auto& a : t.atoms) m += double(std::llabs(a.m));
  return m;
}

double mass_one(const OneCurrent& s) {
  double m = 0;
  for (const auto& seg : s.segments) m += double(std::llabs(seg.m)) * dist(seg.a, seg.b);
  return m;
}

ZeroCurrent boundary_one(const OneCurrent& s, const Domain& omega) {
  ZeroCurrent r(s.dim);
  for (const auto& seg : s.segments) {
    if (omega.contains_strict(seg.b)) r.atoms.push_back({seg.b, seg.m});
    if (omega.contains_strict(seg.a)) r.atoms.push_back({seg.a, -seg.m});
  }
  return merged(r);
}

ZeroCurrent boundary_one(const OneCurrent& s) {
  ZeroCurrent r(s.dim);
  for (const auto& seg : s.segments) {
    r.atoms.push_back({seg.b, seg.m});
    r.atoms.push_back({seg.a, -seg.m});
  }
  return merged(r);
}

}  // namespace gammaflow
