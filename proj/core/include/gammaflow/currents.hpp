#ifndef GAMMAFLOW_CURRENTS_HPP
#define GAMMAFLOW_CURRENTS_HPP

#include <cstdint>
#include <vector>

#include "gammaflow/geometry.hpp"

namespace gammaflow {

/// Finite signed atomic measure: points with nonzero integer multiplicities.
struct ZeroCurrent {
  struct Atom {
    Point p;
    long long m = 0;
  };

  int dim = 2;
  std::vector<Atom> atoms;

  ZeroCurrent() = default;
  explicit ZeroCurrent(int d) : dim(d) {}

  void add(const Point& p, long long m) {
    if (m != 0) atoms.push_back({p, m});
  }
  bool empty() const { return atoms.empty(); }
};

/// Finite sum of oriented segments a -> b with nonzero integer multiplicities.
/// Orientation convention: the boundary of (a, b, m) is +m at b and -m at a.
struct OneCurrent {
  struct Segment {
    Point a, b;
    long long m = 0;
  };

  int dim = 2;
  std::vector<Segment> segments;

  OneCurrent() = default;
  explicit OneCurrent(int d) : dim(d) {}

  void add(const Point& a, const Point& b, long long m);
  bool empty() const { return segments.empty(); }
};

/// Co-located atoms combined (bit-exact coordinate comparison), zero
/// multiplicities dropped, atoms sorted lexicographically.
ZeroCurrent merged(const ZeroCurrent& t);

/// Parallel identical segments combined, zeros dropped, canonical order.
OneCurrent merged(const OneCurrent& s);

/// Atoms strictly inside the domain (open-domain convention).
ZeroCurrent restricted(const ZeroCurrent& t, const Domain& omega);

ZeroCurrent operator+(const ZeroCurrent& a, const ZeroCurrent& b);
ZeroCurrent operator-(const ZeroCurrent& a, const ZeroCurrent& b);
OneCurrent operator+(const OneCurrent& a, const OneCurrent& b);

/// Sum of |multiplicity| over atoms strictly inside omega.
double mass_zero(const ZeroCurrent& t, const Domain& omega);

/// Total mass ignoring any domain restriction.
double mass_zero(const ZeroCurrent& t);

/// Sum of |multiplicity| * |b - a|.
double mass_one(const OneCurrent& s);

/// Boundary restricted to omega: +m at b, -m at a for endpoints strictly
/// inside; endpoints on the boundary contribute nothing. Result is merged.
ZeroCurrent boundary_one(const OneCurrent& s, const Domain& omega);

/// Boundary with no restriction (every endpoint counts). Used for closedness
/// checks of curves in the full ambient space.
ZeroCurrent boundary_one(const OneCurrent& s);

}  // namespace gammaflow

#endif
