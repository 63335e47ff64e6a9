#ifndef GAMMAFLOW_GEOMETRY_HPP
#define GAMMAFLOW_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gammaflow {

/// Point in R^d, d in {2,3}. Unused coordinates stay 0 so that bit-exact
/// comparison and lexicographic ordering work uniformly.
struct Point {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 2;

  Point() = default;
  Point(double x, double y) : c{x, y, 0.0}, dim(2) {}
  Point(double x, double y, double z) : c{x, y, z}, dim(3) {}

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  friend Point operator+(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < a.dim; ++i) r.c[i] += b.c[i];
    return r;
  }
  friend Point operator-(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < a.dim; ++i) r.c[i] -= b.c[i];
    return r;
  }
  friend Point operator*(double s, const Point& a) {
    Point r = a;
    for (int i = 0; i < a.dim; ++i) r.c[i] *= s;
    return r;
  }
  friend bool operator==(const Point& a, const Point& b) {
    return a.dim == b.dim && a.c == b.c;
  }
  friend bool operator<(const Point& a, const Point& b) { return a.c < b.c; }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += c[i] * c[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
};

inline double dist(const Point& a, const Point& b) { return (a - b).norm(); }

inline double dot(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline Point cross(const Point& a, const Point& b) {
  Point r(a.c[1] * b.c[2] - a.c[2] * b.c[1],
          a.c[2] * b.c[0] - a.c[0] * b.c[2],
          a.c[0] * b.c[1] - a.c[1] * b.c[0]);
  return r;
}

/// Distance from q to the segment [a,b] (degenerate a==b allowed).
double point_segment_distance(const Point& q, const Point& a, const Point& b);

/// Axis-aligned open box domain. Atoms exactly on the boundary count as
/// outside (the indicator convention of the restriction operators).
struct BoxDomain {
  Point lo, hi;

  BoxDomain() = default;
  BoxDomain(Point lo_, Point hi_) : lo(lo_), hi(hi_) {
    if (lo.dim != hi.dim) throw std::invalid_argument("BoxDomain: mixed dimensions");
    for (int i = 0; i < lo.dim; ++i)
      if (!(lo[i] < hi[i])) throw std::invalid_argument("BoxDomain: lo must be < hi componentwise");
  }
  int dim() const { return lo.dim; }
  double side(int i) const { return hi[i] - lo[i]; }
  double diameter() const { return dist(lo, hi); }
  double volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= side(i);
    return v;
  }

  bool contains_strict(const Point& x) const {
    for (int i = 0; i < dim(); ++i)
      if (!(lo[i] < x[i] && x[i] < hi[i])) return false;
    return true;
  }
  /// min over the 2d faces; negative outside.
  double boundary_distance(const Point& x) const {
    double d = hi[0] - lo[0];
    for (int i = 0; i < dim(); ++i) d = std::min(d, std::min(x[i] - lo[i], hi[i] - x[i]));
    return d;
  }
  /// Nearest boundary point; ties broken by smallest axis index, lo side first.
  /// The snapped coordinate is exact, so the foot never tests as interior.
  Point boundary_foot(const Point& x) const {
    int best_axis = 0;
    bool best_lo = true;
    double best = x[0] - lo[0];
    for (int i = 0; i < dim(); ++i) {
      if (x[i] - lo[i] < best) { best = x[i] - lo[i]; best_axis = i; best_lo = true; }
      if (hi[i] - x[i] < best) { best = hi[i] - x[i]; best_axis = i; best_lo = false; }
    }
    Point f = x;
    f[best_axis] = best_lo ? lo[best_axis] : hi[best_axis];
    return f;
  }
};

/// Open disk domain (2-D). Used by the minimizer's flat-distance bookkeeping;
/// convex, so straight-segment witnesses remain valid.
struct DiskDomain {
  Point center;
  double radius = 1.0;

  DiskDomain() = default;
  DiskDomain(Point c, double r) : center(c), radius(r) {
    if (!(r > 0)) throw std::invalid_argument("DiskDomain: radius must be positive");
  }
  int dim() const { return center.dim; }
  double diameter() const { return 2 * radius; }
  bool contains_strict(const Point& x) const { return dist(x, center) < radius; }
  double boundary_distance(const Point& x) const { return radius - dist(x, center); }
  Point boundary_foot(const Point& x) const {
    Point d = x - center;
    double nd = d.norm();
    if (nd == 0.0) {  // center: any foot works; pick +x deterministically
      Point f = center;
      f[0] += radius;
      return f;
    }
    return center + (radius / nd) * d;
  }
};

/// Convex domain dispatch. Core current operations are specified on boxes;
/// disks ride along behind the same three queries.
struct Domain {
  enum class Kind { Box, Disk } kind = Kind::Box;
  BoxDomain box;
  DiskDomain disk;

  Domain() = default;
  Domain(const BoxDomain& b) : kind(Kind::Box), box(b) {}
  Domain(const DiskDomain& d) : kind(Kind::Disk), disk(d) {}

  int dim() const { return kind == Kind::Box ? box.dim() : disk.dim(); }
  double diameter() const { return kind == Kind::Box ? box.diameter() : disk.diameter(); }
  bool contains_strict(const Point& x) const {
    return kind == Kind::Box ? box.contains_strict(x) : disk.contains_strict(x);
  }
  double boundary_distance(const Point& x) const {
    return kind == Kind::Box ? box.boundary_distance(x) : disk.boundary_distance(x);
  }
  Point boundary_foot(const Point& x) const {
    return kind == Kind::Box ? box.boundary_foot(x) : disk.boundary_foot(x);
  }
};

/// Raised when a scientific invariant check fails (exit code 2 in the CLI,
/// as opposed to usage errors which map to exit code 1).
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gammaflow

#endif
