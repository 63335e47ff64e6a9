#include "gammaflow/geometry.hpp"

#include <algorithm>

namespace gammaflow {

double point_segment_distance(const Point& q, const Point& a, const Point& b) {
  Point ab = b - a;
  double len2 = ab.norm2();
  if (len2 == 0.0) return dist(q, a);
  double t = dot(q - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(q, a + t * ab);
}

}  // namespace gammaflow
