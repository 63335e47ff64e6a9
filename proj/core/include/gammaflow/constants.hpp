#ifndef GAMMAFLOW_CONSTANTS_HPP
#define GAMMAFLOW_CONSTANTS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gammaflow {

inline constexpr double kPi = std::numbers::pi;

/// Area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
inline double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Derived constants for target dimension n (maps into S^{n-1}).
struct Constants {
  int n;
  double omega;           // H^{n-1}(S^{n-1})
  double gamma_n;         // omega / n
  double limit_constant;  // (n-1)^{n/2} * omega

  explicit Constants(int target_dim) : n(target_dim) {
    if (n < 2) throw std::invalid_argument("Constants: target dimension must be >= 2");
    omega = sphere_area(n);
    gamma_n = omega / n;
    limit_constant = std::pow(double(n - 1), 0.5 * n) * omega;
  }
};

}  // namespace gammaflow

#endif
