#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractrace {

// Points in R^n, n <= 3. dim is carried by the owning container.
using SpacePoint = std::array<double, 3>;

inline SpacePoint make_point(double x0, double x1 = 0.0, double x2 = 0.0) {
  return {x0, x1, x2};
}

inline double dist(const SpacePoint& a, const SpacePoint& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double norm(const SpacePoint& a, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

// Space-time point (t, x) in R_+^{1+n}.
struct SpaceTimePoint {
  double t = 0.0;
  SpacePoint x{0.0, 0.0, 0.0};
};

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Surface area of the unit sphere S^{n-1}.
inline double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::invalid_argument("sphere_area: dim must be 1..3");
  }
}

// Volume of the unit ball in R^n.
inline double ball_volume(int n) { return sphere_area(n) / n; }

// Conjugate exponent p' = p/(p-1).
inline double conjugate_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("exponent p must lie in (1, inf)");
  return p / (p - 1.0);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

}  // namespace fractrace
