#include "core/rng.hpp"

#include <cmath>

#include "core/common.hpp"

namespace fractrace {

double Rng::normal() {
  const double u1 = uniform01_pos();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace fractrace
