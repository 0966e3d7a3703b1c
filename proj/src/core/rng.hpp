#pragma once

#include <cstdint>
#include <random>

namespace fractrace {

// Deterministic random source. All variate transforms are implemented here
// rather than through std::*_distribution so that a fixed seed yields the
// same stream regardless of standard-library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Strictly positive uniform, for log transforms.
  double uniform01_pos() {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return u;
  }

  double exponential() { return -std::log(uniform01_pos()); }

  // Box-Muller, one value per call (no cached spare).
  double normal();

  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(eng_() % n);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fractrace
