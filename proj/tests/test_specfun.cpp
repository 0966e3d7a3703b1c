#include <doctest.h>

#include <cmath>

#include "core/common.hpp"
#include "core/specfun.hpp"

using namespace fractrace;

TEST_CASE("gauss-legendre 16 integrates polynomials and oscillations") {
  const auto& G = gl16();
  double sw = 0.0, sx2 = 0.0, cosv = 0.0;
  for (int i = 0; i < 16; ++i) {
    sw += G.weight[i];
    sx2 += G.weight[i] * G.node[i] * G.node[i];
    cosv += G.weight[i] * std::cos(3.0 * G.node[i]);
  }
  CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sx2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(cosv == doctest::Approx(2.0 * std::sin(3.0) / 3.0).epsilon(1e-13));
}

TEST_CASE("upper incomplete gamma reduces to the exponential at a = 1") {
  CHECK(gamma_upper(1.0, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-13));
  CHECK(gamma_upper(0.5, 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("stable tail series reproduces the Poisson kernel tail") {
  // alpha = 1/2, n = 1: mass of {|x| > R} at unit time is 1 - (2/pi) atan R
  StableTailSeries s(0.5, 1, 6);
  for (double R : {5.0, 10.0, 30.0}) {
    const double exact = 1.0 - (2.0 / kPi) * std::atan(R);
    double err = 0.0;
    const double approx = s.tail_mass(R, &err);
    CHECK(std::abs(approx - exact) <= std::max(err * 1.5, 1e-12));
  }
  // density tail: K_1(r) = (1/pi) / (1 + r^2)
  for (double r : {6.0, 15.0, 40.0}) {
    const double exact = (1.0 / kPi) / (1.0 + r * r);
    double err = 0.0;
    const double approx = s.density(r, &err);
    CHECK(std::abs(approx - exact) <= std::max(1.5 * err, 1e-14));
  }
}

TEST_CASE("stable tail series matches reference values") {
  // frozen from high-precision quadrature of the Fourier inversion
  struct Row {
    double alpha;
    int n;
    double R;
    double tail;
  };
  const Row rows[] = {
      {0.25, 1, 30.0, 0.13550631412},
      {0.75, 1, 8.0, 0.0222635465279},
      {0.6, 2, 10.0, 0.06021329944},
  };
  for (const Row& r : rows) {
    StableTailSeries s(r.alpha, r.n, r.alpha < 0.5 ? 10 : 6);
    double err = 0.0;
    const double v = s.tail_mass(r.R, &err);
    CHECK(std::abs(v - r.tail) <= std::max(2.0 * err, 2e-6));
  }
}

TEST_CASE("line fit recovers slope and flags noise") {
  std::vector<double> x, y;
  for (int i = 0; i < 6; ++i) {
    x.push_back(i);
    y.push_back(3.0 + 2.0 * i);
  }
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.slope_halfwidth < 1e-10);
}

TEST_CASE("spearman rank correlation") {
  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(std::abs(spearman_rho({1, 2, 3, 4, 5, 6}, {2, 1, 4, 3, 6, 5})) < 1.0);
}
