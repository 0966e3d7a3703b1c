#pragma once

#include <array>
#include <vector>

namespace fractrace {

// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, 16> node;
  std::array<double, 16> weight;
};
const GaussLegendre16& gl16();

// Upper incomplete gamma Gamma(a, x) (non-normalized).
double gamma_upper(double a, double x);

// Large-argument series for the isotropic 2a-stable density at unit time,
//   K_1(r) = sum_{k>=1} (-1)^{k+1} c_k(alpha, n) r^{-(n + 2 k alpha)},
//   c_k = Gamma(k a + 1) sin(pi k a) Gamma(k a + n/2) 4^{k a} / (k! pi^{1+n/2}),
// obtained by expanding the one-sided stable subordinator density under the
// Gaussian subordination representation. Convergent for 0 < alpha < 1/2,
// asymptotic otherwise; remainder is estimated by the first dropped term.
class StableTailSeries {
 public:
  StableTailSeries(double alpha, int dim, int terms = 4);

  // Density at radius r (unit time). err receives a remainder estimate.
  double density(double r, double* err = nullptr) const;

  // Mass of {|x| > R} at unit time: integrates the series termwise.
  double tail_mass(double R, double* err = nullptr) const;

  // Smallest radius at which the remainder estimate of tail_mass drops
  // below tol (relative to the leading term); used to pick cutoffs.
  double radius_for_tail_tol(double tol) const;

  double alpha() const { return alpha_; }
  int dim() const { return dim_; }

 private:
  double alpha_;
  int dim_;
  std::vector<double> coeff_;  // signed c_k
};

// Ordinary least squares y ~ a + b x. Returns slope, intercept and the
// 95% half-width of the slope (Student t).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_halfwidth = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation (average ranks on ties).
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fractrace
