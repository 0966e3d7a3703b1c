#include "core/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "core/common.hpp"

namespace fractrace {

namespace {

GaussLegendre16 make_gl16() {
  GaussLegendre16 r{};
  const int n = 16;
  for (int i = 0; i < n / 2; ++i) {
    // Newton on P_16 from the Chebyshev initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.node[i] = -x;
    r.node[n - 1 - i] = x;
    r.weight[i] = w;
    r.weight[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const GaussLegendre16& gl16() {
  static const GaussLegendre16 rule = make_gl16();
  return rule;
}

double gamma_upper(double a, double x) {
  if (x <= 0.0) return boost::math::tgamma(a);
  return boost::math::tgamma(a, x);
}

StableTailSeries::StableTailSeries(double alpha, int dim, int terms)
    : alpha_(alpha), dim_(dim) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("stable tail series needs alpha in (0,1)");
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1..3");
  coeff_.resize(terms);
  for (int k = 1; k <= terms; ++k) {
    const double ka = k * alpha;
    const double c = boost::math::tgamma(ka + 1.0) * std::sin(kPi * ka) *
                     boost::math::tgamma(ka + 0.5 * dim) * std::pow(4.0, ka) /
                     (boost::math::tgamma(k + 1.0) *
                      std::pow(kPi, 1.0 + 0.5 * dim));
    coeff_[k - 1] = (k % 2 == 1 ? c : -c);
  }
}

double StableTailSeries::density(double r, double* err) const {
  double v = 0.0;
  double last = 0.0;
  for (std::size_t k = 1; k <= coeff_.size(); ++k) {
    last = coeff_[k - 1] * std::pow(r, -(dim_ + 2.0 * k * alpha_));
    v += last;
  }
  if (err) *err = std::abs(last);
  return v;
}

double StableTailSeries::tail_mass(double R, double* err) const {
  // integral over |x| > R of c_k |x|^{-(n+2ka)}: c_k omega_{n-1} R^{-2ka}/(2ka)
  const double omega = sphere_area(dim_);
  double v = 0.0;
  double last = 0.0;
  for (std::size_t k = 1; k <= coeff_.size(); ++k) {
    const double e = 2.0 * k * alpha_;
    last = coeff_[k - 1] * omega * std::pow(R, -e) / e;
    v += last;
  }
  if (err) *err = std::abs(last);
  return v;
}

double StableTailSeries::radius_for_tail_tol(double tol) const {
  double R = 4.0;
  for (int i = 0; i < 200; ++i) {
    double err = 0.0;
    const double t = tail_mass(R, &err);
    if (err <= tol * std::max(1e-30, std::abs(t)) + 0.25 * tol) return R;
    R *= 1.5;
  }
  return R;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw std::invalid_argument("fit_line: need >= 3 points");
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ybar - f.slope * xbar;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  // two-sided 97.5% Student t quantiles for small dof
  static const double tq[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447,
                              2.365,  2.306, 2.262, 2.228, 2.201, 2.179};
  const std::size_t dof = n - 2;
  const double t = dof <= 12 ? tq[dof - 1] : 1.98;
  f.slope_halfwidth = t * std::sqrt(ss / dof / sxx);
  return f;
}

namespace {
std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman_rho: size mismatch");
  const auto ra = ranks(a), rb = ranks(b);
  const std::size_t n = a.size();
  const double mean = 0.5 * (n + 1);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
    sab += (ra[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace fractrace
