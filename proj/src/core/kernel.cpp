#include "core/kernel.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "core/rng.hpp"

namespace fractrace {

namespace {

double prefactor(int n) {
  switch (n) {
    case 1: return 1.0 / kPi;
    case 2: return 1.0 / (2.0 * kPi);
    default: return 1.0 / (2.0 * kPi * kPi);
  }
}

// omega_{n-1}/(2pi)^n * int_R^inf rho^{n-1} exp(-t rho^{2a}) drho
double fourier_tail(double alpha, int n, double t, double R) {
  const double a = n / (2.0 * alpha);
  const double z = t * std::pow(R, 2.0 * alpha);
  if (z > 690.0) return 0.0;
  return prefactor(n) * gamma_upper(a, z) * std::pow(t, -a) / (2.0 * alpha);
}

double auto_cutoff(double alpha, int n, double t, double tail_tol) {
  double R = std::pow(std::max(1.0, (std::log(1.0 / std::max(tail_tol, 1e-300)) + 4.0) / t),
                      1.0 / (2.0 * alpha));
  R = std::clamp(R, 2.0, 1e12);
  while (R < 1e12 && fourier_tail(alpha, n, t, R) > tail_tol) R *= 1.4142135623730951;
  return R;
}

double integrand(int n, double alpha, double t, double r, double rho) {
  const double damp = std::exp(-t * std::pow(rho, 2.0 * alpha));
  switch (n) {
    case 1:
      return std::cos(r * rho) * damp;
    case 2:
      return boost::math::cyl_bessel_j(0, r * rho) * damp * rho;
    default: {
      const double z = r * rho;
      const double sinc = z < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
      return sinc * damp * rho * rho;
    }
  }
}

// Composite GL16 over dyadic blocks of [0, R]; panel counts resolve both the
// oscillation (rate r) and the exponential decay, then double with `level`.
double panel_quadrature(int n, double alpha, double t, double r, double R,
                        int level, double node_scale) {
  const auto& G = gl16();
  double total = 0.0;
  double hi = R;
  const int n_blocks = 44;
  for (int kb = 0; kb < n_blocks; ++kb) {
    const double lo = (kb == n_blocks - 1) ? 0.0 : hi * 0.5;
    if (t * std::pow(lo, 2.0 * alpha) <= 70.0) {
      const double W = hi - lo;
      const double osc = W * r / 8.0;
      const double efold =
          t * (std::pow(hi, 2.0 * alpha) - std::pow(lo, 2.0 * alpha)) / 8.0;
      double m_d = std::ceil(std::max({1.0, osc, efold}) * node_scale);
      m_d = std::min(m_d * static_cast<double>(1L << level), 4.0e6);
      const long m = static_cast<long>(m_d);
      const double w = W / m;
      for (long j = 0; j < m; ++j) {
        const double a0 = lo + j * w;
        double s = 0.0;
        for (int q = 0; q < 16; ++q)
          s += G.weight[q] * integrand(n, alpha, t, r, a0 + 0.5 * w * (1.0 + G.node[q]));
        total += 0.5 * w * s;
      }
    }
    hi = lo;
  }
  return total;
}

double gamma_half_odd(int n) {
  // Gamma((n+1)/2) for n = 1..3
  switch (n) {
    case 1: return 1.0;
    case 2: return 0.5 * std::sqrt(kPi);
    default: return 1.0;
  }
}

}  // namespace

void KernelSpec::validate() const {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw std::invalid_argument("kernel: alpha must lie in (0, 1]");
  if (dim < 1 || dim > 3) throw std::invalid_argument("kernel: dim must be 1..3");
  if (freq_nodes < 64) throw std::invalid_argument("kernel: freq_nodes must be >= 64");
  if (freq_cutoff < 0.0) throw std::invalid_argument("kernel: freq_cutoff must be >= 0");
}

double closed_form_radial(double alpha, int dim, double t, double r) {
  if (alpha == 1.0)
    return std::pow(4.0 * kPi * t, -0.5 * dim) * std::exp(-r * r / (4.0 * t));
  // alpha = 1/2: Poisson kernel
  return gamma_half_odd(dim) * std::pow(kPi, -0.5 * (dim + 1)) * t *
         std::pow(t * t + r * r, -0.5 * (dim + 1));
}

KernelValue eval_closed_form(const KernelSpec& spec, double t, const SpacePoint& x) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (!spec.has_closed_form())
    throw std::invalid_argument("kernel: closed form requires alpha in {1/2, 1}");
  KernelValue v;
  v.value = closed_form_radial(spec.alpha, spec.dim, t, norm(x, spec.dim));
  v.abs_error_bound = 16.0 * std::numeric_limits<double>::epsilon() * (v.value + 1e-300);
  v.converged = true;
  return v;
}

KernelValue eval_numeric_radial(const KernelSpec& spec, double t, double r, double tol) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (tol <= 0.0) tol = spec.default_tol();
  const int n = spec.dim;
  const double alpha = spec.alpha;

  const double R =
      spec.freq_cutoff > 0.0 ? spec.freq_cutoff : auto_cutoff(alpha, n, t, 0.25 * tol);
  const double tail = fourier_tail(alpha, n, t, R);
  const double node_scale = std::max(0.25, spec.freq_nodes / 256.0);

  const double pref = prefactor(n);
  double prev = pref * panel_quadrature(n, alpha, t, r, R, 0, node_scale);
  double cur = prev;
  double err_est = kInf;
  for (int level = 1; level <= 7; ++level) {
    cur = pref * panel_quadrature(n, alpha, t, r, R, level, node_scale);
    err_est = std::abs(cur - prev);
    prev = cur;
    if (err_est <= 0.5 * tol) break;
  }
  KernelValue v;
  v.value = cur;
  v.abs_error_bound = 1.25 * err_est + tail +
                      32.0 * std::numeric_limits<double>::epsilon() * (std::abs(cur) + pref);
  v.converged = v.abs_error_bound <= tol;
  return v;
}

KernelValue eval_numeric(const KernelSpec& spec, double t, const SpacePoint& x, double tol) {
  return eval_numeric_radial(spec, t, norm(x, spec.dim), tol);
}

namespace {

// adaptive radial integral of f over [0, R], composite GL16 with doubling
template <typename F>
double radial_integral(const F& f, double R, double tol, double* err_out) {
  const auto& G = gl16();
  double prev = 0.0;
  double err = kInf;
  for (int level = 0; level <= 8; ++level) {
    const long m = 24L << level;
    const double w = R / m;
    double total = 0.0;
    for (long j = 0; j < m; ++j) {
      const double a0 = j * w;
      double s = 0.0;
      for (int q = 0; q < 16; ++q) s += G.weight[q] * f(a0 + 0.5 * w * (1.0 + G.node[q]));
      total += 0.5 * w * s;
    }
    if (level > 0) {
      err = std::abs(total - prev);
      prev = total;
      if (err <= tol) break;
    } else {
      prev = total;
    }
  }
  if (err_out) *err_out = err;
  return prev;
}

}  // namespace

MassReport check_mass(const KernelSpec& spec, double t, double spatial_cutoff, double tol) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  const int n = spec.dim;
  const double alpha = spec.alpha;
  const double tscale = std::pow(t, 1.0 / (2.0 * alpha));

  KernelEvaluator ev(spec);
  MassReport rep;

  // unit-time coordinates: mass(|x| <= c) = omega int_0^{c/tscale} K_1(s) s^{n-1} ds
  double rho_cut;
  double tail, tail_err = 0.0;
  if (alpha == 1.0) {
    rho_cut = spatial_cutoff > 0.0 ? spatial_cutoff / tscale : 12.0;
    tail = gamma_upper(0.5 * n, rho_cut * rho_cut / 4.0) / boost::math::tgamma(0.5 * n);
    tail_err = 8.0 * std::numeric_limits<double>::epsilon();
  } else {
    StableTailSeries series(alpha, n, alpha < 0.5 ? 10 : 6);
    rho_cut = spatial_cutoff > 0.0 ? spatial_cutoff / tscale
                                   : std::clamp(series.radius_for_tail_tol(0.25 * tol), 8.0, 1e5);
    tail = series.tail_mass(rho_cut, &tail_err);
  }

  double quad_err = 0.0;
  const double omega = sphere_area(n);
  const double inner = omega * radial_integral(
                                   [&](double s) {
                                     return ev.radial(1.0, s) * std::pow(s, n - 1.0);
                                   },
                                   rho_cut, 0.25 * tol / omega, &quad_err);

  rep.mass = inner + tail;
  rep.defect = std::abs(rep.mass - 1.0);
  rep.error_bound = omega * quad_err + tail_err + (spec.has_closed_form() ? 1e-12 : 3e-7);
  rep.spatial_cutoff = rho_cut * tscale;
  return rep;
}

SelfSimilarityReport check_self_similarity(const KernelSpec& spec, double t,
                                           const SpacePoint& x, double tol) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (tol <= 0.0) tol = spec.default_tol();
  const double s = std::pow(t, -1.0 / (2.0 * spec.alpha));
  SpacePoint xs = x;
  for (int i = 0; i < spec.dim; ++i) xs[i] *= s;
  const KernelValue lhs = eval_numeric(spec, t, x, tol);
  const KernelValue unit = eval_numeric(spec, 1.0, xs, tol);
  const double fac = std::pow(s, spec.dim);
  SelfSimilarityReport rep;
  rep.residual = std::abs(lhs.value - fac * unit.value);
  rep.combined_bound = lhs.abs_error_bound + fac * unit.abs_error_bound;
  return rep;
}

EnvelopeScan envelope_ratio_scan(const KernelSpec& spec, const std::vector<double>& t_grid,
                                 const std::vector<double>& x_grid) {
  spec.validate();
  KernelEvaluator ev(spec);
  EnvelopeScan scan;
  scan.min_ratio = kInf;
  scan.max_ratio = 0.0;
  scan.flagged = (spec.alpha == 1.0);
  const double expo = spec.dim + 2.0 * spec.alpha;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("envelope scan: t must be positive");
    const double ts = std::pow(t, 1.0 / (2.0 * spec.alpha));
    for (double r : x_grid) {
      const double ratio = ev.radial(t, std::abs(r)) * std::pow(ts + std::abs(r), expo) / t;
      scan.min_ratio = std::min(scan.min_ratio, ratio);
      scan.max_ratio = std::max(scan.max_ratio, ratio);
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// KernelEvaluator

namespace {

// slopes for cubic Hermite interpolation: 4th-order finite differences
std::vector<double> fd_slopes(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n);
  if (n < 5) {
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / h;
    d[n - 1] = d[n - 2];
    return d;
  }
  d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
  d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
  d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) /
             (12.0 * h);
  d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] +
              3.0 * y[n - 5]) /
             (12.0 * h);
  return d;
}

double hermite_eval(const std::vector<double>& y, const std::vector<double>& d, double h,
                    double u) {
  const std::size_t n = y.size();
  double s = u / h;
  std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(s)));
  if (i >= n - 1) i = n - 2;
  const double x = s - i;
  const double x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * y[i] + (x3 - 2 * x2 + x) * h * d[i] +
         (-2 * x3 + 3 * x2) * y[i + 1] + (x3 - x2) * h * d[i + 1];
}

}  // namespace

KernelEvaluator::KernelEvaluator(const KernelSpec& spec, double rel_tol) : spec_(spec) {
  spec_.validate();
  closed_form_ = spec_.has_closed_form();
  const int n = spec_.dim;
  const double alpha = spec_.alpha;

  if (!closed_form_) {
    const int terms = alpha < 0.5 ? 10 : 6;
    series_ = std::make_unique<StableTailSeries>(alpha, n, terms);

    const double k0 = prefactor(n) * boost::math::tgamma(n / (2.0 * alpha)) / (2.0 * alpha);
    // switch to the far-field series once its remainder estimate is tiny
    switch_radius_ = 256.0;
    for (double s : {8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0, 192.0}) {
      double err = 0.0;
      const double v = series_->density(s, &err);
      if (v > 0.0 && err <= 5e-7 * v) {
        switch_radius_ = s;
        break;
      }
    }

    // region A: s in [0,1], spline in u = s^2 (kernel is even in |x|)
    const int na = 129;
    a_du_ = 1.0 / (na - 1);
    a_val_.resize(na);
    for (int i = 0; i < na; ++i) {
      const double s = std::sqrt(i * a_du_);
      a_val_[i] =
          eval_numeric_radial(spec_, 1.0, s, std::max(1e-13, rel_tol * 0.1 * k0)).value;
    }
    a_deriv_ = fd_slopes(a_val_, a_du_);

    // region B: s in [1, switch_radius], log-log spline
    const double zmax = std::log(switch_radius_);
    const int nb = std::max<int>(33, static_cast<int>(std::ceil(48.0 * zmax / std::log(10.0))) + 1);
    b_logs_.resize(nb);
    b_val_.resize(nb);
    const double dz = zmax / (nb - 1);
    for (int i = 0; i < nb; ++i) {
      const double s = std::exp(i * dz);
      const double est = std::min(k0, series_->density(std::max(s, 4.0)));
      const double v =
          eval_numeric_radial(spec_, 1.0, s, std::max(1e-15, rel_tol * std::max(est, 1e-9)))
              .value;
      b_logs_[i] = i * dz;
      b_val_[i] = std::log(std::max(v, 1e-300));
    }
    b_deriv_ = fd_slopes(b_val_, dz);
  }

  // envelope constants over a reference scan
  env_lo_ = kInf;
  env_hi_ = 0.0;
  const double expo = n + 2.0 * alpha;
  for (int it = 0; it <= 12; ++it) {
    const double t = std::pow(10.0, -2.0 + it / 3.0);
    const double ts = std::pow(t, 1.0 / (2.0 * alpha));
    for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0}) {
      const double ratio = radial(t, s) * std::pow(ts + s, expo) / t;
      env_lo_ = std::min(env_lo_, ratio);
      env_hi_ = std::max(env_hi_, ratio);
    }
  }
}

double KernelEvaluator::profile_unit(double s) const {
  if (s <= 1.0) return hermite_eval(a_val_, a_deriv_, a_du_, s * s);
  if (s <= switch_radius_)
    return std::exp(hermite_eval(b_val_, b_deriv_, b_logs_[1] - b_logs_[0], std::log(s)));
  return series_->density(s);
}

double KernelEvaluator::radial(double t, double r) const {
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (closed_form_) return closed_form_radial(spec_.alpha, spec_.dim, t, r);
  const double inv = std::pow(t, -1.0 / (2.0 * spec_.alpha));
  return std::pow(inv, spec_.dim) * profile_unit(r * inv);
}

// ---------------------------------------------------------------------------
// stable sampling

std::vector<SpacePoint> sample_stable(const KernelSpec& spec, double t, int count,
                                      std::uint64_t seed) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("sample_stable: t must be positive");
  if (count < 1) throw std::invalid_argument("sample_stable: count must be >= 1");
  const double alpha = spec.alpha;
  if (alpha >= 1.0)
    throw std::invalid_argument("sample_stable: alpha = 1 is Gaussian; use a normal sampler");

  Rng rng(seed);
  std::vector<SpacePoint> out(count);
  const double tpow = std::pow(t, 1.0 / alpha);
  for (int i = 0; i < count; ++i) {
    // one-sided alpha-stable time with Laplace transform exp(-u^alpha)
    const double V = kPi * rng.uniform01_pos();
    const double E = rng.exponential();
    const double A = std::pow(std::pow(std::sin(alpha * V), alpha) *
                                  std::pow(std::sin((1.0 - alpha) * V), 1.0 - alpha) /
                                  std::sin(V),
                              1.0 / (1.0 - alpha));
    const double S = std::pow(A / E, (1.0 - alpha) / alpha);
    const double T = tpow * S;
    SpacePoint p{0.0, 0.0, 0.0};
    const double sd = std::sqrt(2.0 * T);
    for (int d = 0; d < spec.dim; ++d) p[d] = sd * rng.normal();
    out[i] = p;
  }
  return out;
}

}  // namespace fractrace
