#include "core/semigroup.hpp"

#include <cmath>

#include "core/fft.hpp"

namespace fractrace {

namespace {

void check_support_guard(const GridSpec& g, const double* v) {
  const double lim = 0.5 * g.L + 1e-12;
  for (long c = 0; c < g.cells(); ++c) {
    if (v[c] == 0.0) continue;
    const SpacePoint p = g.node_point(c);
    for (int i = 0; i < g.dim; ++i)
      if (std::abs(p[i]) > lim)
        throw std::domain_error(
            "aliasing guard: field support must stay inside the inner half-box");
  }
}

void multiply_exp(const SpectralTransform& ft, double t, double alpha,
                  std::vector<std::complex<double>>& coeff) {
  for (long f = 0; f < ft.n_freq(); ++f)
    coeff[f] *= std::exp(-t * std::pow(ft.xi_sq(f), alpha));
}

}  // namespace

SpatialField apply_R(const SpatialField& f, double t, const KernelSpec& spec) {
  if (t != 0.0) check_support_guard(f.grid, f.v.data());
  return apply_R_periodic(f, t, spec);
}

SpatialField apply_R_periodic(const SpatialField& f, double t, const KernelSpec& spec) {
  spec.validate();
  if (t < 0.0) throw std::invalid_argument("apply_R: t must be nonnegative");
  f.grid.validate();
  if (spec.dim != f.grid.dim) throw std::invalid_argument("apply_R: dim mismatch");
  if (t == 0.0) return f;

  SpectralTransform ft(f.grid);
  std::vector<std::complex<double>> coeff;
  ft.forward(f.v, coeff);
  multiply_exp(ft, t, spec.alpha, coeff);
  SpatialField out(f.grid);
  ft.backward(coeff, out.v);
  return out;
}

SpaceTimeField apply_S(const SpaceTimeField& g, const KernelSpec& spec) {
  for (int j = 0; j <= g.M; ++j) check_support_guard(g.grid, g.slice(j));
  return apply_S_periodic(g, spec);
}

SpaceTimeField apply_S_periodic(const SpaceTimeField& g, const KernelSpec& spec) {
  spec.validate();
  g.grid.validate();
  if (spec.dim != g.grid.dim) throw std::invalid_argument("apply_S: dim mismatch");

  SpectralTransform ft(g.grid);
  const long F = ft.n_freq();
  std::vector<std::vector<std::complex<double>>> ghat(g.M + 1);
  std::vector<double> tmp(g.grid.cells());
  for (int j = 0; j <= g.M; ++j) {
    tmp.assign(g.slice(j), g.slice(j) + g.grid.cells());
    ft.forward(tmp, ghat[j]);
  }

  std::vector<double> mult(F);
  for (long f = 0; f < F; ++f) mult[f] = std::pow(ft.xi_sq(f), spec.alpha);

  SpaceTimeField out(g.grid, g.T, g.M);
  const double dt = g.dt();
  std::vector<std::complex<double>> acc(F);
  for (int j = 1; j <= g.M; ++j) {
    std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
    for (int i = 0; i <= j; ++i) {
      const double w = dt * ((i == 0 || i == j) ? 0.5 : 1.0);
      const double tau = (j - i) * dt;
      for (long f = 0; f < F; ++f) acc[f] += w * std::exp(-tau * mult[f]) * ghat[i][f];
    }
    ft.backward(acc, tmp);
    std::copy(tmp.begin(), tmp.end(), out.slice(j));
  }
  return out;
}

SpaceTimeField apply_S_transpose(const SpaceTimeField& h, const KernelSpec& spec) {
  spec.validate();
  h.grid.validate();
  if (spec.dim != h.grid.dim) throw std::invalid_argument("apply_S_transpose: dim mismatch");

  SpectralTransform ft(h.grid);
  const long F = ft.n_freq();
  std::vector<std::vector<std::complex<double>>> hhat(h.M + 1);
  std::vector<double> tmp(h.grid.cells());
  for (int j = 0; j <= h.M; ++j) {
    tmp.assign(h.slice(j), h.slice(j) + h.grid.cells());
    ft.forward(tmp, hhat[j]);
  }
  std::vector<double> mult(F);
  for (long f = 0; f < F; ++f) mult[f] = std::pow(ft.xi_sq(f), spec.alpha);

  SpaceTimeField out(h.grid, h.T, h.M);
  const double dt = h.dt();
  std::vector<std::complex<double>> acc(F);
  for (int i = 0; i <= h.M; ++i) {
    std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
    for (int j = std::max(i, 1); j <= h.M; ++j) {
      const double w = dt * ((i == 0 || i == j) ? 0.5 : 1.0);
      const double tau = (j - i) * dt;
      for (long f = 0; f < F; ++f) acc[f] += w * std::exp(-tau * mult[f]) * hhat[j][f];
    }
    ft.backward(acc, tmp);
    std::copy(tmp.begin(), tmp.end(), out.slice(i));
  }
  return out;
}

std::vector<double> adjoint_R(const DiscreteMeasure& mu, const std::vector<SpacePoint>& xs,
                              const KernelEvaluator& kernel) {
  if (mu.dim() != kernel.spec().dim) throw std::invalid_argument("adjoint_R: dim mismatch");
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double s = 0.0;
    for (const Atom& a : mu.atoms()) s += a.w * kernel.radial(a.t, dist(a.x, xs[i], mu.dim()));
    out[i] = s;
  }
  return out;
}

std::vector<double> adjoint_S(const DiscreteMeasure& mu,
                              const std::vector<SpaceTimePoint>& queries,
                              const KernelEvaluator& kernel) {
  if (mu.dim() != kernel.spec().dim) throw std::invalid_argument("adjoint_S: dim mismatch");
  std::vector<double> out(queries.size(), 0.0);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    double s = 0.0;
    for (const Atom& a : mu.atoms()) {
      // atoms with a.t <= t contribute nothing (the window [t, inf) is open
      // at the diagonal by convention)
      if (a.t > queries[i].t)
        s += a.w * kernel.radial(a.t - queries[i].t, dist(a.x, queries[i].x, mu.dim()));
    }
    out[i] = s;
  }
  return out;
}

SpatialField fractional_laplacian(const SpatialField& f, double alpha) {
  f.grid.validate();
  SpectralTransform ft(f.grid);
  std::vector<std::complex<double>> coeff;
  ft.forward(f.v, coeff);
  for (long k = 0; k < ft.n_freq(); ++k) coeff[k] *= std::pow(ft.xi_sq(k), alpha);
  SpatialField out(f.grid);
  ft.backward(coeff, out.v);
  return out;
}

double pde_residual(const SpatialField& f, const SpaceTimeField& g, const KernelSpec& spec) {
  spec.validate();
  if (f.grid.n_nodes != g.grid.n_nodes || f.grid.L != g.grid.L || f.grid.dim != g.grid.dim)
    throw std::invalid_argument("pde_residual: f and g grids must match");

  const SpaceTimeField sg = apply_S_periodic(g, spec);
  SpaceTimeField u = sg;
  for (int j = 0; j <= g.M; ++j) {
    const SpatialField rj = apply_R_periodic(f, g.time(j), spec);
    double* sl = u.slice(j);
    for (long c = 0; c < g.grid.cells(); ++c) sl[c] += rj.v[c];
  }

  const double dt = g.dt();
  double worst = 0.0;
  SpatialField slice(f.grid);
  for (int j = 1; j < g.M; ++j) {
    slice.v.assign(u.slice(j), u.slice(j) + g.grid.cells());
    const SpatialField lap = fractional_laplacian(slice, spec.alpha);
    const double* up = u.slice(j + 1);
    const double* dn = u.slice(j - 1);
    const double* gj = g.slice(j);
    for (long c = 0; c < g.grid.cells(); ++c) {
      const double r = (up[c] - dn[c]) / (2.0 * dt) + lap.v[c] - gj[c];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace fractrace
