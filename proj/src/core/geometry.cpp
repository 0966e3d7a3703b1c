#include "core/geometry.hpp"

#include <cmath>

#include "core/measure.hpp"

namespace fractrace {

bool ball_contains(const ParabolicBall& ball, double alpha, int dim,
                   const SpaceTimePoint& p) {
  const double r2a = std::pow(ball.r, 2.0 * alpha);
  const double dt = p.t - ball.t0;
  return dt > r2a && dt < 2.0 * r2a && dist(p.x, ball.x0, dim) < ball.r;
}

bool Box::contains(int dim, const SpaceTimePoint& p) const {
  if (p.t < tmin || p.t > tmax) return false;
  for (int i = 0; i < dim; ++i)
    if (p.x[i] < xmin[i] || p.x[i] > xmax[i]) return false;
  return true;
}

Box DyadicCube::bounds(double alpha, int dim) const {
  Box b;
  const double l = side();
  const double l2a = std::pow(l, 2.0 * alpha);
  b.tmin = tau.t + k0 * l2a;
  b.tmax = tau.t + (k0 + 1) * l2a;
  for (int i = 0; i < dim; ++i) {
    b.xmin[i] = tau.x[i] + k[i] * l;
    b.xmax[i] = tau.x[i] + (k[i] + 1) * l;
  }
  return b;
}

bool cube_contains(const DyadicCube& cube, double alpha, int dim,
                   const SpaceTimePoint& p) {
  return cube.bounds(alpha, dim).contains(dim, p);
}

DyadicCube cube_at(const SpaceTimePoint& p, int m, double alpha, int dim,
                   const SpaceTimePoint& tau) {
  if (p.t < tau.t)
    throw std::invalid_argument("cube_at: point time below the shifted lattice origin");
  DyadicCube c;
  c.m = m;
  c.tau = tau;
  const double l = c.side();
  const double l2a = std::pow(l, 2.0 * alpha);
  c.k0 = static_cast<long>(std::floor((p.t - tau.t) / l2a));
  for (int i = 0; i < dim; ++i)
    c.k[i] = static_cast<long>(std::floor((p.x[i] - tau.x[i]) / l));
  return c;
}

std::vector<DyadicCube> cubes_containing(const SpaceTimePoint& p, int m_lo, int m_hi,
                                         double alpha, int dim,
                                         const SpaceTimePoint& tau) {
  if (m_lo > m_hi) throw std::invalid_argument("cubes_containing: empty scale range");
  std::vector<DyadicCube> out;
  out.reserve(m_hi - m_lo + 1);
  for (int m = m_lo; m <= m_hi; ++m) out.push_back(cube_at(p, m, alpha, dim, tau));
  return out;
}

Box dilate(const DyadicCube& cube, double alpha, int dim) {
  const Box b = cube.bounds(alpha, dim);
  Box d;
  const double l = cube.side();
  const double tc = 0.5 * (b.tmin + b.tmax);
  const double half_t = 0.5 * std::pow(2.0 * l, 2.0 * alpha);
  d.tmin = std::max(0.0, tc - half_t);
  d.tmax = tc + half_t;
  for (int i = 0; i < dim; ++i) {
    const double c = 0.5 * (b.xmin[i] + b.xmax[i]);
    d.xmin[i] = c - l;
    d.xmax[i] = c + l;
  }
  return d;
}

Interval containment_interval(double s, const SpacePoint& y, double t,
                              const SpacePoint& x, double alpha, int dim) {
  const double dt = s - t;
  if (!(dt > 0.0)) return {};
  const double inv2a = 1.0 / (2.0 * alpha);
  const double hi = std::pow(dt, inv2a);
  const double lo = std::max(std::pow(0.5 * dt, inv2a), dist(y, x, dim));
  if (!(lo < hi)) return {};
  return {lo, hi};
}

Interval maximal_window(double s, const SpacePoint& y, const SpacePoint& x,
                        double alpha, int dim) {
  if (!(s > 0.0)) return {};
  const double inv2a = 1.0 / (2.0 * alpha);
  const double hi = std::pow(s / 2.0, inv2a);
  const double lo = std::max(std::pow(s / 3.0, inv2a), dist(y, x, dim));
  if (!(lo < hi)) return {};
  return {lo, hi};
}

double measure_of_region(const DiscreteMeasure& mu, const ParabolicBall& ball,
                         double alpha) {
  double s = 0.0;
  for (const Atom& a : mu.atoms())
    if (ball_contains(ball, alpha, mu.dim(), {a.t, a.x})) s += a.w;
  return s;
}

double measure_of_region(const DiscreteMeasure& mu, const Box& box) {
  double s = 0.0;
  for (const Atom& a : mu.atoms())
    if (box.contains(mu.dim(), {a.t, a.x})) s += a.w;
  return s;
}

}  // namespace fractrace
