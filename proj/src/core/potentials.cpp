#include "core/potentials.hpp"

#include <algorithm>
#include <cmath>

#include "core/semigroup.hpp"

namespace fractrace {

namespace {

struct AtomWindow {
  Interval iv;
  double w = 0.0;
  double g = 0.0;
};

// merge window endpoints into a breakpoint list and sweep constant pieces
template <typename Visit>
void sweep_pieces(const std::vector<AtomWindow>& windows, Visit&& visit) {
  std::vector<double> cuts;
  cuts.reserve(2 * windows.size());
  for (const auto& w : windows) {
    cuts.push_back(w.iv.lo);
    cuts.push_back(w.iv.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(a < b)) continue;
    const double mid = 0.5 * (a + b);
    double mass = 0.0, gmass = 0.0;
    for (const auto& w : windows) {
      if (w.iv.lo < mid && mid < w.iv.hi) {
        mass += w.w;
        gmass += w.w * w.g;
      }
    }
    visit(a, b, mass, gmass);
  }
}

// int_a^b r^{-e-1} dr
double power_segment(double e, double a, double b) {
  if (e == 0.0) return std::log(b / a);
  return (std::pow(a, -e) - std::pow(b, -e)) / e;
}

WolffProfile wolff_impl(const DiscreteMeasure& mu, double p, const SpaceTimePoint& at,
                        double alpha, double beta_exp, WolffVariant variant,
                        double truncation) {
  const double pc = conjugate_exponent(p);
  WolffProfile prof;
  prof.eval_point = at;
  prof.variant = variant;
  prof.truncation = truncation;

  std::vector<AtomWindow> windows;
  for (const Atom& a : mu.atoms()) {
    if (a.w == 0.0) continue;
    const Interval iv = containment_interval(a.t, a.x, at.t, at.x, alpha, mu.dim());
    if (!iv.empty()) windows.push_back({iv, a.w, 0.0});
  }

  const double e = beta_exp * (pc - 1.0);
  sweep_pieces(windows, [&](double a, double b, double mass, double) {
    if (a >= truncation) return;
    b = std::min(b, truncation);
    if (!(a < b)) return;
    prof.pieces.push_back({a, b, mass});
    if (mass > 0.0) prof.value += std::pow(mass, pc - 1.0) * power_segment(e, a, b);
  });
  return prof;
}

}  // namespace

WolffProfile wolff_R(const DiscreteMeasure& mu, double p, const SpaceTimePoint& at,
                     double alpha, double truncation) {
  if (!(truncation > 0.0)) throw std::invalid_argument("wolff_R: truncation must be positive");
  return wolff_impl(mu, p, at, alpha, static_cast<double>(mu.dim()), WolffVariant::R,
                    truncation);
}

WolffProfile wolff_S(const DiscreteMeasure& mu, double p, const SpaceTimePoint& at,
                     double alpha) {
  const double limit = 1.0 + mu.dim() / (2.0 * alpha);
  if (!(p < limit))
    throw std::invalid_argument("wolff_S: requires p < 1 + n/(2 alpha)");
  conjugate_exponent(p);
  const double beta_exp = mu.dim() + 2.0 * alpha * (1.0 - p);
  return wolff_impl(mu, p, at, alpha, beta_exp, WolffVariant::S, kInf);
}

WolffDyadicResult wolff_dyadic(const DiscreteMeasure& mu, double p,
                               const SpaceTimePoint& at, double alpha, int m_lo,
                               int m_hi, const SpaceTimePoint& tau) {
  if (m_lo > m_hi) throw std::invalid_argument("wolff_dyadic: empty scale range");
  const double pc = conjugate_exponent(p);
  WolffDyadicResult res;
  for (int m = m_lo; m <= m_hi; ++m) {
    const DyadicCube cube = cube_at(at, m, alpha, mu.dim(), tau);
    const double mass = measure_of_region(mu, cube.bounds(alpha, mu.dim()));
    if (mass <= 0.0) continue;
    const double l = cube.side();
    const double term = std::pow(mass / std::pow(l, mu.dim()), pc - 1.0);
    res.value += term;
    res.contributions.emplace_back(m, term);
  }
  return res;
}

namespace {

double sup_over_pieces(const std::vector<AtomWindow>& windows, int n) {
  double best = 0.0;
  sweep_pieces(windows, [&](double a, double, double mass, double) {
    if (mass > 0.0) best = std::max(best, mass / std::pow(a, n));
  });
  return best;
}

}  // namespace

double maximal_R(const DiscreteMeasure& mu, const SpacePoint& x, double alpha) {
  std::vector<AtomWindow> windows;
  for (const Atom& a : mu.atoms()) {
    if (a.w == 0.0) continue;
    const Interval iv = maximal_window(a.t, a.x, x, alpha, mu.dim());
    if (!iv.empty()) windows.push_back({iv, a.w, 0.0});
  }
  return sup_over_pieces(windows, mu.dim());
}

double maximal_spacetime(const DiscreteMeasure& mu, const SpaceTimePoint& at,
                         double alpha) {
  std::vector<AtomWindow> windows;
  for (const Atom& a : mu.atoms()) {
    if (a.w == 0.0) continue;
    const Interval iv = containment_interval(a.t, a.x, at.t, at.x, alpha, mu.dim());
    if (!iv.empty()) windows.push_back({iv, a.w, 0.0});
  }
  return sup_over_pieces(windows, mu.dim());
}

double maximal_centered(const std::vector<double>& g_at_atoms, const DiscreteMeasure& mu,
                        const SpaceTimePoint& at, double alpha) {
  if (g_at_atoms.size() != mu.size())
    throw std::invalid_argument("maximal_centered: g/atom size mismatch");
  std::vector<AtomWindow> windows;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Atom& a = mu.atoms()[i];
    if (g_at_atoms[i] < 0.0)
      throw std::invalid_argument("maximal_centered: g must be nonnegative");
    if (a.w == 0.0) continue;
    const Interval iv = containment_interval(a.t, a.x, at.t, at.x, alpha, mu.dim());
    if (!iv.empty()) windows.push_back({iv, a.w, g_at_atoms[i]});
  }
  double best = 0.0;
  sweep_pieces(windows, [&](double, double, double mass, double gmass) {
    if (mass > 0.0) best = std::max(best, gmass / mass);
  });
  return best;
}

double maximal_dyadic(const std::vector<double>& g_at_atoms, const DiscreteMeasure& mu,
                      const SpaceTimePoint& at, double alpha, int m_lo, int m_hi,
                      const SpaceTimePoint& tau) {
  if (g_at_atoms.size() != mu.size())
    throw std::invalid_argument("maximal_dyadic: g/atom size mismatch");
  double best = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) {
    const Box box = cube_at(at, m, alpha, mu.dim(), tau).bounds(alpha, mu.dim());
    double mass = 0.0, gmass = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const Atom& a = mu.atoms()[i];
      if (box.contains(mu.dim(), {a.t, a.x})) {
        mass += a.w;
        gmass += a.w * g_at_atoms[i];
      }
    }
    if (mass > 0.0) best = std::max(best, gmass / mass);
  }
  return best;
}

DualityReport wolff_duality_ratio(const DiscreteMeasure& mu, double p, double alpha,
                                  WolffVariant variant, const KernelEvaluator& kernel,
                                  const DualityGrid& grid) {
  if (variant == WolffVariant::DyadicR)
    throw std::invalid_argument("wolff_duality_ratio: variant must be R or S");
  const double pc = conjugate_exponent(p);
  const int n = mu.dim();
  DualityReport rep;
  if (mu.empty() || mu.total() == 0.0) return rep;

  // exact side
  for (const Atom& a : mu.atoms()) {
    const SpaceTimePoint at{a.t, a.x};
    const double w = variant == WolffVariant::R ? wolff_R(mu, p, at, alpha).value
                                                : wolff_S(mu, p, at, alpha).value;
    rep.rhs += a.w * w;
  }

  // grid side: norm of the adjoint potential over an envelope-significant box
  double span = 0.0, tmax = 0.0, tmin = kInf;
  for (const Atom& a : mu.atoms()) {
    span = std::max(span, norm(a.x, n));
    tmax = std::max(tmax, a.t);
    tmin = std::min(tmin, a.t);
  }
  const double width = std::pow(tmax, 1.0 / (2.0 * alpha));
  double L = grid.L > 0.0 ? grid.L : std::max(4.0 * width + 2.0 * span, 8.0);
  const double decay = (n + 2.0 * alpha) * pc - n;
  const double env_c = kernel.envelope_upper() * mu.total() * tmax;

  auto lhs_on_box = [&](double Lbox, int N) {
    const double h = 2.0 * Lbox / N;
    double s = 0.0;
    if (variant == WolffVariant::R) {
      if (n == 1) {
        for (int i = 0; i < N; ++i) {
          const SpacePoint x = make_point(-Lbox + (i + 0.5) * h);
          double v = 0.0;
          for (const Atom& a : mu.atoms()) v += a.w * kernel.radial(a.t, dist(a.x, x, 1));
          s += std::pow(v, pc) * h;
        }
      } else {
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) {
            const SpacePoint x = make_point(-Lbox + (i + 0.5) * h, -Lbox + (j + 0.5) * h);
            double v = 0.0;
            for (const Atom& a : mu.atoms()) v += a.w * kernel.radial(a.t, dist(a.x, x, 2));
            s += std::pow(v, pc) * h * h;
          }
      }
    } else {
      // S-variant: space-time box (0, tmax) x [-Lbox, Lbox]; the adjoint
      // potential of an atomic measure is singular at the atoms, so this
      // norm depends on the grid resolution; reported for diagnostics.
      if (n != 1)
        throw std::invalid_argument("wolff_duality_ratio: S-variant norm grid is 1-d only");
      const int Mt = std::max(8, grid.time_cells);
      const double dt = tmax / Mt;
      std::vector<SpaceTimePoint> qs;
      qs.reserve(static_cast<std::size_t>(Mt) * N);
      for (int jt = 0; jt < Mt; ++jt)
        for (int i = 0; i < N; ++i)
          qs.push_back({(jt + 0.5) * dt, make_point(-Lbox + (i + 0.5) * h)});
      const std::vector<double> vals = adjoint_S(mu, qs, kernel);
      for (double vv : vals) s += std::pow(vv, pc) * dt * h;
    }
    return s;
  };

  int N = grid.n_nodes;
  for (int pass = 0;; ++pass) {
    int Nbox = N;
    if (Nbox == 0) {
      const double hres = std::min(std::pow(tmin, 1.0 / (2.0 * alpha)) / 6.0, L / 64.0);
      Nbox = static_cast<int>(std::ceil(2.0 * L / hres));
      const int cap = n == 1 ? 8192 : 768;
      Nbox = std::min(cap, std::max(128, (Nbox + 1) & ~1));
    }
    rep.lhs = lhs_on_box(L, Nbox);
    rep.grid_tail_estimate = (variant == WolffVariant::S ? tmax : 1.0) *
                             std::pow(env_c, pc) * sphere_area(n) * std::pow(L, -decay) /
                             decay;
    if (rep.grid_tail_estimate <= 0.02 * rep.lhs || rep.lhs == 0.0) break;
    if (pass >= 4)
      throw std::runtime_error("wolff_duality_ratio: norm grid cannot cover the envelope tail");
    L *= 1.6;
  }

  if (rep.rhs > 0.0) {
    rep.ratio = rep.lhs / rep.rhs;
    rep.ratio_finite = true;
  } else if (rep.lhs == 0.0) {
    rep.ratio = 1.0;  // 0/0 by convention
    rep.ratio_finite = true;
  } else {
    rep.ratio = kInf;
    rep.ratio_finite = false;
  }
  return rep;
}

}  // namespace fractrace
