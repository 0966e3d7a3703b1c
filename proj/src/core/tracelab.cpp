#include "core/tracelab.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/rng.hpp"
#include "core/semigroup.hpp"

namespace fractrace {

double strichartz_exponent(double p, double alpha, int dim) {
  conjugate_exponent(p);
  const double denom = dim + 2.0 * alpha - 2.0 * alpha * p;
  if (!(denom > 0.0))
    throw std::invalid_argument("strichartz exponent needs p < 1 + n/(2 alpha)");
  return p * (1.0 + 2.0 * alpha * p / denom);
}

// ---------------------------------------------------------------------------
// measure builders

DiscreteMeasure make_dirac(double t, double x, double w) {
  return DiscreteMeasure({{t, make_point(x), w}}, 1);
}

DiscreteMeasure make_slab(double t1, double thickness, double halfwidth, double mass,
                          int nt, int nx) {
  if (!(t1 > 0.0) || !(thickness > 0.0) || !(halfwidth > 0.0))
    throw std::invalid_argument("slab: bad geometry");
  std::vector<Atom> atoms;
  const double w = mass / (static_cast<double>(nt) * nx);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j)
      atoms.push_back({t1 + thickness * (i + 0.5) / nt,
                       make_point(-halfwidth + 2.0 * halfwidth * (j + 0.5) / nx), w});
  return DiscreteMeasure(std::move(atoms), 1);
}

DiscreteMeasure make_hyperplane(double t1, double halfwidth, double density, int nx) {
  std::vector<Atom> atoms;
  const double cell = 2.0 * halfwidth / nx;
  for (int j = 0; j < nx; ++j)
    atoms.push_back({t1, make_point(-halfwidth + cell * (j + 0.5)), density * cell});
  return DiscreteMeasure(std::move(atoms), 1);
}

DiscreteMeasure merge(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("merge: dim mismatch");
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return DiscreteMeasure(std::move(atoms), a.dim());
}

DiscreteMeasure make_two_scale_union(double t1, double mass) {
  return merge(make_slab(t1, 0.5, 1.0, 0.7 * mass, 4, 24),
               make_slab(t1 + 0.1, 0.05, 0.1, 0.3 * mass, 2, 12));
}

// ---------------------------------------------------------------------------

ScalingResult run_scaling(CapacityVariant variant, double alpha, double p,
                          const std::vector<double>& radii, SolverControls controls) {
  if (radii.size() < 3) throw std::invalid_argument("scaling: need >= 3 radii");
  ScalingResult res;
  std::vector<double> lx, ly;
  for (double r : radii) {
    const ParabolicBall ball{0.0, make_point(0.0), r};
    const XGridSpec xg = default_ball_grid(variant, ball, alpha, 1);
    const CompactSetApprox K = CompactSetApprox::from_ball(ball, alpha, 1);
    CapacityProblem prob(variant, alpha, p, xg, K, controls);
    const CapacityEstimate est = prob.solve();
    res.rows.push_back({r, est.primal_value, est.dual_value});
    lx.push_back(std::log2(r));
    ly.push_back(0.5 * (std::log2(est.primal_value) + std::log2(std::max(est.dual_value, 1e-300))));
  }
  res.fit = fit_line(lx, ly);
  res.expected = variant == CapacityVariant::R ? 1.0 : 1.0 + 2.0 * alpha * (1.0 - p);
  return res;
}

// ---------------------------------------------------------------------------
// trial fields

namespace {

void truncate_outer_half(SpatialField& f) {
  const double lim = 0.5 * f.grid.L;
  for (long c = 0; c < f.grid.cells(); ++c)
    if (std::abs(f.grid.node_point(c)[0]) > lim) f.v[c] = 0.0;
}

SpatialField random_wave_field(const GridSpec& grid, Rng& rng) {
  SpatialField f(grid);
  const int kmax = 12;
  std::vector<double> amp(kmax), phase(kmax);
  for (int k = 0; k < kmax; ++k) {
    amp[k] = rng.uniform(-1.0, 1.0);
    phase[k] = rng.uniform(0.0, 2.0 * kPi);
  }
  for (long c = 0; c < grid.cells(); ++c) {
    const double x = grid.node_point(c)[0];
    double v = 0.0;
    for (int k = 0; k < kmax; ++k) v += amp[k] * std::cos(kPi * (k + 1) * x / grid.L + phase[k]);
    f.v[c] = v;
  }
  truncate_outer_half(f);
  return f;
}

SpatialField bump_spatial_field(const GridSpec& grid, Rng& rng) {
  SpatialField f(grid);
  const double c0 = rng.uniform(-0.25 * grid.L, 0.25 * grid.L);
  const double sigma = std::exp(rng.uniform(std::log(grid.L / 64.0), std::log(grid.L / 8.0)));
  for (long c = 0; c < grid.cells(); ++c) {
    const double x = grid.node_point(c)[0];
    f.v[c] = std::exp(-0.5 * (x - c0) * (x - c0) / (sigma * sigma));
  }
  truncate_outer_half(f);
  return f;
}

// nearest time slice, clamped into [0, M]
int snap_slice(const SpaceTimeField& g, double t) {
  return std::clamp(static_cast<int>(std::lround(t / g.dt())), 0, g.M);
}

}  // namespace

SpaceTimeField random_bump_field(const GridSpec& grid, double T, int M, int n_bumps,
                                 std::uint64_t seed, double rescale_lambda, double alpha) {
  Rng rng(seed);
  struct Bump {
    double amp, c, sigma, tau, zeta;
  };
  std::vector<Bump> bumps(n_bumps);
  for (Bump& b : bumps) {
    b.amp = rng.uniform(0.3, 1.5);
    b.c = rng.uniform(-2.0, 2.0);
    b.sigma = rng.uniform(0.25, 1.0);
    b.tau = rng.uniform(0.1, 0.9) * T;
    b.zeta = rng.uniform(0.08, 0.4) * T;
  }
  if (rescale_lambda != 1.0) {
    const double l = rescale_lambda;
    const double l2a = std::pow(l, 2.0 * alpha);
    for (Bump& b : bumps) {
      b.c /= l;
      b.sigma /= l;
      b.tau /= l2a;
      b.zeta /= l2a;
    }
  }
  SpaceTimeField g(grid, T, M);
  const double lim = 0.5 * grid.L;
  for (int j = 0; j <= M; ++j) {
    double* sl = g.slice(j);
    const double t = g.time(j);
    for (long c = 0; c < grid.cells(); ++c) {
      const double x = grid.node_point(c)[0];
      if (std::abs(x) > lim) continue;
      double v = 0.0;
      for (const Bump& b : bumps)
        v += b.amp * std::exp(-0.5 * (x - b.c) * (x - b.c) / (b.sigma * b.sigma)) *
             std::exp(-0.5 * (t - b.tau) * (t - b.tau) / (b.zeta * b.zeta));
      sl[c] = v;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

TraceReport trace_ratio(CapacityVariant variant, const DiscreteMeasure& mu, double p,
                        double q, double alpha, const TraceTrialConfig& cfg,
                        std::uint64_t seed) {
  conjugate_exponent(p);
  conjugate_exponent(q);
  if (mu.dim() != 1) throw std::invalid_argument("trace_ratio: 1-d measures only");
  KernelSpec spec;
  spec.alpha = alpha;
  spec.dim = 1;
  const KernelEvaluator kernel(spec);
  Rng rng(seed);
  TraceReport rep;
  if (mu.empty() || mu.total() == 0.0) return rep;

  double tmax = 0.0;
  for (const Atom& a : mu.atoms()) tmax = std::max(tmax, a.t);

  if (variant == CapacityVariant::R) {
    // group atoms by time so each trial costs one propagation per distinct time
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < mu.size(); ++i) groups[mu.atoms()[i].t].push_back(i);

    auto ratio_of = [&](const SpatialField& f) {
      const double nf = norm_lp(f, p);
      if (nf == 0.0) return 0.0;
      std::vector<double> at_atoms(mu.size(), 0.0);
      for (const auto& [t, members] : groups) {
        const SpatialField rf = apply_R(f, t, spec);
        for (std::size_t i : members)
          at_atoms[i] = rf.v[f.grid.flat_index(mu.atoms()[i].x)];
      }
      return norm_lq_mu(at_atoms, mu, q) / nf;
    };

    for (int i = 0; i < cfg.n_random; ++i) rep.ratios.push_back(ratio_of(random_wave_field(cfg.grid, rng)));
    for (int i = 0; i < cfg.n_bumps; ++i) rep.ratios.push_back(ratio_of(bump_spatial_field(cfg.grid, rng)));
    if (cfg.adversarial) {
      SpatialField h(cfg.grid);
      std::vector<SpacePoint> nodes(cfg.grid.cells());
      for (long c = 0; c < cfg.grid.cells(); ++c) nodes[c] = cfg.grid.node_point(c);
      const std::vector<double> pot = adjoint_R(mu, nodes, kernel);
      const double pc = conjugate_exponent(p);
      for (long c = 0; c < cfg.grid.cells(); ++c) h.v[c] = std::pow(pot[c], pc - 1.0);
      truncate_outer_half(h);
      rep.adversarial_ratio = ratio_of(h);
      rep.ratios.push_back(rep.adversarial_ratio);
    }
  } else {
    const double T = 1.05 * tmax;
    const int M = cfg.time_cells;

    auto ratio_of = [&](const SpaceTimeField& g) {
      const double ng = norm_lp(g, p);
      if (ng == 0.0) return 0.0;
      const SpaceTimeField sg = apply_S(g, spec);
      std::vector<double> at_atoms(mu.size(), 0.0);
      for (std::size_t i = 0; i < mu.size(); ++i) {
        const Atom& a = mu.atoms()[i];
        at_atoms[i] = sg.slice(snap_slice(sg, a.t))[g.grid.flat_index(a.x)];
      }
      return norm_lq_mu(at_atoms, mu, q) / ng;
    };

    for (int i = 0; i < cfg.n_random + cfg.n_bumps; ++i) {
      const SpaceTimeField g =
          random_bump_field(cfg.grid, T, M, 4, rng.next_u64(), 1.0, alpha);
      rep.ratios.push_back(ratio_of(g));
    }
    if (cfg.adversarial) {
      SpaceTimeField g(cfg.grid, T, M);
      const double pc = conjugate_exponent(p);
      std::vector<SpaceTimePoint> qs;
      qs.reserve(g.v.size());
      for (int j = 0; j <= M; ++j)
        for (long c = 0; c < cfg.grid.cells(); ++c)
          qs.push_back({g.time(j), cfg.grid.node_point(c)});
      const std::vector<double> pot = adjoint_S(mu, qs, kernel);
      const double lim = 0.5 * cfg.grid.L;
      for (std::size_t i = 0; i < g.v.size(); ++i) {
        const double x = qs[i].x[0];
        g.v[i] = std::abs(x) > lim ? 0.0 : std::pow(pot[i], pc - 1.0);
      }
      rep.adversarial_ratio = ratio_of(g);
      rep.ratios.push_back(rep.adversarial_ratio);
    }
  }

  for (double r : rep.ratios) rep.sup_ratio = std::max(rep.sup_ratio, r);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> quantiles(std::vector<double> v, int k) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (int i = 0; i < k; ++i) {
    const double q = k == 1 ? 0.5 : static_cast<double>(i) / (k - 1);
    out.push_back(v[static_cast<std::size_t>(q * (v.size() - 1))]);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ConditionValues condition_values(CapacityVariant variant, const DiscreteMeasure& mu,
                                 double p, double q, double alpha, SolverControls controls,
                                 bool with_compact) {
  conjugate_exponent(p);
  conjugate_exponent(q);
  ConditionValues cv;
  if (mu.empty() || mu.total() == 0.0) return cv;

  std::vector<double> ts, xs;
  for (const Atom& a : mu.atoms()) {
    ts.push_back(a.t);
    xs.push_back(a.x[0]);
  }
  const std::vector<double> tq = quantiles(ts, 5);
  const std::vector<double> xq = quantiles(xs, 5);

  // ball condition with the closed-form denominator
  const double denom_exp = variant == CapacityVariant::R
                               ? mu.dim() * q / p
                               : (mu.dim() + 2.0 * alpha * (1.0 - p)) * q / p;
  cv.has_ball = true;
  for (int i = -4; i <= 2; ++i) {
    const double r = std::ldexp(1.0, i);
    const double r2a = std::pow(r, 2.0 * alpha);
    for (double s : tq)
      for (double c : {1.25, 1.5, 1.75})
        for (double x0 : xq) {
          const double t0 = s - c * r2a;
          if (t0 < 0.0) continue;
          const double m = measure_of_region(mu, ParabolicBall{t0, make_point(x0), r}, alpha);
          if (m > 0.0) cv.ball_sup = std::max(cv.ball_sup, m / std::pow(r, denom_exp));
        }
  }

  if (with_compact) {
    cv.has_compact = true;
    struct Cand {
      double mass;
      CompactSetApprox K;
    };
    std::vector<Cand> cands;
    CompactSetApprox support;
    for (const Atom& a : mu.atoms()) support.samples.push_back({a.t, a.x});
    cands.push_back({mu.total(), support});

    std::vector<Atom> order = mu.atoms();
    std::sort(order.begin(), order.end(),
              [](const Atom& a, const Atom& b) { return a.w > b.w; });
    CompactSetApprox top;
    double m = 0.0;
    for (const Atom& a : order) {
      top.samples.push_back({a.t, a.x});
      m += a.w;
      if (m >= 0.5 * mu.total()) break;
    }
    cands.push_back({m, top});

    for (const Cand& c : cands) {
      const XGridSpec xg = grid_for_samples(variant, c.K.samples, alpha);
      CapacityProblem prob(variant, alpha, p, xg, c.K, controls);
      const CapacityEstimate est = prob.solve();
      const double mid = std::sqrt(est.primal_value * std::max(est.dual_value, 1e-300));
      if (mid > 0.0) cv.compact_sup = std::max(cv.compact_sup, c.mass / mid);
    }
  }

  if (p > q) {
    cv.has_wolff = true;
    const double e = q * (p - 1.0) / (p - q);
    for (const Atom& a : mu.atoms()) {
      const SpaceTimePoint at{a.t, a.x};
      const double w = variant == CapacityVariant::R ? wolff_R(mu, p, at, alpha).value
                                                     : wolff_S(mu, p, at, alpha).value;
      if (w > 0.0) cv.wolff_integral += a.w * std::pow(w, e);
    }
  }
  return cv;
}

ConsistencyResult theorem_consistency(CapacityVariant variant, double p, double q,
                                      double alpha, int family_size, std::uint64_t seed,
                                      SolverControls controls) {
  if (family_size < 4) throw std::invalid_argument("consistency: family too small");
  ConsistencyResult res;
  TraceTrialConfig cfg;
  cfg.n_random = 16;
  cfg.n_bumps = 6;
  std::vector<double> conds, ratios;
  for (int k = 0; k < family_size; ++k) {
    const double thickness = std::ldexp(1.0, -k);
    const DiscreteMeasure mu = make_slab(1.0, thickness, 1.0, 1.0, 4, 24);
    const ConditionValues cv =
        condition_values(variant, mu, p, q, alpha, controls, p == q);
    double cond;
    if (p < q)
      cond = cv.ball_sup;
    else if (p == q)
      cond = cv.compact_sup;
    else
      cond = cv.wolff_integral;
    const TraceReport tr = trace_ratio(variant, mu, p, q, alpha, cfg, seed);
    res.rows.push_back({thickness, cond, tr.sup_ratio});
    conds.push_back(cond);
    ratios.push_back(tr.sup_ratio);
  }
  res.spearman = spearman_rho(conds, ratios);
  return res;
}

// ---------------------------------------------------------------------------

StrichartzResult strichartz_sweep(double alpha, double p, int n_trials, std::uint64_t seed) {
  StrichartzResult res;
  res.q_tilde = strichartz_exponent(p, alpha, 1);
  if (n_trials < 1) throw std::invalid_argument("strichartz: need at least one trial");

  KernelSpec spec;
  spec.alpha = alpha;
  spec.dim = 1;

  const GridSpec coarse{8.0, 192, 1};
  const GridSpec fine{8.0, 384, 1};
  const double T = 2.0;
  const int M = 40;

  Rng rng(seed);
  std::vector<std::uint64_t> trial_seeds(n_trials);
  for (auto& s : trial_seeds) s = rng.next_u64();

  auto ratio_of = [&](const GridSpec& grid, int m, std::uint64_t s, double lambda) {
    const SpaceTimeField g = random_bump_field(grid, T, m, 5, s, lambda, alpha);
    const double ng = norm_lp(g, p);
    if (ng == 0.0) return 0.0;
    const SpaceTimeField sg = apply_S(g, spec);
    return norm_lp(sg, res.q_tilde) / ng;
  };

  for (std::uint64_t s : trial_seeds) {
    const double r = ratio_of(coarse, M, s, 1.0);
    res.ratios.push_back(r);
    res.max_ratio = std::max(res.max_ratio, r);
    res.max_ratio_refined = std::max(res.max_ratio_refined, ratio_of(fine, 2 * M, s, 1.0));
    res.max_ratio_rescaled = std::max(res.max_ratio_rescaled, ratio_of(coarse, M, s, 2.0));
  }
  return res;
}

// ---------------------------------------------------------------------------

CapacitaryTrial capacitary_trial(double alpha, double p, std::uint64_t seed,
                                 SolverControls controls) {
  CapacitaryTrial trial;
  const GridSpec grid{6.0, 128, 1};
  const double T = 1.5;
  const int M = 24;
  const SpaceTimeField g = random_bump_field(grid, T, M, 5, seed, 1.0, alpha);
  trial.norm_g_p = norm_lp(g, p);

  KernelSpec spec;
  spec.alpha = alpha;
  spec.dim = 1;
  const SpaceTimeField sg = apply_S_periodic(g, spec);
  double smax = 0.0;
  for (double v : sg.v) smax = std::max(smax, v);
  if (smax <= 0.0) return trial;

  const int ihi = static_cast<int>(std::floor(std::log2(smax)));
  const double norm_p = std::pow(trial.norm_g_p, p);
  for (int i = ihi - 5; i <= ihi; ++i) {
    const double lambda = std::ldexp(1.0, i);
    const SuperlevelResult sl = superlevel_capacity(g, lambda, p, alpha, 4, 2, controls);
    CapacitaryLevel lev;
    lev.lambda = lambda;
    lev.capacity = sl.estimate.primal_value;
    lev.weak_type_rhs = std::pow(lambda, -p) * norm_p;
    lev.weak_ok = lev.capacity <= lev.weak_type_rhs * (1.0 + 2e-6);
    trial.levels.push_back(lev);
    trial.strong_sum_over_norm += std::pow(lambda, p) * lev.capacity / norm_p;
  }
  return trial;
}

}  // namespace fractrace
