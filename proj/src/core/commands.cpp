#include "core/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/capacity.hpp"
#include "core/kernel.hpp"
#include "core/potentials.hpp"
#include "core/rng.hpp"
#include "core/semigroup.hpp"
#include "core/tracelab.hpp"

namespace fractrace {

namespace {

SpacePoint parse_point(const json& v, int dim) {
  SpacePoint p{0.0, 0.0, 0.0};
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',') && i < 3) p[i++] = std::stod(tok);
    if (i != dim) throw std::invalid_argument("point: expected " + std::to_string(dim) + " coords");
  } else {
    if (static_cast<int>(v.size()) != dim)
      throw std::invalid_argument("point: expected " + std::to_string(dim) + " coords");
    for (int i = 0; i < dim; ++i) p[i] = v[i].get<double>();
  }
  return p;
}

std::vector<SpaceTimePoint> load_points(const std::string& path, int dim) {
  return CompactSetApprox::from_csv(path, dim).samples;
}

std::vector<SpaceTimePoint> points_from_cmd(const json& cmd, const DiscreteMeasure& mu) {
  if (cmd.value("at_atoms", false)) {
    std::vector<SpaceTimePoint> pts;
    for (const Atom& a : mu.atoms()) pts.push_back({a.t, a.x});
    return pts;
  }
  if (!cmd.contains("points"))
    throw std::invalid_argument("need either \"points\" file or \"at_atoms\": true");
  return load_points(cmd.at("points").get<std::string>(), mu.dim());
}

DiscreteMeasure measure_from_cmd(const json& cmd) {
  if (cmd.contains("measure")) return DiscreteMeasure::load_csv(cmd.at("measure"));
  if (cmd.contains("builtin")) {
    const json& b = cmd.at("builtin");
    const std::string kind = b.at("kind");
    if (kind == "dirac")
      return make_dirac(b.value("t", 1.0), b.value("x", 0.0), b.value("w", 1.0));
    if (kind == "slab")
      return make_slab(b.value("t", 1.0), b.value("thickness", 0.5), b.value("halfwidth", 1.0),
                       b.value("mass", 1.0), b.value("nt", 4), b.value("nx", 32));
    if (kind == "hyperplane")
      return make_hyperplane(b.value("t", 1.0), b.value("halfwidth", 1.0),
                             b.value("density", 1.0), b.value("nx", 64));
    if (kind == "two-scale") return make_two_scale_union(b.value("t", 1.0), b.value("mass", 1.0));
    throw std::invalid_argument("unknown builtin measure: " + kind);
  }
  throw std::invalid_argument("need \"measure\" file or \"builtin\" spec");
}

SolverControls controls_from_cmd(const json& cmd) {
  SolverControls c;
  c.max_iter = cmd.value("max_iter", c.max_iter);
  c.tol = cmd.value("tol", c.tol);
  return c;
}

std::string point_csv_header(int dim) {
  std::string h = "t";
  for (int i = 0; i < dim; ++i) h += ",x" + std::to_string(i + 1);
  return h;
}

json finish(const std::string& out, json summary, bool all_pass) {
  summary["status"] = all_pass ? "ok" : "property_failure";
  if (!out.empty()) write_summary(out, summary);
  return summary;
}

// ---------------------------------------------------------------------------

json cmd_kernel_eval(const json& cmd) {
  KernelSpec spec;
  spec.alpha = cmd.at("alpha");
  spec.dim = cmd.value("dim", 1);
  spec.freq_cutoff = cmd.value("freq_cutoff", 0.0);
  spec.freq_nodes = cmd.value("freq_nodes", 256);
  const double t = cmd.at("t");
  const SpacePoint x = parse_point(cmd.at("x"), spec.dim);
  const double tol = cmd.value("tol", 0.0);
  const KernelValue kv = eval_numeric(spec, t, x, tol);
  json s;
  s["value"] = kv.value;
  s["abs_error_bound"] = kv.abs_error_bound;
  s["converged"] = kv.converged;
  if (spec.has_closed_form()) s["closed_form"] = eval_closed_form(spec, t, x).value;
  return finish(cmd.value("out", ""), s, kv.converged);
}

json cmd_kernel_validate(const json& cmd) {
  const std::string suite = cmd.at("suite");
  KernelSpec spec;
  spec.alpha = cmd.at("alpha");
  spec.dim = cmd.value("dim", 1);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);
  const std::uint64_t seed = cmd.value("seed", 1u);
  Rng rng(seed);

  CsvWriter csv(out + "/kernel_validate.csv",
                {"suite", "alpha", "n", "t", "metric", "value", "bound", "pass"});
  bool all_pass = true;
  auto emit = [&](double t, const std::string& metric, double value, double bound, bool pass) {
    csv.row_mixed({suite, fmt_num(spec.alpha), std::to_string(spec.dim), fmt_num(t), metric,
                   fmt_num(value), fmt_num(bound), pass ? "1" : "0"});
    all_pass = all_pass && pass;
  };

  if (suite == "mass") {
    for (double t : {0.1, 1.0, 10.0}) {
      const MassReport rep = check_mass(spec, t, 0.0, 1e-4);
      emit(t, "mass_defect", rep.defect, 1e-3, rep.defect <= 1e-3);
    }
  } else if (suite == "scaling") {
    for (int i = 0; i < 12; ++i) {
      const double t = std::exp(rng.uniform(std::log(0.2), std::log(8.0)));
      SpacePoint x{0, 0, 0};
      for (int d = 0; d < spec.dim; ++d) x[d] = rng.uniform(-3.0, 3.0);
      const SelfSimilarityReport rep = check_self_similarity(spec, t, x, 1e-7);
      emit(t, "self_similarity_residual", rep.residual, rep.combined_bound,
           rep.residual <= rep.combined_bound + 1e-14);
    }
  } else if (suite == "envelope") {
    std::vector<double> ts, xs;
    for (int i = 0; i <= 12; ++i) ts.push_back(std::pow(10.0, -2.0 + i / 3.0));
    for (int i = 0; i <= 25; ++i) xs.push_back(2.0 * i);
    const EnvelopeScan scan = envelope_ratio_scan(spec, ts, xs);
    const bool ok = scan.min_ratio > 0.0 && std::isfinite(scan.max_ratio) &&
                    (scan.flagged || scan.max_ratio / scan.min_ratio <= 1000.0);
    emit(0.0, "envelope_min_ratio", scan.min_ratio, 0.0, ok);
    emit(0.0, "envelope_max_ratio", scan.max_ratio, 0.0, ok);
    if (scan.flagged) emit(0.0, "envelope_flagged_alpha_1", 1.0, 0.0, true);
  } else if (suite == "closed-form") {
    if (!spec.has_closed_form())
      throw std::invalid_argument("closed-form suite needs alpha in {1/2, 1}");
    for (int i = 0; i < 20; ++i) {
      const double t = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      SpacePoint x{0, 0, 0};
      for (int d = 0; d < spec.dim; ++d) x[d] = rng.uniform(-5.0, 5.0);
      const KernelValue num = eval_numeric(spec, t, x, spec.default_tol());
      const KernelValue cf = eval_closed_form(spec, t, x);
      const double diff = std::abs(num.value - cf.value);
      emit(t, "closed_form_diff", diff, num.abs_error_bound, diff <= num.abs_error_bound);
    }
  } else if (suite == "stable") {
    if (spec.alpha >= 1.0) throw std::invalid_argument("stable suite needs alpha < 1");
    const int count = cmd.value("samples", 1000000);
    const auto pts = sample_stable(spec, 1.0, count, seed);
    double med_check = 0.0;
    const double h = 0.1;
    long inside = 0;
    for (const auto& p : pts) {
      bool in = true;
      for (int d = 0; d < spec.dim; ++d) in = in && std::abs(p[d]) <= h;
      inside += in;
      med_check += (p[0] > 0.0) - (p[0] < 0.0);
    }
    const double density_est = inside / (std::pow(2.0 * h, spec.dim) * count);
    const double density_ref = eval_numeric(spec, 1.0, SpacePoint{0, 0, 0}, 1e-8).value;
    const double rel = std::abs(density_est - density_ref) / density_ref;
    emit(1.0, "density_at_0_rel_err", rel, 0.02, rel <= 0.02);
    const double sign_bias = std::abs(med_check) / count;
    emit(1.0, "sign_bias", sign_bias, 0.005, sign_bias <= 0.005);
  } else {
    throw std::invalid_argument("unknown kernel suite: " + suite);
  }
  csv.close();

  json s;
  s["suite"] = suite;
  s["alpha"] = spec.alpha;
  s["dim"] = spec.dim;
  s["csv"] = csv.path();
  s["all_pass"] = all_pass;
  return finish(out, s, all_pass);
}

json cmd_wolff(const json& cmd) {
  const std::string variant = cmd.at("variant");
  const DiscreteMeasure mu = measure_from_cmd(cmd);
  const double p = cmd.at("p");
  const double alpha = cmd.at("alpha");
  const double rho = cmd.value("rho", kInf);
  const auto pts = points_from_cmd(cmd, mu);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);

  std::vector<std::string> cols;
  {
    std::stringstream ss(point_csv_header(mu.dim()));
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    cols.push_back("value");
  }
  CsvWriter csv(out + "/wolff.csv", cols);
  double vmax = 0.0;
  for (const auto& q : pts) {
    double v;
    if (variant == "R")
      v = wolff_R(mu, p, q, alpha, rho).value;
    else if (variant == "S")
      v = wolff_S(mu, p, q, alpha).value;
    else if (variant == "dyadic")
      v = wolff_dyadic(mu, p, q, alpha, cmd.value("m_lo", -20), cmd.value("m_hi", 20)).value;
    else
      throw std::invalid_argument("wolff variant must be R, S or dyadic");
    vmax = std::max(vmax, v);
    std::vector<double> row{q.t};
    for (int d = 0; d < mu.dim(); ++d) row.push_back(q.x[d]);
    row.push_back(v);
    csv.row(row);
  }
  csv.close();
  json s;
  s["variant"] = variant;
  s["points"] = pts.size();
  s["max_value"] = vmax;
  s["csv"] = csv.path();
  return finish(out, s, true);
}

json cmd_maximal(const json& cmd) {
  const std::string variant = cmd.at("variant");
  const DiscreteMeasure mu = measure_from_cmd(cmd);
  const double alpha = cmd.at("alpha");
  const auto pts = points_from_cmd(cmd, mu);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);

  std::vector<double> g;
  if (variant == "centered" || variant == "dyadic") {
    if (cmd.contains("g")) {
      std::ifstream in(cmd.at("g").get<std::string>());
      if (!in) throw std::runtime_error("maximal: cannot open g file");
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line))
        if (!line.empty()) g.push_back(std::stod(line));
    } else {
      g.assign(mu.size(), 1.0);
    }
    if (g.size() != mu.size())
      throw std::invalid_argument("maximal: g must list one value per atom");
  }

  std::vector<std::string> cols;
  {
    std::stringstream ss(point_csv_header(mu.dim()));
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    cols.push_back("value");
  }
  CsvWriter csv(out + "/maximal.csv", cols);
  double vmax = 0.0;
  for (const auto& q : pts) {
    double v;
    if (variant == "R")
      v = maximal_R(mu, q.x, alpha);
    else if (variant == "spacetime")
      v = maximal_spacetime(mu, q, alpha);
    else if (variant == "centered")
      v = maximal_centered(g, mu, q, alpha);
    else if (variant == "dyadic")
      v = maximal_dyadic(g, mu, q, alpha, cmd.value("m_lo", -20), cmd.value("m_hi", 20));
    else
      throw std::invalid_argument("maximal variant must be R, spacetime, centered or dyadic");
    vmax = std::max(vmax, v);
    std::vector<double> row{variant == "R" ? 0.0 : q.t};
    for (int d = 0; d < mu.dim(); ++d) row.push_back(q.x[d]);
    row.push_back(v);
    csv.row(row);
  }
  csv.close();
  json s;
  s["variant"] = variant;
  s["points"] = pts.size();
  s["max_value"] = vmax;
  s["csv"] = csv.path();
  return finish(out, s, true);
}

CapacityVariant variant_from(const json& cmd) {
  const std::string v = cmd.at("variant");
  if (v == "R") return CapacityVariant::R;
  if (v == "S") return CapacityVariant::S;
  throw std::invalid_argument("variant must be R or S");
}

json cmd_capacity(const json& cmd) {
  const std::string mode = cmd.at("mode");
  const CapacityVariant variant = variant_from(cmd);
  const double p = cmd.at("p");
  const double alpha = cmd.at("alpha");
  const SolverControls controls = controls_from_cmd(cmd);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);

  auto grid_override = [&](XGridSpec xg) {
    if (cmd.contains("grid")) {
      const json& gj = cmd.at("grid");
      xg.space.L = gj.at("L");
      xg.space.n_nodes = static_cast<int>(std::lround(2.0 * xg.space.L / gj.at("h").get<double>()));
      if (variant == CapacityVariant::S) {
        xg.T = gj.value("T", xg.T);
        xg.M = gj.value("M", xg.M);
      }
    }
    return xg;
  };

  json s;
  bool ok = true;
  if (mode == "ball") {
    std::vector<double> radii;
    if (cmd.at("r").is_array())
      for (const auto& r : cmd.at("r")) radii.push_back(r.get<double>());
    else
      radii.push_back(cmd.at("r").get<double>());
    const double t0 = cmd.value("t0", 0.0);
    const double x0 = cmd.value("x0", 0.0);

    CsvWriter csv(out + "/capacity_sweep.csv", {"r", "primal", "dual"});
    CapacityEstimate last;
    for (double r : radii) {
      const ParabolicBall ball{t0, make_point(x0), r};
      const XGridSpec xg = grid_override(default_ball_grid(variant, ball, alpha, 1));
      CapacityProblem prob(variant, alpha, p, xg, CompactSetApprox::from_ball(ball, alpha, 1),
                           controls);
      last = prob.solve();
      csv.row({r, last.primal_value, last.dual_value});
      ok = ok && last.dual_value <= last.primal_value * (1.0 + 1e-12);
    }
    csv.close();
    s["csv"] = csv.path();
    s["primal"] = last.primal_value;
    s["dual"] = last.dual_value;
    s["gap"] = last.gap();
    s["converged"] = last.converged;
    const std::string wpath = out + "/capacity_witness_mu.csv";
    last.witness_mu.save_csv(wpath);
    s["witnesses_path"] = wpath;
  } else if (mode == "file") {
    const CompactSetApprox K = CompactSetApprox::from_csv(cmd.at("set"), 1);
    XGridSpec xg = grid_override(grid_for_samples(variant, K.samples, alpha));
    CapacityProblem prob(variant, alpha, p, xg, K, controls);
    const CapacityEstimate est = prob.solve();
    s["primal"] = est.primal_value;
    s["dual"] = est.dual_value;
    s["gap"] = est.gap();
    s["converged"] = est.converged;
    const std::string wpath = out + "/capacity_witness_mu.csv";
    est.witness_mu.save_csv(wpath);
    s["witnesses_path"] = wpath;
    ok = est.dual_value <= est.primal_value * (1.0 + 1e-12);
  } else if (mode == "superlevel") {
    if (variant != CapacityVariant::S)
      throw std::invalid_argument("superlevel capacity is an S-variant notion");
    const SpaceTimeField g = SpaceTimeField::load_csv(cmd.at("field"));
    const double lambda = cmd.at("lambda");
    const SuperlevelResult sl = superlevel_capacity(g, lambda, p, alpha, cmd.value("coarsen", 4),
                                                    cmd.value("coarsen_t", 2), controls);
    s["lambda"] = lambda;
    s["empty"] = sl.empty;
    s["n_samples"] = sl.n_samples;
    s["primal"] = sl.estimate.primal_value;
    s["dual"] = sl.estimate.dual_value;
    s["gap"] = sl.estimate.gap();
    s["converged"] = sl.estimate.converged;
  } else {
    throw std::invalid_argument("capacity mode must be ball, file or superlevel");
  }
  return finish(out, s, ok);
}

json cmd_scaling(const json& cmd) {
  const CapacityVariant variant = variant_from(cmd);
  const double alpha = cmd.at("alpha");
  const double p = cmd.at("p");
  std::vector<double> radii;
  if (cmd.contains("r"))
    for (const auto& r : cmd.at("r")) radii.push_back(r.get<double>());
  else
    for (int i = -3; i <= 2; ++i) radii.push_back(std::ldexp(1.0, i));
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);

  const ScalingResult res = run_scaling(variant, alpha, p, radii, controls_from_cmd(cmd));
  CsvWriter csv(out + "/scaling.csv", {"r", "primal", "dual"});
  for (const auto& row : res.rows) csv.row({row.r, row.primal, row.dual});
  csv.close();

  const double tol = variant == CapacityVariant::R ? 0.2 : 0.3;
  const bool ok = std::abs(res.fit.slope - res.expected) <= tol;
  json s;
  s["csv"] = csv.path();
  s["slope"] = res.fit.slope;
  s["slope_halfwidth"] = res.fit.slope_halfwidth;
  s["expected_slope"] = res.expected;
  s["pass"] = ok;
  return finish(out, s, ok);
}

json cmd_trace(const json& cmd) {
  const CapacityVariant variant = variant_from(cmd);
  const double p = cmd.at("p");
  const double q = cmd.at("q");
  const double alpha = cmd.at("alpha");
  const std::uint64_t seed = cmd.value("seed", 1u);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);
  const SolverControls controls = controls_from_cmd(cmd);

  if (cmd.value("suite", "") == "consistency") {
    const ConsistencyResult res =
        theorem_consistency(variant, p, q, alpha, cmd.value("family_size", 7), seed, controls);
    CsvWriter csv(out + "/consistency.csv", {"thickness", "condition", "ratio"});
    for (const auto& row : res.rows) csv.row({row.thickness, row.condition, row.ratio});
    csv.close();
    const bool ok = res.spearman >= 0.9;
    json s;
    s["csv"] = csv.path();
    s["spearman"] = res.spearman;
    s["pass"] = ok;
    return finish(out, s, ok);
  }

  const DiscreteMeasure mu = measure_from_cmd(cmd);
  TraceTrialConfig cfg;
  cfg.n_random = cmd.value("trials", 24);
  const TraceReport rep = trace_ratio(variant, mu, p, q, alpha, cfg, seed);
  const ConditionValues cv = condition_values(variant, mu, p, q, alpha, controls, p == q);

  CsvWriter csv(out + "/trace_trials.csv", {"trial", "ratio"});
  for (std::size_t i = 0; i < rep.ratios.size(); ++i)
    csv.row({static_cast<double>(i), rep.ratios[i]});
  csv.close();

  json s;
  s["csv"] = csv.path();
  s["sup_ratio"] = rep.sup_ratio;
  s["adversarial_ratio"] = rep.adversarial_ratio;
  if (cv.has_ball) s["ball_sup"] = cv.ball_sup;
  if (cv.has_compact) s["compact_sup"] = cv.compact_sup;
  if (cv.has_wolff) s["wolff_integral"] = cv.wolff_integral;
  return finish(out, s, true);
}

json cmd_strichartz(const json& cmd) {
  const double alpha = cmd.at("alpha");
  const double p = cmd.at("p");
  const std::uint64_t seed = cmd.value("seed", 1u);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);

  const StrichartzResult res = strichartz_sweep(alpha, p, cmd.value("trials", 16), seed);
  CsvWriter csv(out + "/strichartz.csv", {"trial", "ratio"});
  for (std::size_t i = 0; i < res.ratios.size(); ++i)
    csv.row({static_cast<double>(i), res.ratios[i]});
  csv.close();

  const double refine_shift = std::abs(res.max_ratio_refined - res.max_ratio) / res.max_ratio;
  const double rescale_shift = std::abs(res.max_ratio_rescaled - res.max_ratio) / res.max_ratio;
  const bool ok = refine_shift <= 0.15 && rescale_shift <= 0.10;
  json s;
  s["csv"] = csv.path();
  s["q_tilde"] = res.q_tilde;
  s["max_ratio"] = res.max_ratio;
  s["max_ratio_refined"] = res.max_ratio_refined;
  s["max_ratio_rescaled"] = res.max_ratio_rescaled;
  s["refine_shift"] = refine_shift;
  s["rescale_shift"] = rescale_shift;
  s["pass"] = ok;
  return finish(out, s, ok);
}

json cmd_capacitary(const json& cmd) {
  const double alpha = cmd.at("alpha");
  const double p = cmd.at("p");
  const int n_seeds = cmd.value("seeds", 5);
  const std::uint64_t seed0 = cmd.value("seed", 1u);
  const std::string out = cmd.value("out", "fractrace_out");
  ensure_dir(out);
  const SolverControls controls = controls_from_cmd(cmd);

  CsvWriter csv(out + "/capacitary.csv",
                {"seed", "lambda", "capacity", "weak_rhs", "weak_ok"});
  bool weak_all = true;
  double strong_max = 0.0;
  for (int k = 0; k < n_seeds; ++k) {
    const CapacitaryTrial trial = capacitary_trial(alpha, p, seed0 + k, controls);
    for (const auto& lev : trial.levels) {
      csv.row({static_cast<double>(k), lev.lambda, lev.capacity, lev.weak_type_rhs,
               lev.weak_ok ? 1.0 : 0.0});
      weak_all = weak_all && lev.weak_ok;
    }
    strong_max = std::max(strong_max, trial.strong_sum_over_norm);
  }
  csv.close();
  json s;
  s["csv"] = csv.path();
  s["weak_all_ok"] = weak_all;
  s["strong_sum_max"] = strong_max;
  return finish(out, s, weak_all);
}

}  // namespace

json run_command(const json& cmd) {
  const std::string c = cmd.at("cmd");
  if (c == "kernel-eval") return cmd_kernel_eval(cmd);
  if (c == "kernel-validate") return cmd_kernel_validate(cmd);
  if (c == "wolff") return cmd_wolff(cmd);
  if (c == "maximal") return cmd_maximal(cmd);
  if (c == "capacity") return cmd_capacity(cmd);
  if (c == "scaling") return cmd_scaling(cmd);
  if (c == "trace") return cmd_trace(cmd);
  if (c == "strichartz") return cmd_strichartz(cmd);
  if (c == "capacitary") return cmd_capacitary(cmd);
  throw std::invalid_argument("unknown command: " + c);
}

}  // namespace fractrace
