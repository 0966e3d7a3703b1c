// fractrace command-line tool. Parses argv into a JSON command and hands it
// to the shared library through the C interface; all numerics live behind
// ft_run(). Exit codes: 0 ok, 2 a declared property failed, 1 anything else.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fractrace.h"

using json = nlohmann::ordered_json;

namespace {

int run(json cmd, const std::string& config_path) {
  if (!config_path.empty()) {
    std::FILE* f = std::fopen(config_path.c_str(), "rb");
    if (!f) {
      std::fprintf(stderr, "error: cannot open config %s\n", config_path.c_str());
      return 1;
    }
    std::string text;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, n);
    std::fclose(f);
    json base = json::parse(text, nullptr, false);
    if (base.is_discarded()) {
      std::fprintf(stderr, "error: config %s is not valid JSON\n", config_path.c_str());
      return 1;
    }
    // command-line settings win over the config file
    base.update(cmd);
    cmd = std::move(base);
  }

  char* summary = nullptr;
  const ft_status st = ft_run(cmd.dump().c_str(), &summary);
  if (summary) {
    std::printf("%s\n", summary);
    ft_string_free(summary);
  }
  if (st == FT_OK) return 0;
  if (st == FT_ERR_PROPERTY_FAILED) {
    std::fprintf(stderr, "property failure: %s\n", ft_last_error());
    return 2;
  }
  std::fprintf(stderr, "error: %s\n", ft_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional heat semigroup potential-theory toolkit"};
  app.require_subcommand(1);

  std::string out_dir = "fractrace_out";
  std::string config_path;
  std::uint64_t seed = 1;
  app.add_option("--out", out_dir, "output directory for CSV/JSON artifacts");
  app.add_option("--config", config_path, "JSON config file (command-line options override)");
  app.add_option("--seed", seed, "random seed");

  // kernel eval / kernel validate
  auto* kernel = app.add_subcommand("kernel", "evaluate or validate the fractional heat kernel");
  kernel->require_subcommand(1);
  double k_alpha = 0.5, k_t = 1.0, k_tol = 0.0;
  int k_dim = 1;
  std::string k_x = "0", k_suite = "mass";
  auto* keval = kernel->add_subcommand("eval", "numerically evaluate K_t(x)");
  keval->add_option("--alpha", k_alpha)->required();
  keval->add_option("--dim", k_dim);
  keval->add_option("--t", k_t)->required();
  keval->add_option("--x", k_x, "comma-separated coordinates");
  keval->add_option("--tol", k_tol);
  auto* kval = kernel->add_subcommand("validate", "run one validation suite");
  kval->add_option("--alpha", k_alpha)->required();
  kval->add_option("--dim", k_dim);
  kval->add_option("--suite", k_suite, "mass | scaling | envelope | closed-form | stable")
      ->required();

  // wolff
  auto* wolff = app.add_subcommand("wolff", "Hedberg-Wolff potentials of a discrete measure");
  std::string w_variant = "R", w_measure, w_points;
  double w_p = 2.0, w_alpha = 0.5, w_rho = 0.0;
  bool w_at_atoms = false;
  int w_mlo = -20, w_mhi = 20;
  wolff->add_option("--variant", w_variant, "R | S | dyadic")->required();
  wolff->add_option("--measure", w_measure)->required();
  wolff->add_option("--p", w_p)->required();
  wolff->add_option("--alpha", w_alpha)->required();
  wolff->add_option("--points", w_points, "CSV of evaluation points (t,x1[,x2])");
  wolff->add_flag("--at-atoms", w_at_atoms, "evaluate at the atoms of the measure");
  wolff->add_option("--rho", w_rho, "truncation radius (R variant)");
  wolff->add_option("--m-lo", w_mlo);
  wolff->add_option("--m-hi", w_mhi);

  // maximal
  auto* maximal = app.add_subcommand("maximal", "parabolic maximal functions");
  std::string m_variant = "R", m_measure, m_points, m_g;
  double m_alpha = 0.5;
  bool m_at_atoms = false;
  int m_mlo = -20, m_mhi = 20;
  maximal->add_option("--variant", m_variant, "R | spacetime | centered | dyadic")->required();
  maximal->add_option("--measure", m_measure)->required();
  maximal->add_option("--alpha", m_alpha)->required();
  maximal->add_option("--points", m_points);
  maximal->add_flag("--at-atoms", m_at_atoms);
  maximal->add_option("--g", m_g, "CSV of g values at atoms (centered/dyadic)");
  maximal->add_option("--m-lo", m_mlo);
  maximal->add_option("--m-hi", m_mhi);

  // capacity
  auto* capacity = app.add_subcommand("capacity", "certified capacity brackets");
  capacity->require_subcommand(1);
  std::string c_variant = "R", c_set, c_field, c_grid;
  double c_p = 2.0, c_alpha = 0.5, c_t0 = 0.0, c_x0 = 0.0, c_lambda = 1.0, c_tol = 0.0;
  int c_max_iter = 0;
  std::vector<double> c_r;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--variant", c_variant, "R | S")->required();
    sub->add_option("--p", c_p)->required();
    sub->add_option("--alpha", c_alpha)->required();
    sub->add_option("--grid", c_grid, "L,h[,T,M] override");
    sub->add_option("--max-iter", c_max_iter);
    sub->add_option("--tol", c_tol);
  };
  auto* cball = capacity->add_subcommand("ball", "parabolic ball instances");
  add_common(cball);
  cball->add_option("--r", c_r, "radius (repeatable for a sweep)")->required();
  cball->add_option("--t0", c_t0);
  cball->add_option("--x0", c_x0);
  auto* cfile = capacity->add_subcommand("file", "compact set from a sample CSV");
  add_common(cfile);
  cfile->add_option("--set", c_set)->required();
  auto* csuper = capacity->add_subcommand("superlevel", "superlevel set of S_alpha g");
  add_common(csuper);
  csuper->add_option("--field", c_field, "space-time field CSV (with .json sidecar)")->required();
  csuper->add_option("--lambda", c_lambda)->required();

  // scaling
  auto* scaling = app.add_subcommand("scaling", "ball-capacity scaling law fit");
  std::string s_variant = "R";
  double s_alpha = 0.5, s_p = 2.0;
  std::vector<double> s_r;
  scaling->add_option("--variant", s_variant)->required();
  scaling->add_option("--alpha", s_alpha)->required();
  scaling->add_option("--p", s_p)->required();
  scaling->add_option("--r", s_r, "radii (default 2^-3 .. 2^2)");

  // trace
  auto* trace = app.add_subcommand("trace", "trace-inequality testers");
  std::string t_variant = "R", t_measure, t_builtin, t_suite;
  double t_p = 2.0, t_q = 2.0, t_alpha = 0.5;
  int t_trials = 24, t_family = 7;
  trace->add_option("--variant", t_variant)->required();
  trace->add_option("--p", t_p)->required();
  trace->add_option("--q", t_q)->required();
  trace->add_option("--alpha", t_alpha)->required();
  trace->add_option("--measure", t_measure);
  trace->add_option("--builtin", t_builtin, "dirac | slab | hyperplane | two-scale");
  trace->add_option("--trials", t_trials);
  trace->add_option("--suite", t_suite, "consistency: condition/ratio co-variation sweep");
  trace->add_option("--family-size", t_family);

  // strichartz
  auto* strich = app.add_subcommand("strichartz", "smoothing-exponent ratio sweep");
  double sz_alpha = 0.5, sz_p = 1.5;
  int sz_trials = 16;
  strich->add_option("--alpha", sz_alpha)->required();
  strich->add_option("--p", sz_p)->required();
  strich->add_option("--trials", sz_trials);

  // capacitary
  auto* capy = app.add_subcommand("capacitary", "weak/strong capacitary inequality sweep");
  double cy_alpha = 0.5, cy_p = 1.5;
  int cy_seeds = 5;
  capy->add_option("--alpha", cy_alpha)->required();
  capy->add_option("--p", cy_p)->required();
  capy->add_option("--seeds", cy_seeds);

  CLI11_PARSE(app, argc, argv);

  json cmd;
  cmd["out"] = out_dir;
  cmd["seed"] = seed;

  if (keval->parsed()) {
    cmd["cmd"] = "kernel-eval";
    cmd["alpha"] = k_alpha;
    cmd["dim"] = k_dim;
    cmd["t"] = k_t;
    cmd["x"] = k_x;
    if (k_tol > 0) cmd["tol"] = k_tol;
  } else if (kval->parsed()) {
    cmd["cmd"] = "kernel-validate";
    cmd["alpha"] = k_alpha;
    cmd["dim"] = k_dim;
    cmd["suite"] = k_suite;
  } else if (wolff->parsed()) {
    cmd["cmd"] = "wolff";
    cmd["variant"] = w_variant;
    cmd["measure"] = w_measure;
    cmd["p"] = w_p;
    cmd["alpha"] = w_alpha;
    if (w_at_atoms) cmd["at_atoms"] = true;
    if (!w_points.empty()) cmd["points"] = w_points;
    if (w_rho > 0) cmd["rho"] = w_rho;
    cmd["m_lo"] = w_mlo;
    cmd["m_hi"] = w_mhi;
  } else if (maximal->parsed()) {
    cmd["cmd"] = "maximal";
    cmd["variant"] = m_variant;
    cmd["measure"] = m_measure;
    cmd["alpha"] = m_alpha;
    if (m_at_atoms) cmd["at_atoms"] = true;
    if (!m_points.empty()) cmd["points"] = m_points;
    if (!m_g.empty()) cmd["g"] = m_g;
    cmd["m_lo"] = m_mlo;
    cmd["m_hi"] = m_mhi;
  } else if (capacity->parsed()) {
    cmd["cmd"] = "capacity";
    cmd["variant"] = c_variant;
    cmd["p"] = c_p;
    cmd["alpha"] = c_alpha;
    if (c_max_iter > 0) cmd["max_iter"] = c_max_iter;
    if (c_tol > 0) cmd["tol"] = c_tol;
    if (!c_grid.empty()) {
      json g;
      double L = 0, h = 0, T = 0;
      int M = 0;
      const int got = std::sscanf(c_grid.c_str(), "%lf,%lf,%lf,%d", &L, &h, &T, &M);
      if (got < 2) {
        std::fprintf(stderr, "error: --grid wants L,h[,T,M]\n");
        return 1;
      }
      g["L"] = L;
      g["h"] = h;
      if (got >= 3) g["T"] = T;
      if (got >= 4) g["M"] = M;
      cmd["grid"] = g;
    }
    if (cball->parsed()) {
      cmd["mode"] = "ball";
      cmd["r"] = c_r;
      cmd["t0"] = c_t0;
      cmd["x0"] = c_x0;
    } else if (cfile->parsed()) {
      cmd["mode"] = "file";
      cmd["set"] = c_set;
    } else {
      cmd["mode"] = "superlevel";
      cmd["field"] = c_field;
      cmd["lambda"] = c_lambda;
    }
  } else if (scaling->parsed()) {
    cmd["cmd"] = "scaling";
    cmd["variant"] = s_variant;
    cmd["alpha"] = s_alpha;
    cmd["p"] = s_p;
    if (!s_r.empty()) cmd["r"] = s_r;
  } else if (trace->parsed()) {
    cmd["cmd"] = "trace";
    cmd["variant"] = t_variant;
    cmd["p"] = t_p;
    cmd["q"] = t_q;
    cmd["alpha"] = t_alpha;
    cmd["trials"] = t_trials;
    if (!t_suite.empty()) cmd["suite"] = t_suite;
    cmd["family_size"] = t_family;
    if (!t_measure.empty()) cmd["measure"] = t_measure;
    if (!t_builtin.empty()) cmd["builtin"] = {{"kind", t_builtin}};
  } else if (strich->parsed()) {
    cmd["cmd"] = "strichartz";
    cmd["alpha"] = sz_alpha;
    cmd["p"] = sz_p;
    cmd["trials"] = sz_trials;
  } else if (capy->parsed()) {
    cmd["cmd"] = "capacitary";
    cmd["alpha"] = cy_alpha;
    cmd["p"] = cy_p;
    cmd["seeds"] = cy_seeds;
  }

  return run(std::move(cmd), config_path);
}
