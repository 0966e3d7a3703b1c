#pragma once

#include <string>
#include <vector>

#include "core/capacity.hpp"
#include "core/field.hpp"
#include "core/measure.hpp"
#include "core/potentials.hpp"
#include "core/specfun.hpp"

namespace fractrace {

// q~ = p (1 + 2 a p / (n + 2a - 2 a p)); requires p < 1 + n/(2a).
double strichartz_exponent(double p, double alpha, int dim);

// ---------------------------------------------------------------------------
// built-in measure family (atomizations with documented cell weights)

DiscreteMeasure make_dirac(double t, double x, double w);
// Lebesgue density `mass/(thickness * 2a)` atomized on [t1, t1+thickness] x [-a, a]
DiscreteMeasure make_slab(double t1, double thickness, double halfwidth, double mass,
                          int nt = 4, int nx = 32);
// surface measure on the slice {t = t1}, density per unit length
DiscreteMeasure make_hyperplane(double t1, double halfwidth, double density, int nx = 64);
// coarse slab plus a thin concentrated slab, shifted in space
DiscreteMeasure make_two_scale_union(double t1, double mass);

DiscreteMeasure merge(const DiscreteMeasure& a, const DiscreteMeasure& b);

// ---------------------------------------------------------------------------

struct ScalingRow {
  double r = 0.0;
  double primal = 0.0;
  double dual = 0.0;
};
struct ScalingResult {
  std::vector<ScalingRow> rows;
  LineFit fit;            // log2(geometric bracket midpoint) vs log2 r
  double expected = 0.0;  // n for R, n + 2a(1-p) for S
};
ScalingResult run_scaling(CapacityVariant variant, double alpha, double p,
                          const std::vector<double>& radii, SolverControls controls = {});

// ---------------------------------------------------------------------------

struct TraceTrialConfig {
  GridSpec grid{8.0, 256, 1};
  int time_cells = 32;  // S-variant trials
  int n_random = 24;
  int n_bumps = 8;
  bool adversarial = true;  // include h = (T* mu)^{p'-1}
};

struct TraceReport {
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  double adversarial_ratio = 0.0;
};
TraceReport trace_ratio(CapacityVariant variant, const DiscreteMeasure& mu, double p,
                        double q, double alpha, const TraceTrialConfig& cfg,
                        std::uint64_t seed);

struct ConditionValues {
  double ball_sup = 0.0;
  bool has_ball = false;
  double compact_sup = 0.0;
  bool has_compact = false;
  double wolff_integral = 0.0;
  bool has_wolff = false;
};
// ball test for p < q (closed-form denominators r^{nq/p} / r^{(n+2a(1-p))q/p}),
// compact-set test for p = q (candidate family), Wolff integral for p > q
// (exact at atoms). The Wolff path rejects p = q.
ConditionValues condition_values(CapacityVariant variant, const DiscreteMeasure& mu,
                                 double p, double q, double alpha,
                                 SolverControls controls = {}, bool with_compact = false);

struct ConsistencyRow {
  double thickness = 0.0;
  double condition = 0.0;
  double ratio = 0.0;
};
struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;
  double spearman = 0.0;
};
// co-variation of the regime condition value with the empirical trace ratio
// across the shrinking-slab family
ConsistencyResult theorem_consistency(CapacityVariant variant, double p, double q,
                                      double alpha, int family_size, std::uint64_t seed,
                                      SolverControls controls = {});

// ---------------------------------------------------------------------------

struct StrichartzResult {
  double q_tilde = 0.0;
  double max_ratio = 0.0;
  double max_ratio_refined = 0.0;   // grid resolution doubled
  double max_ratio_rescaled = 0.0;  // trials parabolically rescaled (lambda = 2)
  std::vector<double> ratios;
};
StrichartzResult strichartz_sweep(double alpha, double p, int n_trials, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct CapacitaryLevel {
  double lambda = 0.0;
  double capacity = 0.0;       // primal upper bound
  double weak_type_rhs = 0.0;  // lambda^{-p} ||g||_p^p
  bool weak_ok = false;
};
struct CapacitaryTrial {
  std::vector<CapacitaryLevel> levels;
  double strong_sum_over_norm = 0.0;  // sum_i 2^{ip} C(E_{2^i}) / ||g||_p^p
  double norm_g_p = 0.0;
};
CapacitaryTrial capacitary_trial(double alpha, double p, std::uint64_t seed,
                                 SolverControls controls = {});

// nonnegative seeded test field used by the capacitary and Strichartz suites
SpaceTimeField random_bump_field(const GridSpec& grid, double T, int M, int n_bumps,
                                 std::uint64_t seed, double rescale_lambda = 1.0,
                                 double alpha = 0.5);

}  // namespace fractrace
