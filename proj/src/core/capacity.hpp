#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/geometry.hpp"
#include "core/kernel.hpp"
#include "core/measure.hpp"

namespace fractrace {

enum class CapacityVariant { R, S };

// Finite sample of a compact K in R_+^{1+n}. Samples are snapped to the
// solver grid when a program is assembled; the computed object is the
// capacity of the snapped sample set with respect to the gridded X.
struct CompactSetApprox {
  enum class Provenance { Ball, Superlevel, Custom };
  std::vector<SpaceTimePoint> samples;
  Provenance provenance = Provenance::Custom;

  void validate(int dim) const;
  static CompactSetApprox from_ball(const ParabolicBall& ball, double alpha, int dim,
                                    int nt = 16, int nx = 32);
  static CompactSetApprox from_csv(const std::string& path, int dim);
  void save_csv(const std::string& path, int dim) const;
};

struct SolverControls {
  int max_iter = 2000;
  double tol = 1e-6;       // relative primal-dual gap target
  double feas_tol = 1e-6;  // witness feasibility slack
};

// Discretization of X: a spatial grid for the R-variant, a space-time grid
// (time cells M over [0, T]) for the S-variant.
struct XGridSpec {
  GridSpec space;
  double T = 0.0;
  int M = 0;
};

XGridSpec default_ball_grid(CapacityVariant variant, const ParabolicBall& ball,
                            double alpha, int dim);

// grid sized from the sample cloud: resolves the kernel width at the earliest
// sample time and covers the envelope-significant neighbourhood
XGridSpec grid_for_samples(CapacityVariant variant, const std::vector<SpaceTimePoint>& pts,
                           double alpha);

struct CapacityEstimate {
  double primal_value = kInf;  // objective of a feasible h (upper bound)
  double dual_value = 0.0;     // ||mu||^p of a feasible measure (lower bound)
  std::vector<double> witness_h;
  DiscreteMeasure witness_mu;
  int iterations = 0;
  bool converged = false;
  double gap() const {
    return primal_value > 0.0 ? (primal_value - dual_value) / primal_value : 0.0;
  }
};

// min sum_c h_c^p vol_c  s.t.  (T_alpha h)(sample_j) >= 1, h >= 0, with the
// same discrete propagator (and its exact transpose) used for both the
// constraints and the dual norm. Dual ascent with the closed-form inner
// minimizer gives the primal route; projected gradient on the homogeneous
// ratio gives the dual route. Both witnesses are rescaled to exact
// feasibility, so the bracket is sound regardless of early stopping.
class CapacityProblem {
 public:
  CapacityProblem(CapacityVariant variant, double alpha, double p, const XGridSpec& xgrid,
                  const CompactSetApprox& K, SolverControls controls = {});

  CapacityEstimate solve_primal() const;
  CapacityEstimate solve_dual() const;
  CapacityEstimate solve() const;  // both routes, combined bracket

  // constraint operator and its transpose (grid-value convention)
  std::vector<double> apply(const std::vector<double>& h) const;
  std::vector<double> apply_transpose(const std::vector<double>& w) const;

  const std::vector<SpaceTimePoint>& samples() const { return samples_; }
  long n_cells() const { return static_cast<long>(volume_.size()); }
  const std::vector<double>& cell_volumes() const { return volume_; }
  const XGridSpec& xgrid() const { return xgrid_; }
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  CapacityVariant variant() const { return variant_; }

  DiscreteMeasure measure_from_weights(const std::vector<double>& w) const;

 private:
  struct Iterate;
  void eval_lambda(const std::vector<double>& lambda, Iterate& it) const;
  double dual_norm(const std::vector<double>& w, std::vector<double>* phi = nullptr) const;

  CapacityVariant variant_;
  double alpha_;
  double p_;
  double pc_;
  XGridSpec xgrid_;
  SolverControls controls_;
  std::vector<SpaceTimePoint> samples_;  // snapped, deduped
  std::vector<long> sample_cell_;        // flat index into X cells
  std::vector<double> volume_;           // per-cell volume weights
  // R-variant: samples grouped by distinct time
  std::vector<double> group_time_;
  std::vector<std::vector<int>> group_members_;
};

struct EquilibriumResult {
  DiscreteMeasure mu_K;
  double mass = 0.0;             // mu_K(K)
  double energy = 0.0;           // int (S* mu_K)^{p'} dt dx on the solver grid
  double mutual = 0.0;           // int S_alpha (S* mu_K)^{p'-1} d mu_K
  double primal_value = 0.0;
  double dual_value = 0.0;
  bool converged = false;
};

// Lemma-style equilibrium measure for the S-variant: rescales the dual
// optimizer by capacity^{1/p'} and returns the three mutually-agreeing
// quantities, all evaluated within the solver discretization.
EquilibriumResult equilibrium_measure(const CompactSetApprox& K, double p, double alpha,
                                      const XGridSpec& xgrid, SolverControls controls = {});

struct SuperlevelResult {
  CapacityEstimate estimate;
  std::size_t n_samples = 0;
  double level = 0.0;
  bool empty = false;
};

// Capacity of {S_alpha g >= lambda}; the threshold is applied to the same
// discrete operator that defines the capacity constraints, so g/lambda is an
// exactly feasible candidate and its objective caps the primal value.
SuperlevelResult superlevel_capacity(const SpaceTimeField& g, double lambda, double p,
                                     double alpha, int coarsen_space = 4,
                                     int coarsen_time = 2, SolverControls controls = {});

struct MassThresholdBracket {
  double lower = 0.0;
  double upper = kInf;
  std::string best_candidate;
  // per-candidate: (label, mass, primal, dual)
  std::vector<std::tuple<std::string, double, double, double>> candidates;
};

// Heuristic bracket for inf{ C_p(K) : mu(K) >= lambda } over a declared
// candidate family (whole support, heaviest atoms, balls, Wolff superlevel
// atoms); not the true infimum over all compacts.
MassThresholdBracket mass_threshold_capacity(const DiscreteMeasure& mu, double lambda,
                                             CapacityVariant variant, double p, double alpha,
                                             SolverControls controls = {});

}  // namespace fractrace
