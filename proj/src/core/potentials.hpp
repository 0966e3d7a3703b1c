#pragma once

#include <vector>

#include "core/field.hpp"
#include "core/geometry.hpp"
#include "core/kernel.hpp"
#include "core/measure.hpp"

namespace fractrace {

enum class WolffVariant { R, S, DyadicR };

struct WolffPiece {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double mass = 0.0;
};

// mu(B_r) around a fixed point is piecewise constant in r; the potentials
// integrate (mass / r^beta)^{p'-1} dr/r in closed form on each piece, so the
// returned value is exact for atomic measures.
struct WolffProfile {
  SpaceTimePoint eval_point;
  std::vector<WolffPiece> pieces;
  double value = 0.0;
  WolffVariant variant = WolffVariant::R;
  double truncation = kInf;
};

WolffProfile wolff_R(const DiscreteMeasure& mu, double p, const SpaceTimePoint& at,
                     double alpha, double truncation = kInf);

// denominator exponent n + 2 alpha (1 - p); requires p < 1 + n/(2 alpha)
WolffProfile wolff_S(const DiscreteMeasure& mu, double p, const SpaceTimePoint& at,
                     double alpha);

struct WolffDyadicResult {
  double value = 0.0;
  // scale -> contribution, for the scales in [m_lo, m_hi] with mu(Q) > 0
  std::vector<std::pair<int, double>> contributions;
};
WolffDyadicResult wolff_dyadic(const DiscreteMeasure& mu, double p,
                               const SpaceTimePoint& at, double alpha, int m_lo,
                               int m_hi, const SpaceTimePoint& tau = {});

// sup_r r^{-n} mu(B_r(r^{2a}, x)); exact via the window sweep, with the sup
// over each open piece taken as the left-endpoint limit.
double maximal_R(const DiscreteMeasure& mu, const SpacePoint& x, double alpha);

// sup_r r^{-n} mu(B_r(t, x))
double maximal_spacetime(const DiscreteMeasure& mu, const SpaceTimePoint& at, double alpha);

// centered Hardy-Littlewood maximal function of g (given on atoms) w.r.t. mu;
// windows with mu(B_r) = 0 are skipped.
double maximal_centered(const std::vector<double>& g_at_atoms, const DiscreteMeasure& mu,
                        const SpaceTimePoint& at, double alpha);

// dyadic counterpart over cubes in [m_lo, m_hi] containing the query
double maximal_dyadic(const std::vector<double>& g_at_atoms, const DiscreteMeasure& mu,
                      const SpaceTimePoint& at, double alpha, int m_lo, int m_hi,
                      const SpaceTimePoint& tau = {});

struct DualityReport {
  double lhs = 0.0;    // || T^* mu ||_{p'}^{p'} on the grid
  double rhs = 0.0;    // sum_i w_i P mu(atom_i), exact
  double ratio = 1.0;  // lhs/rhs; +inf when rhs = 0 and lhs > 0, 1 when both 0
  bool ratio_finite = true;
  double grid_tail_estimate = 0.0;  // envelope mass outside the norm grid
};

struct DualityGrid {
  double L = 0.0;    // 0 = auto from atom spread and envelope coverage
  int n_nodes = 0;   // 0 = auto
  int time_cells = 64;  // S-variant only
};

DualityReport wolff_duality_ratio(const DiscreteMeasure& mu, double p, double alpha,
                                  WolffVariant variant, const KernelEvaluator& kernel,
                                  const DualityGrid& grid = {});

}  // namespace fractrace
