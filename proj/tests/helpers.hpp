#pragma once

#include <cmath>
#include <vector>

#include "core/geometry.hpp"
#include "core/measure.hpp"
#include "core/rng.hpp"
#include "core/specfun.hpp"

namespace testutil {

using namespace fractrace;

// random atom cloud in [tmin, tmax] x [-span, span]^dim
inline DiscreteMeasure random_measure(Rng& rng, int n_atoms, int dim, double tmin = 0.5,
                                      double tmax = 2.5, double span = 1.5) {
  std::vector<Atom> atoms;
  for (int i = 0; i < n_atoms; ++i) {
    Atom a;
    a.t = rng.uniform(tmin, tmax);
    for (int d = 0; d < dim; ++d) a.x[d] = rng.uniform(-span, span);
    a.w = rng.uniform(0.1, 2.0);
    atoms.push_back(a);
  }
  return DiscreteMeasure(std::move(atoms), dim);
}

// mu(B_r(t, x)) evaluated from scratch through ball_contains only
inline double ball_mass_direct(const DiscreteMeasure& mu, double r, const SpaceTimePoint& at,
                               double alpha) {
  return measure_of_region(mu, ParabolicBall{at.t, at.x, r}, alpha);
}

// Independent oracle for the Wolff potentials: integrate
// (mu(B_r)/r^beta)^{pc-1} dr/r with per-piece Gauss quadrature, taking the
// ball masses pointwise from ball_contains. Breakpoints are only subdivision
// hints; they are validated against ball_contains separately.
inline double wolff_quadrature_oracle(const DiscreteMeasure& mu, double p,
                                      const SpaceTimePoint& at, double alpha, double beta,
                                      double rho = kInf) {
  const double pc = p / (p - 1.0);
  std::vector<double> cuts{0.0};
  for (const Atom& a : mu.atoms()) {
    const Interval iv = containment_interval(a.t, a.x, at.t, at.x, alpha, mu.dim());
    if (!iv.empty()) {
      cuts.push_back(std::min(iv.lo, rho));
      cuts.push_back(std::min(iv.hi, rho));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto& G = gl16();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(a < b)) continue;
    // mass is constant on (a, b); the integrand is smooth there, but use
    // many panels anyway so the oracle does not lean on that fact
    const int panels = 64;
    const double w = (b - a) / panels;
    for (int j = 0; j < panels; ++j) {
      const double lo = a + j * w;
      for (int q = 0; q < 16; ++q) {
        const double r = lo + 0.5 * w * (1.0 + G.node[q]);
        const double m = ball_mass_direct(mu, r, at, alpha);
        if (m > 0.0)
          total += 0.5 * w * G.weight[q] * std::pow(m / std::pow(r, beta), pc - 1.0) / r;
      }
    }
  }
  return total;
}

}  // namespace testutil
