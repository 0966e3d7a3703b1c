#pragma once

#include <vector>

#include "core/field.hpp"
#include "core/kernel.hpp"
#include "core/measure.hpp"

namespace fractrace {

// Free propagation: spectral multiplier exp(-t |xi|^{2 alpha}) on the
// periodic extension of the box. Input support must stay in the inner
// half-box (aliasing guard); t = 0 returns the field unchanged.
SpatialField apply_R(const SpatialField& f, double t, const KernelSpec& spec);

// Guard-free periodic propagation (used where the periodic discretization
// itself is the object, e.g. per-mode oracles and capacity programs).
SpatialField apply_R_periodic(const SpatialField& f, double t, const KernelSpec& spec);

// Duhamel integral: composite trapezoid in s over [0, t_j] for every output
// time, each slice propagated spectrally. Output at t = 0 is zero.
SpaceTimeField apply_S(const SpaceTimeField& g, const KernelSpec& spec);

// Same map without the support guard: the raw operator of the periodic
// discretization. Capacity programs are posed directly in terms of it.
SpaceTimeField apply_S_periodic(const SpaceTimeField& g, const KernelSpec& spec);

// Exact transpose of apply_S as a linear map on grid values (unweighted
// pairing): anticausal accumulation with the same trapezoid weights.
SpaceTimeField apply_S_transpose(const SpaceTimeField& h, const KernelSpec& spec);

// Adjoint potentials of a discrete measure, by exact kernel sums over atoms.
std::vector<double> adjoint_R(const DiscreteMeasure& mu, const std::vector<SpacePoint>& xs,
                              const KernelEvaluator& kernel);
std::vector<double> adjoint_S(const DiscreteMeasure& mu,
                              const std::vector<SpaceTimePoint>& queries,
                              const KernelEvaluator& kernel);

// Spectral fractional Laplacian (multiplier |xi|^{2 alpha}).
SpatialField fractional_laplacian(const SpatialField& f, double alpha);

// Max-norm of (d_t u + (-Delta)^alpha u - g) over interior times, where
// u = apply_R(f, .) + apply_S(g) and d_t is the centered difference.
double pde_residual(const SpatialField& f, const SpaceTimeField& g, const KernelSpec& spec);

}  // namespace fractrace
