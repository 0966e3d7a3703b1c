#pragma once

#include <optional>
#include <vector>

#include "core/common.hpp"

namespace fractrace {

class DiscreteMeasure;

// Parabolic ball: {(t,x): r^{2a} < t - t0 < 2 r^{2a}, |x - x0| < r}.
// All inequalities strict.
struct ParabolicBall {
  double t0 = 0.0;
  SpacePoint x0{0.0, 0.0, 0.0};
  double r = 1.0;
};

bool ball_contains(const ParabolicBall& ball, double alpha, int dim,
                   const SpaceTimePoint& p);

// Axis-aligned closed box in R_+^{1+n}; used for dyadic cubes and dilations.
struct Box {
  double tmin = 0.0, tmax = 0.0;
  SpacePoint xmin{0.0, 0.0, 0.0};
  SpacePoint xmax{0.0, 0.0, 0.0};
  bool contains(int dim, const SpaceTimePoint& p) const;
};

// Dyadic cube at scale m (side l = 2^m): time extent l^{2a}, spatial side l,
// lower corner at the shifted lattice tau + (k0 l^{2a}, k l).
struct DyadicCube {
  int m = 0;
  long k0 = 0;
  std::array<long, 3> k{0, 0, 0};
  SpaceTimePoint tau;  // shift; default 0

  double side() const { return std::ldexp(1.0, m); }
  Box bounds(double alpha, int dim) const;
};

bool cube_contains(const DyadicCube& cube, double alpha, int dim,
                   const SpaceTimePoint& p);

// The unique cube at scale m containing p (closed faces; face points are
// assigned by the floor rule, i.e. to the cube whose lower edge they lie on).
DyadicCube cube_at(const SpaceTimePoint& p, int m, double alpha, int dim,
                   const SpaceTimePoint& tau = {});

std::vector<DyadicCube> cubes_containing(const SpaceTimePoint& p, int m_lo, int m_hi,
                                         double alpha, int dim,
                                         const SpaceTimePoint& tau = {});

// Factor-2 dilation: same center, spatial side 2l, time extent (2l)^{2a}
// about the time center, clipped at t = 0.
Box dilate(const DyadicCube& cube, double alpha, int dim);

// Open set of radii r with (s, y) in B_r(t, x):
//   ( ((s-t)/2)^{1/2a}, (s-t)^{1/2a} ) intersect ( |y-x|, inf ).
Interval containment_interval(double s, const SpacePoint& y, double t,
                              const SpacePoint& x, double alpha, int dim);

// Radii r with (s, y) in B_r(r^{2a}, x), the window of the fractional
// parabolic maximal function: ( (s/3)^{1/2a}, (s/2)^{1/2a} ) cap ( |y-x|, inf ).
Interval maximal_window(double s, const SpacePoint& y, const SpacePoint& x,
                        double alpha, int dim);

double measure_of_region(const DiscreteMeasure& mu, const ParabolicBall& ball,
                         double alpha);
double measure_of_region(const DiscreteMeasure& mu, const Box& box);

}  // namespace fractrace
