#include <doctest.h>

#include <cmath>

#include "core/rng.hpp"
#include "core/semigroup.hpp"

#include "helpers.hpp"

using namespace fractrace;

namespace {

KernelSpec spec_of(double alpha, int dim = 1) {
  KernelSpec s;
  s.alpha = alpha;
  s.dim = dim;
  return s;
}

// field supported on the inner half-box
SpatialField inner_bump(const GridSpec& g, double center, double sigma) {
  SpatialField f(g);
  for (long c = 0; c < g.cells(); ++c) {
    const double x = g.node_point(c)[0];
    if (std::abs(x) <= 0.5 * g.L)
      f.v[c] = std::exp(-0.5 * (x - center) * (x - center) / (sigma * sigma));
  }
  return f;
}

}  // namespace

TEST_CASE("apply_R: zero, delta to Poisson samples, mass conservation") {
  const GridSpec g{16.0, 512, 1};
  const KernelSpec spec = spec_of(0.5);

  SpatialField zero(g);
  const SpatialField rz = apply_R(zero, 1.0, spec);
  for (double v : rz.v) CHECK(v == 0.0);

  // discrete delta (mass 1): R_1 delta samples the Poisson kernel
  SpatialField delta(g);
  delta.v[g.nearest_index(0.0)] = 1.0 / g.h();
  const SpatialField rd = apply_R(delta, 1.0, spec);
  for (double x : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double expect = (1.0 / kPi) / (1.0 + x * x);
    CHECK(rd.v[g.nearest_index(x)] == doctest::Approx(expect).epsilon(2e-3));
  }

  // indicator of [-1, 1]: total integral 2 is conserved
  SpatialField ind(g);
  for (long c = 0; c < g.cells(); ++c)
    ind.v[c] = std::abs(g.node_point(c)[0]) <= 1.0 ? 1.0 : 0.0;
  const SpatialField ri = apply_R(ind, 0.01, spec_of(1.0));
  double mass = 0.0;
  for (double v : ri.v) mass += v * g.h();
  CHECK(mass == doctest::Approx(2.0 + g.h()).epsilon(1e-6));  // endpoint cells included

  // t = 0 is the identity
  const SpatialField r0 = apply_R(ind, 0.0, spec);
  for (long c = 0; c < g.cells(); ++c) CHECK(r0.v[c] == ind.v[c]);
}

TEST_CASE("apply_R guards against support touching the outer half") {
  const GridSpec g{8.0, 128, 1};
  SpatialField wide(g);
  for (long c = 0; c < g.cells(); ++c) wide.v[c] = 1.0;  // support everywhere
  CHECK_THROWS_AS(apply_R(wide, 1.0, spec_of(0.5)), std::domain_error);
  CHECK_NOTHROW(apply_R_periodic(wide, 1.0, spec_of(0.5)));
}

TEST_CASE("linearity and the semigroup law hold to machine precision") {
  const GridSpec g{8.0, 256, 1};
  const KernelSpec spec = spec_of(0.7);
  const SpatialField f1 = inner_bump(g, -0.5, 0.4);
  const SpatialField f2 = inner_bump(g, 1.0, 0.7);

  SpatialField combo(g);
  for (long c = 0; c < g.cells(); ++c) combo.v[c] = 2.0 * f1.v[c] - 0.5 * f2.v[c];
  const SpatialField lhs = apply_R(combo, 0.8, spec);
  const SpatialField r1 = apply_R(f1, 0.8, spec);
  const SpatialField r2 = apply_R(f2, 0.8, spec);
  for (long c = 0; c < g.cells(); ++c)
    CHECK(lhs.v[c] == doctest::Approx(2.0 * r1.v[c] - 0.5 * r2.v[c]).epsilon(1e-12));

  const SpatialField ss = apply_R_periodic(apply_R(f1, 0.3, spec), 0.5, spec);
  const SpatialField once = apply_R(f1, 0.8, spec);
  for (long c = 0; c < g.cells(); ++c)
    CHECK(ss.v[c] == doctest::Approx(once.v[c]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("contraction in L1 and max norm") {
  const GridSpec g{8.0, 256, 1};
  const SpatialField f = inner_bump(g, 0.3, 0.5);
  double l1 = 0.0, mx = 0.0;
  for (double v : f.v) {
    l1 += std::abs(v) * g.h();
    mx = std::max(mx, v);
  }
  const SpatialField rf = apply_R(f, 1.2, spec_of(0.6));
  double l1r = 0.0, mxr = 0.0;
  for (double v : rf.v) {
    l1r += std::abs(v) * g.h();
    mxr = std::max(mxr, std::abs(v));
  }
  CHECK(l1r <= l1 + 1e-9);
  CHECK(mxr <= mx + 1e-9);
}

TEST_CASE("apply_S: zero input, per-mode oracle, positivity") {
  const GridSpec g{8.0, 128, 1};
  const KernelSpec spec = spec_of(0.6);
  SpaceTimeField zero(g, 1.0, 16);
  const SpaceTimeField sz = apply_S(zero, spec);
  for (double v : sz.v) CHECK(v == 0.0);

  // time-independent eigenvector cos(k x): S g(t) = (1 - e^{-t k^{2a}})/k^{2a} cos(k x)
  const double k = 2.0 * kPi / g.L;  // an exact grid mode
  SpaceTimeField mode(g, 1.0, 64);
  for (int j = 0; j <= mode.M; ++j)
    for (long c = 0; c < g.cells(); ++c)
      mode.slice(j)[c] = std::cos(k * g.node_point(c)[0]);
  const SpaceTimeField sm = apply_S_periodic(mode, spec);
  const double m2a = std::pow(k * k, spec.alpha);
  for (int j : {0, 8, 32, 64}) {
    const double expect = (1.0 - std::exp(-mode.time(j) * m2a)) / m2a;
    for (long c : {0L, 17L, 64L}) {
      const double ref = expect * std::cos(k * g.node_point(c)[0]);
      CHECK(sm.slice(j)[c] == doctest::Approx(ref).epsilon(5e-4).scale(1.0));
    }
  }

  // nonnegative source keeps the solution nonnegative (up to roundoff)
  Rng rng(3);
  SpaceTimeField pos(g, 1.0, 16);
  for (int j = 0; j <= 16; ++j)
    for (long c = 0; c < g.cells(); ++c) {
      const double x = g.node_point(c)[0];
      pos.slice(j)[c] = std::abs(x) <= 0.5 * g.L ? rng.uniform(0.0, 1.0) : 0.0;
    }
  const SpaceTimeField sp = apply_S(pos, spec);
  for (double v : sp.v) CHECK(v >= -1e-10);
}

TEST_CASE("adjoint_R: exact kernel sums over atoms") {
  const KernelEvaluator kernel(spec_of(0.5));
  const DiscreteMeasure zero({}, 1);
  CHECK(adjoint_R(zero, {make_point(0.0)}, kernel)[0] == 0.0);

  const DiscreteMeasure delta({{1.0, make_point(0.0), 1.0}}, 1);
  CHECK(adjoint_R(delta, {make_point(0.0)}, kernel)[0] == doctest::Approx(1.0 / kPi));

  const DiscreteMeasure two({{1.0, make_point(0.0), 1.0}, {2.0, make_point(0.5), 1.0}}, 1);
  const double single1 = adjoint_R(delta, {make_point(0.3)}, kernel)[0];
  const DiscreteMeasure d2({{2.0, make_point(0.5), 1.0}}, 1);
  const double single2 = adjoint_R(d2, {make_point(0.3)}, kernel)[0];
  CHECK(adjoint_R(two, {make_point(0.3)}, kernel)[0] ==
        doctest::Approx(single1 + single2).epsilon(1e-14));
}

TEST_CASE("adjoint_S: strict time convention") {
  const KernelEvaluator kernel(spec_of(0.5));
  const DiscreteMeasure mu({{2.0, make_point(0.0), 1.0}}, 1);
  // query above the atom time sees nothing
  CHECK(adjoint_S(mu, {{3.0, make_point(0.0)}}, kernel)[0] == 0.0);
  // K_1 at distance 0 = 1/pi
  CHECK(adjoint_S(mu, {{1.0, make_point(0.0)}}, kernel)[0] == doctest::Approx(1.0 / kPi));
  // the diagonal s = t contributes nothing
  CHECK(adjoint_S(mu, {{2.0, make_point(0.0)}}, kernel)[0] == 0.0);
}

TEST_CASE("duality pairing: <R f, mu> = <f, R* mu> within quadrature tolerance") {
  const GridSpec g{16.0, 512, 1};
  for (double alpha : {0.5, 1.0}) {
    const KernelSpec spec = spec_of(alpha);
    const KernelEvaluator kernel(spec);
    Rng rng(71);
    SpatialField f(g);
    for (long c = 0; c < g.cells(); ++c) {
      const double x = g.node_point(c)[0];
      f.v[c] = std::abs(x) <= 2.0 ? rng.uniform(0.0, 1.0) : 0.0;
    }
    // atoms on grid nodes, times in a moderate band
    std::vector<Atom> atoms;
    for (int i = 0; i < 12; ++i)
      atoms.push_back({rng.uniform(0.25, 1.0),
                       make_point(g.node_coord(g.nearest_index(rng.uniform(-2.0, 2.0)))),
                       rng.uniform(0.2, 1.0)});
    const DiscreteMeasure mu(atoms, 1);

    double lhs = 0.0;
    for (const Atom& a : mu.atoms()) {
      const SpatialField rf = apply_R(f, a.t, spec);
      lhs += a.w * rf.v[g.nearest_index(a.x[0])];
    }
    std::vector<SpacePoint> nodes(g.cells());
    for (long c = 0; c < g.cells(); ++c) nodes[c] = g.node_point(c);
    const std::vector<double> pot = adjoint_R(mu, nodes, kernel);
    double rhs = 0.0;
    for (long c = 0; c < g.cells(); ++c) rhs += f.v[c] * pot[c] * g.h();
    CHECK(lhs == doctest::Approx(rhs).epsilon(0.01));
  }
}

TEST_CASE("duality pairing for S within time-quadrature tolerance") {
  const GridSpec g{16.0, 256, 1};
  const KernelSpec spec = spec_of(0.5);
  const KernelEvaluator kernel(spec);
  const double T = 1.0;
  const int M = 64;
  Rng rng(73);
  SpaceTimeField gg(g, T, M);
  for (int j = 0; j <= M; ++j)
    for (long c = 0; c < g.cells(); ++c) {
      const double x = g.node_point(c)[0];
      gg.slice(j)[c] = std::abs(x) <= 2.0 ? rng.uniform(0.0, 1.0) : 0.0;
    }
  std::vector<Atom> atoms;
  for (int i = 0; i < 10; ++i) {
    const int jt = 8 + static_cast<int>(rng.below(M - 8));
    atoms.push_back({gg.time(jt),
                     make_point(g.node_coord(g.nearest_index(rng.uniform(-2.0, 2.0)))),
                     rng.uniform(0.2, 1.0)});
  }
  const DiscreteMeasure mu(atoms, 1);

  const SpaceTimeField sg = apply_S(gg, spec);
  double lhs = 0.0;
  for (const Atom& a : mu.atoms()) {
    const int jt = static_cast<int>(std::lround(a.t / gg.dt()));
    lhs += a.w * sg.slice(jt)[g.nearest_index(a.x[0])];
  }
  // <g, S* mu> by trapezoid in t over the grid, exact kernel sums in space
  double rhs = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double wq = gg.dt() * ((j == 0 || j == M) ? 0.5 : 1.0);
    std::vector<SpaceTimePoint> qs(g.cells());
    for (long c = 0; c < g.cells(); ++c) qs[c] = {gg.time(j), g.node_point(c)};
    const std::vector<double> pot = adjoint_S(mu, qs, kernel);
    for (long c = 0; c < g.cells(); ++c) rhs += wq * g.h() * gg.slice(j)[c] * pot[c];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(0.03));
}

TEST_CASE("apply_S_transpose is the exact transpose of apply_S_periodic") {
  const GridSpec g{6.0, 64, 1};
  const KernelSpec spec = spec_of(0.65);
  Rng rng(79);
  SpaceTimeField a(g, 1.0, 12), b(g, 1.0, 12);
  for (auto& v : a.v) v = rng.uniform(-1.0, 1.0);
  for (auto& v : b.v) v = rng.uniform(-1.0, 1.0);
  const SpaceTimeField Sa = apply_S_periodic(a, spec);
  const SpaceTimeField Stb = apply_S_transpose(b, spec);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    lhs += Sa.v[i] * b.v[i];
    rhs += a.v[i] * Stb.v[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("pde residual is second order for mode data") {
  const GridSpec g{8.0, 64, 1};
  const KernelSpec spec = spec_of(0.7);
  const double k = 2.0 * kPi / g.L;

  auto residual_at = [&](int M, bool source_mode) {
    SpatialField f(g);
    SpaceTimeField src(g, 1.0, M);
    if (source_mode) {
      for (int j = 0; j <= M; ++j)
        for (long c = 0; c < g.cells(); ++c)
          src.slice(j)[c] = std::cos(k * g.node_point(c)[0]);
    } else {
      for (long c = 0; c < g.cells(); ++c) f.v[c] = std::cos(k * g.node_point(c)[0]);
    }
    return pde_residual(f, src, spec);
  };

  for (bool source_mode : {false, true}) {
    const double r1 = residual_at(16, source_mode);
    const double r2 = residual_at(32, source_mode);
    CHECK(r2 < r1);
    CHECK(r1 / r2 > 2.8);  // ~ 4 for O(dt^2)
  }
  // f = g = 0 -> residual 0
  SpatialField zf(g);
  SpaceTimeField zg(g, 1.0, 16);
  CHECK(pde_residual(zf, zg, spec) == 0.0);
}
