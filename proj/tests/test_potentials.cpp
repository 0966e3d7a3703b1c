#include <doctest.h>

#include <cmath>

#include "core/potentials.hpp"
#include "core/rng.hpp"

#include "helpers.hpp"

using namespace fractrace;

namespace {
DiscreteMeasure dirac(double t, double x, double w = 1.0) {
  return DiscreteMeasure({{t, make_point(x), w}}, 1);
}
const SpaceTimePoint kOrigin{1.0, make_point(0.0)};
}  // namespace

// Hand-derived closed-form values: each case is an elementary radial
// integral or a window-endpoint supremum.
TEST_CASE("wolff_R exact cases") {
  // delta at (t+1, x): window (1/2, 1), p = 2 -> int r^{-2} = 1
  CHECK(wolff_R(dirac(2.0, 0.0), 2.0, kOrigin, 0.5).value == doctest::Approx(1.0).epsilon(1e-13));
  // offset 0.9 -> (0.9, 1): 1/0.9 - 1
  CHECK(wolff_R(dirac(2.0, 0.9), 2.0, kOrigin, 0.5).value ==
        doctest::Approx(1.0 / 0.9 - 1.0).epsilon(1e-13));
  // p = 3 (p' - 1 = 1/2): int_{1/2}^{1} r^{-3/2} dr = 2(sqrt 2 - 1)
  CHECK(wolff_R(dirac(2.0, 0.0), 3.0, kOrigin, 0.5).value ==
        doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-13));
  // weight 4 at p = 3 scales by 4^{1/2}
  CHECK(wolff_R(dirac(2.0, 0.0, 4.0), 3.0, kOrigin, 0.5).value ==
        doctest::Approx(4.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-13));
  // two stacked atoms: pieces (1/2,1) and (1,2)
  const DiscreteMeasure two({{2.0, make_point(0.0), 1.0}, {3.0, make_point(0.0), 1.0}}, 1);
  CHECK(wolff_R(two, 2.0, kOrigin, 0.5).value == doctest::Approx(1.5).epsilon(1e-13));
  // overlapping windows (0.4,0.6) m=1, (0.6,0.8) m=2, (0.8,1.2) m=1 -> 25/12
  const DiscreteMeasure olap({{1.8, make_point(0.0), 1.0}, {2.2, make_point(0.0), 1.0}}, 1);
  CHECK(wolff_R(olap, 2.0, kOrigin, 0.5).value == doctest::Approx(25.0 / 12.0).epsilon(1e-13));
  // truncation rho = 0.7: int_{1/2}^{0.7} r^{-2} = 2 - 10/7
  CHECK(wolff_R(dirac(2.0, 0.0), 2.0, kOrigin, 0.5, 0.7).value ==
        doctest::Approx(2.0 - 10.0 / 7.0).epsilon(1e-13));
  // alpha = 1/4: window (1/4, 1): int r^{-2} = 3
  CHECK(wolff_R(dirac(2.0, 0.0), 2.0, kOrigin, 0.25).value == doctest::Approx(3.0).epsilon(1e-13));
  // alpha = 3/4: window (2^{-2/3}, 1): int r^{-2} = 2^{2/3} - 1
  CHECK(wolff_R(dirac(2.0, 0.0), 2.0, kOrigin, 0.75).value ==
        doctest::Approx(std::pow(2.0, 2.0 / 3.0) - 1.0).epsilon(1e-13));
  // empty: atom at or below the evaluation time
  CHECK(wolff_R(dirac(1.0, 0.0), 2.0, kOrigin, 0.5).value == 0.0);
  CHECK(wolff_R(DiscreteMeasure({}, 1), 2.0, kOrigin, 0.5).value == 0.0);
}

TEST_CASE("wolff_S exact cases and the exponent gate") {
  // p = 1.5, alpha = 1/2: denominator exponent 1/2, (p'-1) = 2 -> int r^{-2} = 1
  CHECK(wolff_S(dirac(2.0, 0.0), 1.5, kOrigin, 0.5).value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(wolff_S(dirac(2.0, 0.9), 1.5, kOrigin, 0.5).value ==
        doctest::Approx(1.0 / 0.9 - 1.0).epsilon(1e-13));
  // p = 1.25 (p' - 1 = 4), exponent 3/4: int_{1/2}^{1} r^{-4} dr = 7/3
  CHECK(wolff_S(dirac(2.0, 0.0), 1.25, kOrigin, 0.5).value ==
        doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  // homogeneity in the weight: c^{p'-1}
  const double v1 = wolff_S(dirac(2.0, 0.3), 1.5, kOrigin, 0.5).value;
  const double v3 = wolff_S(dirac(2.0, 0.3, 3.0), 1.5, kOrigin, 0.5).value;
  CHECK(v3 == doctest::Approx(9.0 * v1).epsilon(1e-12));
  // regime gate p < 1 + n/(2 alpha)
  CHECK_THROWS_AS(wolff_S(dirac(2.0, 0.0), 2.0, kOrigin, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(wolff_S(dirac(2.0, 0.0), 3.0, kOrigin, 0.25), std::invalid_argument);
}

TEST_CASE("maximal functions: window-endpoint suprema") {
  // delta at (3, x): window (1, 1.5) -> sup r^{-1} = 1
  CHECK(maximal_R(dirac(3.0, 0.0), make_point(0.0), 0.5) == doctest::Approx(1.0));
  // offset 1.2: window (1.2, 1.5) -> 1/1.2
  CHECK(maximal_R(dirac(3.0, 1.2), make_point(0.0), 0.5) == doctest::Approx(1.0 / 1.2));
  // two atoms: pieces give sup = 3 as r -> 1^+
  const DiscreteMeasure two({{3.0, make_point(0.0), 1.0}, {2.9, make_point(0.0), 2.0}}, 1);
  CHECK(maximal_R(two, make_point(0.0), 0.5) == doctest::Approx(3.0));
  // space-time maximal: delta at (t+1, x) -> window (1/2, 1), sup r^{-1} = 2
  CHECK(maximal_spacetime(dirac(2.0, 0.0), kOrigin, 0.5) == doctest::Approx(2.0));
  // alpha = 1/4: window (1/4, 1) -> sup = 4
  CHECK(maximal_spacetime(dirac(2.0, 0.0), kOrigin, 0.25) == doctest::Approx(4.0));
  // weight scales linearly
  CHECK(maximal_spacetime(dirac(2.0, 0.0, 5.0), kOrigin, 0.5) == doctest::Approx(10.0));
  CHECK(maximal_R(DiscreteMeasure({}, 1), make_point(0.0), 0.5) == 0.0);
}

TEST_CASE("centered and dyadic maximal averages") {
  const DiscreteMeasure mu({{2.0, make_point(0.0), 1.0}, {3.0, make_point(0.0), 3.0}}, 1);
  // windows (1/2,1) for atom 1 and (1,2) for atom 2: averages 2 then 6
  CHECK(maximal_centered({2.0, 6.0}, mu, kOrigin, 0.5) == doctest::Approx(6.0));
  // constant g -> value equals the constant
  CHECK(maximal_centered({5.0, 5.0}, mu, kOrigin, 0.5) == doctest::Approx(5.0));
  CHECK(maximal_dyadic({5.0, 5.0}, mu, {1.9, make_point(0.0)}, 0.5, -6, 6) ==
        doctest::Approx(5.0));
  // single atom -> g at that atom
  CHECK(maximal_centered({7.0}, dirac(2.0, 0.0), kOrigin, 0.5) == doctest::Approx(7.0));
  // no mass above the query time -> 0
  CHECK(maximal_centered({7.0}, dirac(0.5, 0.0), kOrigin, 0.5) == 0.0);
  CHECK_THROWS_AS(maximal_centered({-1.0}, dirac(2.0, 0.0), kOrigin, 0.5),
                  std::invalid_argument);
}

TEST_CASE("dyadic wolff: explicit scale enumeration") {
  // atom and evaluation point share every cube at scales m >= 0 and none below
  const DiscreteMeasure mu = dirac(0.3, 0.7);
  const SpaceTimePoint at{0.3, make_point(0.2)};
  const WolffDyadicResult res = wolff_dyadic(mu, 2.0, at, 0.5, -20, 20);
  // sum_{m=0..20} 2^{-m} = 2 - 2^{-20}
  CHECK(res.value == doctest::Approx(2.0 - std::ldexp(1.0, -20)).epsilon(1e-12));
  CHECK(res.contributions.front().first == 0);
  // point far away -> 0
  CHECK(wolff_dyadic(mu, 2.0, {40.0, make_point(35.0)}, 0.5, -20, 20).value == 0.0);
  CHECK(wolff_dyadic(DiscreteMeasure({}, 1), 2.0, at, 0.5, -20, 20).value == 0.0);
  // direct enumeration oracle on a random pair
  Rng rng(31);
  const DiscreteMeasure cloud = testutil::random_measure(rng, 8, 1);
  const SpaceTimePoint q{0.7, make_point(0.1)};
  double expect = 0.0;
  for (int m = -12; m <= 12; ++m) {
    const double mass = measure_of_region(cloud, cube_at(q, m, 0.6, 1).bounds(0.6, 1));
    if (mass > 0.0) expect += mass / std::ldexp(1.0, m);
  }
  CHECK(wolff_dyadic(cloud, 2.0, q, 0.6, -12, 12).value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("event-sweep values agree with blind quadrature on random measures") {
  Rng rng(47);
  int tested = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n_atoms = 1 + static_cast<int>(rng.below(20));
    const double alpha = rng.uniform(0.25, 0.95);
    const DiscreteMeasure mu = testutil::random_measure(rng, n_atoms, 1);
    const SpaceTimePoint at{rng.uniform(0.1, 1.2), make_point(rng.uniform(-1.0, 1.0))};
    const double p = rng.uniform(1.3, 3.0);

    const double exact = wolff_R(mu, p, at, alpha).value;
    const double blind = testutil::wolff_quadrature_oracle(mu, p, at, alpha, 1.0);
    CHECK(std::abs(exact - blind) <= 1e-10 * std::max(1.0, std::abs(exact)));

    const double p_s = rng.uniform(1.1, 0.95 * (1.0 + 1.0 / (2.0 * alpha)));
    const double beta_s = 1.0 + 2.0 * alpha * (1.0 - p_s);
    const double exact_s = wolff_S(mu, p_s, at, alpha).value;
    const double blind_s = testutil::wolff_quadrature_oracle(mu, p_s, at, alpha, beta_s);
    CHECK(std::abs(exact_s - blind_s) <= 1e-10 * std::max(1.0, std::abs(exact_s)));
    ++tested;
  }
  CHECK(tested == 100);
}

TEST_CASE("homogeneity and monotonicity of potentials") {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const DiscreteMeasure mu = testutil::random_measure(rng, 12, 1);
    const SpaceTimePoint at{rng.uniform(0.0, 1.0), make_point(rng.uniform(-1, 1))};
    const double alpha = rng.uniform(0.3, 0.9);
    const double p = rng.uniform(1.3, 2.5);
    const double c = rng.uniform(0.5, 4.0);
    const double pc = p / (p - 1.0);

    // wolff(c mu) = c^{p'-1} wolff(mu), maximal(c mu) = c maximal(mu), exactly
    const DiscreteMeasure scaled = mu.scaled(c);
    CHECK(wolff_R(scaled, p, at, alpha).value ==
          doctest::Approx(std::pow(c, pc - 1.0) * wolff_R(mu, p, at, alpha).value)
              .epsilon(1e-12));
    CHECK(maximal_spacetime(scaled, at, alpha) ==
          doctest::Approx(c * maximal_spacetime(mu, at, alpha)).epsilon(1e-12));
    CHECK(maximal_R(scaled, at.x, alpha) ==
          doctest::Approx(c * maximal_R(mu, at.x, alpha)).epsilon(1e-12));

    // adding an atom can only increase everything
    std::vector<Atom> more = mu.atoms();
    more.push_back({rng.uniform(0.5, 2.5), make_point(rng.uniform(-1, 1)), 0.7});
    const DiscreteMeasure nu(more, 1);
    CHECK(wolff_R(nu, p, at, alpha).value >= wolff_R(mu, p, at, alpha).value - 1e-14);
    CHECK(maximal_R(nu, at.x, alpha) >= maximal_R(mu, at.x, alpha) - 1e-14);
  }
}

TEST_CASE("wolff profile bookkeeping") {
  const WolffProfile prof = wolff_R(dirac(2.0, 0.0), 2.0, kOrigin, 0.5);
  REQUIRE(prof.pieces.size() == 1);
  CHECK(prof.pieces[0].r_lo == doctest::Approx(0.5));
  CHECK(prof.pieces[0].r_hi == doctest::Approx(1.0));
  CHECK(prof.pieces[0].mass == doctest::Approx(1.0));
  double from_pieces = 0.0;
  for (const auto& pc : prof.pieces)
    if (pc.mass > 0.0)
      from_pieces += pc.mass * (1.0 / pc.r_lo - 1.0 / pc.r_hi);  // n(p'-1) = 1 here
  CHECK(from_pieces == doctest::Approx(prof.value).epsilon(1e-13));
}
