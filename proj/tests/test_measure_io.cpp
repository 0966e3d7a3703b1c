#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/field.hpp"
#include "core/measure.hpp"

using namespace fractrace;

namespace {
std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("measure csv round trip") {
  const DiscreteMeasure mu(
      {{1.5, make_point(0.25), 2.0}, {0.75, make_point(-1.5), 0.0}, {3.0, make_point(2.0), 1.25}},
      1);
  const std::string path = temp_path("ft_measure_rt.csv");
  mu.save_csv(path);
  const DiscreteMeasure back = DiscreteMeasure::load_csv(path);
  REQUIRE(back.size() == mu.size());
  CHECK(back.dim() == 1);
  CHECK(back.total() == doctest::Approx(mu.total()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(back.atoms()[i].t == doctest::Approx(mu.atoms()[i].t));
    CHECK(back.atoms()[i].x[0] == doctest::Approx(mu.atoms()[i].x[0]));
    CHECK(back.atoms()[i].w == doctest::Approx(mu.atoms()[i].w));
  }
  std::remove(path.c_str());
}

TEST_CASE("measure loader rejects bad atoms") {
  const std::string path = temp_path("ft_measure_bad.csv");
  {
    std::ofstream out(path);
    out << "t,x1,w\n-1.0,0.0,1.0\n";
  }
  CHECK_THROWS(DiscreteMeasure::load_csv(path));
  {
    std::ofstream out(path);
    out << "t,x1,w\n1.0,0.0,-0.5\n";
  }
  CHECK_THROWS(DiscreteMeasure::load_csv(path));
  {
    std::ofstream out(path);
    out << "t,x1,w\n1.0,0.0\n";
  }
  CHECK_THROWS(DiscreteMeasure::load_csv(path));
  std::remove(path.c_str());
  CHECK_THROWS(DiscreteMeasure::load_csv(temp_path("ft_no_such_file.csv")));
  CHECK_THROWS(DiscreteMeasure({{0.0, make_point(0.0), 1.0}}, 1));
  CHECK_THROWS(DiscreteMeasure({{1.0, make_point(0.0), -1.0}}, 1));
}

TEST_CASE("2-d measure header") {
  const std::string path = temp_path("ft_measure_2d.csv");
  {
    std::ofstream out(path);
    out << "t,x1,x2,w\n0.5,0.1,-0.2,1.5\n1.5,0.0,0.0,0.5\n";
  }
  const DiscreteMeasure mu = DiscreteMeasure::load_csv(path);
  CHECK(mu.dim() == 2);
  CHECK(mu.total() == doctest::Approx(2.0));
  CHECK(mu.atoms()[0].x[1] == doctest::Approx(-0.2));
  std::remove(path.c_str());
}

TEST_CASE("spatial field csv + sidecar round trip") {
  GridSpec g{4.0, 16, 1};
  SpatialField f(g);
  for (long c = 0; c < g.cells(); ++c) f.v[c] = 0.5 * c;
  const std::string path = temp_path("ft_field_rt.csv");
  f.save_csv(path);
  const SpatialField back = SpatialField::load_csv(path);
  CHECK(back.grid.L == doctest::Approx(4.0));
  CHECK(back.grid.n_nodes == 16);
  for (long c = 0; c < g.cells(); ++c) CHECK(back.v[c] == doctest::Approx(f.v[c]));
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
  CHECK_THROWS(SpatialField::load_csv(temp_path("ft_missing_field.csv")));
}

TEST_CASE("space-time field csv + sidecar round trip") {
  GridSpec g{2.0, 8, 1};
  SpaceTimeField f(g, 1.0, 4);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = std::sin(0.1 * i);
  const std::string path = temp_path("ft_stfield_rt.csv");
  f.save_csv(path);
  const SpaceTimeField back = SpaceTimeField::load_csv(path);
  CHECK(back.T == doctest::Approx(1.0));
  CHECK(back.M == 4);
  for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.v[i] == doctest::Approx(f.v[i]));
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("norms: cell volumes and the mu-weighted q-norm") {
  GridSpec g{4.0, 32, 1};  // h = 0.25
  SpatialField f(g);
  CHECK(norm_lp(f, 2.0) == 0.0);
  // indicator of one cell: V^{1/p}
  f.v[3] = 1.0;
  CHECK(norm_lp(f, 2.0) == doctest::Approx(std::sqrt(0.25)));
  CHECK(norm_lp(f, 3.0) == doctest::Approx(std::pow(0.25, 1.0 / 3.0)));
  // constant a: a (2L)^{1/p}
  for (auto& v : f.v) v = 0.7;
  CHECK(norm_lp(f, 2.0) == doctest::Approx(0.7 * std::sqrt(8.0)));

  const DiscreteMeasure mu({{1.0, make_point(0.0), 2.0}, {2.0, make_point(1.0), 1.0}}, 1);
  CHECK(norm_lq_mu({3.0, 3.0}, mu, 2.0) == doctest::Approx(3.0 * std::sqrt(3.0)));
  CHECK_THROWS_AS(norm_lq_mu({1.0}, mu, 2.0), std::invalid_argument);

  GridSpec bad{4.0, 15, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("exponent config") {
  ExponentConfig pq{1.5, 2.0};
  CHECK(pq.p_conj() == doctest::Approx(3.0));
  CHECK(pq.q_conj() == doctest::Approx(2.0));
  CHECK(1.0 / pq.p + 1.0 / pq.p_conj() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pq.s_admissible(0.5, 1));
  const ExponentConfig high{2.5, 2.0};
  CHECK_FALSE(high.s_admissible(0.5, 1));
  const ExponentConfig unit{1.0, 2.0};
  CHECK_THROWS_AS(unit.validate(), std::invalid_argument);
}
