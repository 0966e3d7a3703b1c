#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fractrace.h"

#include "core/common.hpp"
#include "core/measure.hpp"
#include "core/potentials.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("kernel handles: lifecycle, values, error codes") {
  ft_kernel* k = nullptr;
  REQUIRE(ft_kernel_create(0.5, 1, &k) == FT_OK);
  const double x0 = 0.0;
  double v = 0.0, b = 0.0;
  CHECK(ft_kernel_eval(k, 1.0, &x0, 1e-6, &v, &b) == FT_OK);
  CHECK(v == doctest::Approx(1.0 / fractrace::kPi).epsilon(1e-6));
  CHECK(b <= 1e-6);
  double cf = 0.0;
  CHECK(ft_kernel_eval_closed_form(k, 1.0, &x0, &cf) == FT_OK);
  CHECK(cf == doctest::Approx(1.0 / fractrace::kPi).epsilon(1e-14));
  double mass = 0.0, defect = 0.0;
  CHECK(ft_kernel_check_mass(k, 1.0, 0.0, 1e-6, &mass, &defect) == FT_OK);
  CHECK(defect <= 1e-4);
  ft_kernel_destroy(k);

  ft_kernel* bad = nullptr;
  CHECK(ft_kernel_create(1.5, 1, &bad) == FT_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(ft_last_error()).find("alpha") != std::string::npos);

  ft_kernel* k75 = nullptr;
  REQUIRE(ft_kernel_create(0.75, 1, &k75) == FT_OK);
  CHECK(ft_kernel_eval_closed_form(k75, 1.0, &x0, &cf) == FT_ERR_INVALID_ARGUMENT);
  CHECK(ft_kernel_eval(k75, -1.0, &x0, 0.0, &v, &b) == FT_ERR_INVALID_ARGUMENT);
  ft_kernel_destroy(k75);
  CHECK(ft_kernel_eval(nullptr, 1.0, &x0, 0.0, &v, &b) == FT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("stable sampling through the C surface is deterministic") {
  ft_kernel* k = nullptr;
  REQUIRE(ft_kernel_create(0.5, 1, &k) == FT_OK);
  std::vector<double> a(1000), b(1000);
  CHECK(ft_kernel_sample_stable(k, 1.0, 1000, 7, a.data()) == FT_OK);
  CHECK(ft_kernel_sample_stable(k, 1.0, 1000, 7, b.data()) == FT_OK);
  CHECK(a == b);
  ft_kernel_destroy(k);
}

TEST_CASE("measure handles and wolff/maximal evaluation") {
  const double t[2] = {2.0, 3.0};
  const double x[2] = {0.0, 0.0};
  const double w[2] = {1.0, 1.0};
  ft_measure* m = nullptr;
  REQUIRE(ft_measure_create(t, x, w, 2, 1, &m) == FT_OK);
  double total = 0.0;
  CHECK(ft_measure_total(m, &total) == FT_OK);
  CHECK(total == doctest::Approx(2.0));
  int count = 0, dim = 0;
  CHECK(ft_measure_size(m, &count, &dim) == FT_OK);
  CHECK(count == 2);
  CHECK(dim == 1);

  const double q = 0.0;
  double v = 0.0;
  CHECK(ft_wolff_eval(m, 'R', 2.0, 0.5, 0.0, 1.0, &q, &v) == FT_OK);
  CHECK(v == doctest::Approx(1.5).epsilon(1e-12));  // two stacked atoms
  CHECK(ft_wolff_eval(m, 'S', 2.0, 0.5, 0.0, 1.0, &q, &v) == FT_ERR_INVALID_ARGUMENT);
  CHECK(ft_maximal_eval(m, 'T', 0.5, 1.0, &q, &v) == FT_OK);
  CHECK(v == doctest::Approx(2.0));
  CHECK(ft_maximal_eval(m, 'Z', 0.5, 1.0, &q, &v) == FT_ERR_INVALID_ARGUMENT);
  ft_measure_destroy(m);

  // weights must be nonnegative
  const double wneg[1] = {-1.0};
  ft_measure* bad = nullptr;
  CHECK(ft_measure_create(t, x, wneg, 1, 1, &bad) == FT_ERR_INVALID_ARGUMENT);
  CHECK(ft_measure_load_csv("/nonexistent/by_construction.csv", &bad) == FT_ERR_IO);
}

TEST_CASE("ft_run: kernel eval, wolff files and byte-identical reruns") {
  const fs::path dir = fs::temp_directory_path() / "ft_capi_run";
  fs::remove_all(dir);
  fs::create_directories(dir);

  char* summary = nullptr;
  json cmd = {{"cmd", "kernel-eval"}, {"alpha", 0.5}, {"dim", 1}, {"t", 1.0}, {"x", "0"}};
  REQUIRE(ft_run(cmd.dump().c_str(), &summary) == FT_OK);
  json s = json::parse(summary);
  ft_string_free(summary);
  CHECK(s["value"].get<double>() == doctest::Approx(1.0 / fractrace::kPi).epsilon(1e-6));
  CHECK(s["status"] == "ok");

  // malformed and unknown commands
  CHECK(ft_run("{not json", &summary) == FT_ERR_INVALID_ARGUMENT);
  CHECK(ft_run("{\"cmd\":\"no-such\"}", &summary) == FT_ERR_INVALID_ARGUMENT);

  // wolff over a measure file, twice into separate dirs: identical bytes
  const std::string mpath = (dir / "mu.csv").string();
  fractrace::DiscreteMeasure({{2.0, fractrace::make_point(0.0), 1.0},
                              {2.5, fractrace::make_point(0.4), 0.5}},
                             1)
      .save_csv(mpath);
  for (const char* sub : {"a", "b"}) {
    json wcmd = {{"cmd", "wolff"},   {"variant", "R"},
                 {"measure", mpath}, {"p", 2.0},
                 {"alpha", 0.5},     {"at_atoms", true},
                 {"out", (dir / sub).string()}};
    REQUIRE(ft_run(wcmd.dump().c_str(), &summary) == FT_OK);
    ft_string_free(summary);
  }
  CHECK(slurp((dir / "a" / "wolff.csv").string()) == slurp((dir / "b" / "wolff.csv").string()));
  CHECK(slurp((dir / "a" / "summary.json").string()) ==
        slurp((dir / "b" / "summary.json").string()));

  // values in the CSV match the library route
  {
    const auto mu = fractrace::DiscreteMeasure::load_csv(mpath);
    const double direct =
        fractrace::wolff_R(mu, 2.0, {mu.atoms()[0].t, mu.atoms()[0].x}, 0.5).value;
    std::ifstream in(dir / "a" / "wolff.csv");
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(v == doctest::Approx(direct).epsilon(1e-12));
  }
  fs::remove_all(dir);
}

TEST_CASE("ft_run: missing measure file maps to an IO error") {
  char* summary = nullptr;
  json cmd = {{"cmd", "wolff"},  {"variant", "R"},   {"measure", "/nonexistent/mu.csv"},
              {"p", 2.0},        {"alpha", 0.5},     {"at_atoms", true},
              {"out", (fs::temp_directory_path() / "ft_capi_io").string()}};
  CHECK(ft_run(cmd.dump().c_str(), &summary) == FT_ERR_IO);
}
