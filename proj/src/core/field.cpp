#include "core/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fractrace {

using json = nlohmann::ordered_json;

void GridSpec::validate() const {
  if (!(L > 0.0)) throw std::invalid_argument("grid: L must be positive");
  if (n_nodes < 4 || n_nodes % 2 != 0)
    throw std::invalid_argument("grid: n_nodes must be even and >= 4");
  if (dim < 1 || dim > 2) throw std::invalid_argument("grid: dim must be 1 or 2");
}

int GridSpec::nearest_index(double x) const {
  long i = std::lround((x + L) / h());
  const long n = n_nodes;
  i %= n;
  if (i < 0) i += n;
  return static_cast<int>(i);
}

SpacePoint GridSpec::node_point(long flat) const {
  SpacePoint p{0.0, 0.0, 0.0};
  if (dim == 1) {
    p[0] = node_coord(static_cast<int>(flat));
  } else {
    p[0] = node_coord(static_cast<int>(flat / n_nodes));
    p[1] = node_coord(static_cast<int>(flat % n_nodes));
  }
  return p;
}

long GridSpec::flat_index(const SpacePoint& x) const {
  if (dim == 1) return nearest_index(x[0]);
  return static_cast<long>(nearest_index(x[0])) * n_nodes + nearest_index(x[1]);
}

namespace {

void write_sidecar(const std::string& path, const GridSpec& g, double T, int M) {
  json j;
  j["L"] = g.L;
  j["h"] = g.h();
  j["T"] = T;
  j["M"] = M;
  j["n"] = g.dim;
  std::ofstream out(path + ".json");
  if (!out) throw std::runtime_error("field: cannot write sidecar for " + path);
  out << j.dump(2) << "\n";
}

struct Sidecar {
  GridSpec grid;
  double T = 0.0;
  int M = 0;
};

Sidecar read_sidecar(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw std::runtime_error("field: missing sidecar " + path + ".json");
  json j = json::parse(in);
  Sidecar s;
  s.grid.L = j.at("L").get<double>();
  const double h = j.at("h").get<double>();
  s.grid.dim = j.at("n").get<int>();
  s.grid.n_nodes = static_cast<int>(std::lround(2.0 * s.grid.L / h));
  s.T = j.at("T").get<double>();
  s.M = j.at("M").get<int>();
  s.grid.validate();
  return s;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

void SpatialField::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("field: cannot write " + path);
  out << (grid.dim == 1 ? "x1,value\n" : "x1,x2,value\n");
  for (long c = 0; c < grid.cells(); ++c) {
    const SpacePoint p = grid.node_point(c);
    out << fmt(p[0]);
    if (grid.dim == 2) out << ',' << fmt(p[1]);
    out << ',' << fmt(v[c]) << '\n';
  }
  write_sidecar(path, grid, 0.0, 0);
}

SpatialField SpatialField::load_csv(const std::string& path) {
  const Sidecar s = read_sidecar(path);
  SpatialField f(s.grid);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("field: cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  long c = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (c >= f.grid.cells()) throw std::runtime_error("field: too many rows in " + path);
    const auto pos = line.rfind(',');
    f.v[c++] = std::stod(line.substr(pos + 1));
  }
  if (c != f.grid.cells()) throw std::runtime_error("field: row count mismatch in " + path);
  return f;
}

void SpaceTimeField::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("field: cannot write " + path);
  out << (grid.dim == 1 ? "t,x1,value\n" : "t,x1,x2,value\n");
  for (int j = 0; j <= M; ++j) {
    const double* s = slice(j);
    for (long c = 0; c < grid.cells(); ++c) {
      const SpacePoint p = grid.node_point(c);
      out << fmt(time(j)) << ',' << fmt(p[0]);
      if (grid.dim == 2) out << ',' << fmt(p[1]);
      out << ',' << fmt(s[c]) << '\n';
    }
  }
  write_sidecar(path, grid, T, M);
}

SpaceTimeField SpaceTimeField::load_csv(const std::string& path) {
  const Sidecar s = read_sidecar(path);
  if (s.M < 1) throw std::runtime_error("field: sidecar M < 1 for space-time field");
  SpaceTimeField f(s.grid, s.T, s.M);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("field: cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::size_t c = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (c >= f.v.size()) throw std::runtime_error("field: too many rows in " + path);
    const auto pos = line.rfind(',');
    f.v[c++] = std::stod(line.substr(pos + 1));
  }
  if (c != f.v.size()) throw std::runtime_error("field: row count mismatch in " + path);
  return f;
}

double norm_lp(const SpatialField& f, double p) {
  conjugate_exponent(p);
  double s = 0.0;
  for (double x : f.v) s += std::pow(std::abs(x), p);
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

double norm_lp(const SpaceTimeField& g, double p) {
  conjugate_exponent(p);
  double s = 0.0;
  for (int j = 0; j <= g.M; ++j) {
    const double w = (j == 0 || j == g.M) ? 0.5 : 1.0;
    const double* sl = g.slice(j);
    double sj = 0.0;
    for (long c = 0; c < g.grid.cells(); ++c) sj += std::pow(std::abs(sl[c]), p);
    s += w * sj;
  }
  return std::pow(s * g.dt() * g.grid.cell_volume(), 1.0 / p);
}

double norm_lq_mu(const std::vector<double>& values, const DiscreteMeasure& mu, double q) {
  conjugate_exponent(q);
  if (values.size() != mu.size())
    throw std::invalid_argument("norm_lq_mu: values/atoms size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    s += mu.atoms()[i].w * std::pow(std::abs(values[i]), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace fractrace
