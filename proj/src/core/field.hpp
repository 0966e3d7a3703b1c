#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/measure.hpp"

namespace fractrace {

// Uniform periodic grid on [-L, L)^dim, n_nodes per axis (even), h = 2L/n.
struct GridSpec {
  double L = 8.0;
  int n_nodes = 256;
  int dim = 1;

  void validate() const;
  double h() const { return 2.0 * L / n_nodes; }
  long cells() const {
    long c = 1;
    for (int i = 0; i < dim; ++i) c *= n_nodes;
    return c;
  }
  double cell_volume() const { return std::pow(h(), dim); }
  double node_coord(int i) const { return -L + i * h(); }
  // nearest node index per axis, wrapped into [0, n)
  int nearest_index(double x) const;
  SpacePoint node_point(long flat) const;
  long flat_index(const SpacePoint& x) const;  // nearest node
};

// Grid-sampled f(x).
struct SpatialField {
  GridSpec grid;
  std::vector<double> v;

  SpatialField() = default;
  explicit SpatialField(const GridSpec& g) : grid(g), v(g.cells(), 0.0) {}
  double& at(long i) { return v[i]; }
  double at(long i) const { return v[i]; }

  void save_csv(const std::string& path) const;  // sidecar at path + ".json"
  static SpatialField load_csv(const std::string& path);
};

// Grid-sampled g(t, x) on 0 = t_0 < ... < t_M = T.
struct SpaceTimeField {
  GridSpec grid;
  double T = 1.0;
  int M = 16;
  std::vector<double> v;  // (M+1) x cells, slice-major

  SpaceTimeField() = default;
  SpaceTimeField(const GridSpec& g, double T_, int M_)
      : grid(g), T(T_), M(M_), v(static_cast<std::size_t>(M_ + 1) * g.cells(), 0.0) {
    if (!(T > 0.0) || M < 1) throw std::invalid_argument("space-time field: T > 0, M >= 1");
  }
  double dt() const { return T / M; }
  double time(int j) const { return j * dt(); }
  double* slice(int j) { return v.data() + static_cast<std::size_t>(j) * grid.cells(); }
  const double* slice(int j) const {
    return v.data() + static_cast<std::size_t>(j) * grid.cells();
  }

  void save_csv(const std::string& path) const;
  static SpaceTimeField load_csv(const std::string& path);
};

// Riemann / trapezoid norms on the grid.
double norm_lp(const SpatialField& f, double p);
double norm_lp(const SpaceTimeField& g, double p);

// (sum_i w_i |v_i|^q)^{1/q} over the atoms of mu.
double norm_lq_mu(const std::vector<double>& values, const DiscreteMeasure& mu, double q);

// Exponent pair with conjugates; S-variant capacity work additionally
// requires p < 1 + n/(2 alpha).
struct ExponentConfig {
  double p = 2.0;
  double q = 2.0;
  double p_conj() const { return conjugate_exponent(p); }
  double q_conj() const { return conjugate_exponent(q); }
  void validate() const {
    conjugate_exponent(p);
    conjugate_exponent(q);
  }
  bool s_admissible(double alpha, int dim) const {
    return p < 1.0 + dim / (2.0 * alpha);
  }
};

}  // namespace fractrace
