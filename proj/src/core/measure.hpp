#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace fractrace {

struct Atom {
  double t = 0.0;
  SpacePoint x{0.0, 0.0, 0.0};
  double w = 0.0;
};

// Finite nonnegative atomic measure on R_+^{1+n}. Immutable once built.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Atom> atoms, int dim);

  static DiscreteMeasure load_csv(const std::string& path);
  void save_csv(const std::string& path) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  int dim() const { return dim_; }
  double total() const { return total_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  DiscreteMeasure scaled(double c) const;

 private:
  std::vector<Atom> atoms_;
  int dim_ = 1;
  double total_ = 0.0;
};

}  // namespace fractrace
