#include "core/measure.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fractrace {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, int dim)
    : atoms_(std::move(atoms)), dim_(dim) {
  if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("measure: dim must be 1..3");
  total_ = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.t > 0.0)) throw std::invalid_argument("measure: atom times must be positive");
    if (a.w < 0.0) throw std::invalid_argument("measure: weights must be nonnegative");
    total_ += a.w;
  }
}

DiscreteMeasure DiscreteMeasure::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("measure: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("measure: empty file " + path);

  // header t,x1[,x2[,x3]],w
  int cols = 1;
  for (char c : line) cols += (c == ',');
  const int dim = cols - 2;
  if (dim < 1 || dim > 3)
    throw std::runtime_error("measure: bad header in " + path + " (want t,x1[,x2],w)");

  std::vector<Atom> atoms;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    Atom a;
    std::vector<double> v;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    if (static_cast<int>(v.size()) != cols)
      throw std::runtime_error("measure: bad row " + std::to_string(line_no) + " in " + path);
    a.t = v[0];
    for (int i = 0; i < dim; ++i) a.x[i] = v[1 + i];
    a.w = v[cols - 1];
    atoms.push_back(a);
  }
  return DiscreteMeasure(std::move(atoms), dim);
}

void DiscreteMeasure::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("measure: cannot write " + path);
  out << "t";
  for (int i = 0; i < dim_; ++i) out << ",x" << (i + 1);
  out << ",w\n";
  char buf[128];
  for (const Atom& a : atoms_) {
    std::snprintf(buf, sizeof(buf), "%.12g", a.t);
    out << buf;
    for (int i = 0; i < dim_; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", a.x[i]);
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.12g", a.w);
    out << ',' << buf << '\n';
  }
}

DiscreteMeasure DiscreteMeasure::scaled(double c) const {
  if (c < 0.0) throw std::invalid_argument("measure: scale must be nonnegative");
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.w *= c;
  return DiscreteMeasure(std::move(atoms), dim_);
}

}  // namespace fractrace
