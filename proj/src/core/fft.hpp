#pragma once

#include <complex>
#include <vector>

#include "core/field.hpp"

namespace fractrace {

// Real <-> complex FFT on a GridSpec, with the frequency table of the
// periodic box [-L, L)^dim (xi = pi k / L). Forward is unnormalized, backward
// applies 1/N. One instance per thread; plans are created with FFTW_ESTIMATE
// so results do not depend on planning heuristics.
class SpectralTransform {
 public:
  explicit SpectralTransform(const GridSpec& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  long n_freq() const { return n_freq_; }
  const GridSpec& grid() const { return grid_; }

  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) const;
  void backward(const std::vector<std::complex<double>>& in, std::vector<double>& out) const;

  // |xi|^2 at flat frequency index
  double xi_sq(long f) const { return xi_sq_[f]; }
  const std::vector<double>& xi_sq_table() const { return xi_sq_; }

 private:
  GridSpec grid_;
  long n_freq_ = 0;
  std::vector<double> xi_sq_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;
};

}  // namespace fractrace
