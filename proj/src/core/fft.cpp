#include "core/fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace fractrace {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralTransform::SpectralTransform(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const int N = grid_.n_nodes;
  const double dxi = kPi / grid_.L;

  if (grid_.dim == 1) {
    n_freq_ = N / 2 + 1;
    xi_sq_.resize(n_freq_);
    for (long k = 0; k < n_freq_; ++k) {
      const double xi = dxi * k;
      xi_sq_[k] = xi * xi;
    }
  } else {
    n_freq_ = static_cast<long>(N) * (N / 2 + 1);
    xi_sq_.resize(n_freq_);
    for (int k1 = 0; k1 < N; ++k1) {
      const int s1 = k1 <= N / 2 ? k1 : k1 - N;
      for (int k2 = 0; k2 <= N / 2; ++k2) {
        const double a = dxi * s1, b = dxi * k2;
        xi_sq_[static_cast<long>(k1) * (N / 2 + 1) + k2] = a * a + b * b;
      }
    }
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  rbuf_ = fftw_alloc_real(grid_.cells());
  cbuf_ = fftw_alloc_complex(n_freq_);
  auto* cb = static_cast<fftw_complex*>(cbuf_);
  if (grid_.dim == 1) {
    plan_fwd_ = fftw_plan_dft_r2c_1d(N, rbuf_, cb, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_1d(N, cb, rbuf_, FFTW_ESTIMATE);
  } else {
    plan_fwd_ = fftw_plan_dft_r2c_2d(N, N, rbuf_, cb, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_2d(N, N, cb, rbuf_, FFTW_ESTIMATE);
  }
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fftw planning failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

void SpectralTransform::forward(const std::vector<double>& in,
                                std::vector<std::complex<double>>& out) const {
  if (static_cast<long>(in.size()) != grid_.cells())
    throw std::invalid_argument("fft: input size mismatch");
  out.resize(n_freq_);
  std::memcpy(rbuf_, in.data(), sizeof(double) * in.size());
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(out.data(), cbuf_, sizeof(fftw_complex) * n_freq_);
}

void SpectralTransform::backward(const std::vector<std::complex<double>>& in,
                                 std::vector<double>& out) const {
  if (static_cast<long>(in.size()) != n_freq_)
    throw std::invalid_argument("fft: coefficient size mismatch");
  out.resize(grid_.cells());
  std::memcpy(cbuf_, in.data(), sizeof(fftw_complex) * n_freq_);
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  const double inv = 1.0 / grid_.cells();
  for (long c = 0; c < grid_.cells(); ++c) out[c] = rbuf_[c] * inv;
}

}  // namespace fractrace
