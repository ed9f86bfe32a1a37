#include "mirkit/spectral/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "mirkit/error.hpp"

namespace mirkit::spectral {

namespace {

// FFTW planning is not thread-safe; execution with new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(std::size_t n, double* in, fftw_complex* out) {
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(planner_mutex());
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  fftw_plan plan = fftw_plan_dft_r2c_1d(int(n), in, out, FFTW_ESTIMATE);
  if (!plan) fail(ErrorKind::InvalidParameter, "cannot plan FFT of size " + std::to_string(n));
  plans.emplace(n, plan);
  return plan;
}

}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
  require(size_ >= 1, ErrorKind::InvalidParameter, "FFT size must be >= 1");
  in_ = static_cast<double*>(fftw_malloc(sizeof(double) * size_));
  out_ = fftw_malloc(sizeof(fftw_complex) * num_bins());
  plan_ = plan_for(size_, in_, static_cast<fftw_complex*>(out_));
}

RealFft::~RealFft() {
  fftw_free(in_);
  fftw_free(out_);
}

void RealFft::forward(std::span<const double> input, std::span<std::complex<double>> output) {
  require(input.size() == size_ && output.size() == num_bins(), ErrorKind::DimensionMismatch,
          "FFT buffer size mismatch");
  std::copy(input.begin(), input.end(), in_);
  auto* out = static_cast<fftw_complex*>(out_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), in_, out);
  for (std::size_t k = 0; k < output.size(); ++k) output[k] = {out[k][0], out[k][1]};
}

}  // namespace mirkit::spectral
