#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace mirkit::spectral {

/// Real-input forward FFT of a fixed size backed by FFTW. Each instance owns
/// its buffers, so separate instances may run concurrently; the underlying
/// plan is shared per size.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return size_; }
  std::size_t num_bins() const noexcept { return size_ / 2 + 1; }

  /// `input.size() == size()`, `output.size() == num_bins()`.
  void forward(std::span<const double> input, std::span<std::complex<double>> output);

 private:
  std::size_t size_;
  double* in_;
  void* out_;
  void* plan_;
};

}  // namespace mirkit::spectral
