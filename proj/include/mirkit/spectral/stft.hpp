#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "mirkit/audio/framed_signal.hpp"
#include "mirkit/matrix.hpp"

namespace mirkit::spectral {

enum class WindowKind { hann, hamming, rectangular };

WindowKind parse_window(std::string_view name);
std::string_view to_string(WindowKind kind) noexcept;

/// Periodic (DFT-even) window of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

/// Frame-major magnitudes (or any nonnegative per-bin quantity) with the frame
/// rate and the frequency of every column.
struct Spectrogram {
  MatrixD values;
  double frame_rate = 0.0;
  std::vector<double> bin_frequencies;

  std::size_t num_frames() const noexcept { return values.rows(); }
  std::size_t num_bins() const noexcept { return values.cols(); }
};

struct Stft {
  Matrix<std::complex<double>> coefficients;
  double frame_rate = 0.0;
  std::vector<double> bin_frequencies;
  WindowKind window = WindowKind::hann;
  bool circular_shift = true;
  std::size_t fft_size = 0;
};

struct StftOptions {
  WindowKind window = WindowKind::hann;
  /// 0 selects the smallest power of two >= frame_size.
  std::size_t fft_size = 0;
  bool circular_shift = true;
};

/// Per frame: scale to [-1, 1), window, zero-pad to fft_size, optionally
/// rotate so the frame center lands at index 0, then keep bins 0..fft_size/2.
Stft stft(const audio::FramedSignal& framed, const StftOptions& options = {});

Spectrogram magnitude(const Stft& stft);

}  // namespace mirkit::spectral
