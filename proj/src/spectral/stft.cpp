#include "mirkit/spectral/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mirkit/error.hpp"
#include "mirkit/spectral/fft.hpp"

namespace mirkit::spectral {

WindowKind parse_window(std::string_view name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "rectangular") return WindowKind::rectangular;
  fail(ErrorKind::UnknownWindow, std::string(name));
}

std::string_view to_string(WindowKind kind) noexcept {
  switch (kind) {
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::rectangular: return "rectangular";
  }
  return "hann";
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::rectangular) return w;
  const double a0 = kind == WindowKind::hann ? 0.5 : 0.54;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = a0 - (1.0 - a0) * std::cos(2.0 * std::numbers::pi * double(i) / double(n));
  return w;
}

namespace {

bool is_power_of_two(std::size_t n) { return n && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

Stft stft(const audio::FramedSignal& framed, const StftOptions& options) {
  const auto& signal = framed.signal();
  require(signal.num_channels() == 1, ErrorKind::InvalidParameter,
          "STFT needs a mono signal; remix first");
  const std::size_t frame_size = framed.frame_size();
  const std::size_t fft_size = options.fft_size ? options.fft_size : next_power_of_two(frame_size);
  require(is_power_of_two(fft_size), ErrorKind::InvalidParameter, "fft_size must be a power of two");
  require(fft_size >= frame_size, ErrorKind::InvalidParameter, "fft_size smaller than frame_size");

  // Window and integer-to-float scaling are folded together.
  auto window = make_window(options.window, frame_size);
  const double scale = 1.0 / signal.full_scale();
  for (double& w : window) w *= scale;

  const std::size_t bins = fft_size / 2 + 1;
  Stft out;
  out.coefficients = Matrix<std::complex<double>>(framed.num_frames(), bins);
  out.frame_rate = framed.fps();
  out.bin_frequencies.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    out.bin_frequencies[k] = double(k) * signal.sample_rate() / double(fft_size);
  out.window = options.window;
  out.circular_shift = options.circular_shift;
  out.fft_size = fft_size;

  RealFft fft(fft_size);
  std::vector<double> buffer(fft_size);
  const std::size_t shift = options.circular_shift ? frame_size / 2 : 0;
  for (std::size_t f = 0; f < framed.num_frames(); ++f) {
    const auto frame = framed.frame(f);
    std::fill(buffer.begin(), buffer.end(), 0.0);
    for (std::size_t i = 0; i < frame_size; ++i) buffer[i] = frame[i] * window[i];
    if (shift) std::rotate(buffer.begin(), buffer.begin() + std::ptrdiff_t(shift), buffer.end());
    fft.forward(buffer, out.coefficients.row(f));
  }
  return out;
}

Spectrogram magnitude(const Stft& stft) {
  const auto& c = stft.coefficients;
  MatrixD values(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.data().size(); ++i) values.data()[i] = std::abs(c.data()[i]);
  return {std::move(values), stft.frame_rate, stft.bin_frequencies};
}

}  // namespace mirkit::spectral
