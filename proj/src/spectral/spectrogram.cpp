#include "mirkit/spectral/spectrogram.hpp"

#include <cmath>
#include <numbers>

#include "mirkit/error.hpp"

namespace mirkit::spectral {

Spectrogram apply_filterbank(const Spectrogram& spec, const Filterbank& fb) {
  if (fb.num_bins() != spec.num_bins())
    fail(ErrorKind::DimensionMismatch, "filterbank has " + std::to_string(fb.num_bins()) +
                                           " bins, spectrogram " + std::to_string(spec.num_bins()));
  MatrixD out(spec.num_frames(), fb.num_bands());
  for (std::size_t f = 0; f < spec.num_frames(); ++f) {
    const auto row = spec.values.row(f);
    for (std::size_t b = 0; b < fb.num_bands(); ++b) {
      const auto& band = fb.band(b);
      double acc = 0.0;
      for (std::size_t i = 0; i < band.weights.size(); ++i) acc += row[band.start + i] * band.weights[i];
      out(f, b) = acc;
    }
  }
  return {std::move(out), spec.frame_rate, fb.band_center_frequencies()};
}

Spectrogram log_compress(const Spectrogram& spec, double mul, double add) {
  require(add > 0.0, ErrorKind::InvalidParameter, "log add must be > 0");
  require(mul > 0.0, ErrorKind::InvalidParameter, "log mul must be > 0");
  Spectrogram out = spec;
  for (double& v : out.values.data()) v = std::log10(mul * v + add);
  return out;
}

MatrixD mfcc(const Spectrogram& log_mel, std::size_t num_coefficients) {
  const std::size_t bands = log_mel.num_bins();
  if (num_coefficients == 0 || num_coefficients > bands)
    fail(ErrorKind::InvalidParameter, "num_coefficients must be in [1, " + std::to_string(bands) + "]");

  MatrixD basis(num_coefficients, bands);
  const double n = double(bands);
  for (std::size_t k = 0; k < num_coefficients; ++k) {
    const double s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < bands; ++i)
      basis(k, i) = s * std::cos(std::numbers::pi * double(k) * (2.0 * double(i) + 1.0) / (2.0 * n));
  }

  MatrixD out(log_mel.num_frames(), num_coefficients);
  for (std::size_t f = 0; f < log_mel.num_frames(); ++f) {
    const auto row = log_mel.values.row(f);
    for (std::size_t k = 0; k < num_coefficients; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < bands; ++i) acc += basis(k, i) * row[i];
      out(f, k) = acc;
    }
  }
  return out;
}

MatrixD chroma(const Spectrogram& spec, double fmin, double fmax) {
  FilterbankOptions options;
  options.bands_per_octave = 12;
  options.fmin = fmin;
  options.fmax = fmax;
  const auto fb = build_filterbank(FilterbankKind::logarithmic, spec.bin_frequencies, options);
  const auto filtered = apply_filterbank(spec, fb);

  std::vector<std::size_t> pitch_class(fb.num_bands());
  for (std::size_t b = 0; b < fb.num_bands(); ++b) {
    const auto semitone = std::lround(12.0 * std::log2(fb.band_center_frequencies()[b] / options.fref));
    pitch_class[b] = std::size_t(((semitone % 12) + 12) % 12);
  }

  MatrixD out(filtered.num_frames(), 12);
  for (std::size_t f = 0; f < filtered.num_frames(); ++f)
    for (std::size_t b = 0; b < fb.num_bands(); ++b) out(f, pitch_class[b]) += filtered.values(f, b);
  return out;
}

}  // namespace mirkit::spectral
