#include "mirkit/features/onsets.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mirkit/audio/framed_signal.hpp"
#include "mirkit/error.hpp"
#include "mirkit/spectral/spectrogram.hpp"

namespace mirkit::features {

Activation spectral_flux(const spectral::Spectrogram& spec, std::size_t max_filter_radius) {
  const std::size_t frames = spec.num_frames();
  const std::size_t bins = spec.num_bins();
  std::vector<double> flux(frames, 0.0);
  std::vector<double> reference(bins);
  for (std::size_t t = 1; t < frames; ++t) {
    const auto prev = spec.values.row(t - 1);
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t lo = b >= max_filter_radius ? b - max_filter_radius : 0;
      const std::size_t hi = std::min(bins - 1, b + max_filter_radius);
      reference[b] = *std::max_element(prev.begin() + std::ptrdiff_t(lo), prev.begin() + std::ptrdiff_t(hi) + 1);
    }
    const auto cur = spec.values.row(t);
    double acc = 0.0;
    for (std::size_t b = 0; b < bins; ++b) acc += std::max(0.0, cur[b] - reference[b]);
    flux[t] = acc;
  }
  return Activation(flux, spec.frame_rate);
}

std::vector<double> pick_peaks(const Activation& act, const PeakPicking& options) {
  require(options.pre_max >= 0.0 && options.post_max >= 0.0 && options.combine >= 0.0 && options.smooth >= 0.0,
          ErrorKind::InvalidParameter, "peak-picking windows must be >= 0");
  require(act.num_columns() <= 1, ErrorKind::DimensionMismatch, "peak picking needs a single-column activation");
  const double fps = act.fps;
  std::vector<double> values = act.column(0);
  const std::size_t n = values.size();

  const auto width = std::size_t(std::lround(options.smooth * fps));
  if (width > 1) {
    const std::size_t w = width | 1u;  // odd, so the average stays centered
    const std::size_t half = w / 2;
    std::vector<double> smoothed(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      double acc = 0.0;
      const std::size_t lo = t >= half ? t - half : 0;
      const std::size_t hi = std::min(n - 1, t + half);
      for (std::size_t k = lo; k <= hi; ++k) acc += values[k];
      smoothed[t] = acc / double(w);
    }
    values = std::move(smoothed);
  }

  const auto pre = std::size_t(std::lround(options.pre_max * fps));
  const auto post = std::size_t(std::lround(options.post_max * fps));
  const double min_gap = options.combine * fps + 1e-9;

  std::vector<double> events;
  std::optional<std::size_t> last;
  for (std::size_t t = 0; t < n; ++t) {
    if (values[t] < options.threshold) continue;
    const std::size_t lo = t >= pre ? t - pre : 0;
    const std::size_t hi = std::min(n - 1, t + post);
    const double local = *std::max_element(values.begin() + std::ptrdiff_t(lo), values.begin() + std::ptrdiff_t(hi) + 1);
    if (values[t] != local) continue;
    if (last && double(t - *last) <= min_gap) continue;
    events.push_back(double(t) / fps);
    last = t;
  }
  return events;
}

spectral::Spectrogram onset_spectrogram(const audio::Signal& signal, const OnsetOptions& options) {
  require(options.fps > 0.0, ErrorKind::InvalidParameter, "fps must be > 0");
  const audio::Signal mono = audio::remix(signal, 1);
  const auto framed = audio::frame_signal(mono, options.frame_size, mono.sample_rate() / options.fps);
  const auto stft = spectral::stft(framed, {options.window, options.fft_size, true});
  const auto magnitudes = spectral::magnitude(stft);
  const auto fb = spectral::build_filterbank(options.filterbank, magnitudes.bin_frequencies, options.filterbank_options);
  return spectral::log_compress(spectral::apply_filterbank(magnitudes, fb), options.log_mul, options.log_add);
}

Activation onset_activation(const audio::Signal& signal, const OnsetOptions& options, const ml::NetworkModel* model) {
  const auto spec = onset_spectrogram(signal, options);
  if (model) return Activation(ml::nn_predict(*model, spec.values), spec.frame_rate);
  return spectral_flux(spec, options.max_filter_radius);
}

std::vector<double> detect_onsets(const audio::Signal& signal, const OnsetOptions& options,
                                  const ml::NetworkModel* model) {
  return pick_peaks(onset_activation(signal, options, model), options.peaks);
}

}  // namespace mirkit::features
