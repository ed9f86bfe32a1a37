#pragma once

#include <cstddef>
#include <vector>

#include "mirkit/audio/signal.hpp"
#include "mirkit/features/activation.hpp"
#include "mirkit/ml/network.hpp"
#include "mirkit/spectral/filterbank.hpp"
#include "mirkit/spectral/stft.hpp"

namespace mirkit::features {

/// Half-wave rectified frame difference summed over bins. The previous frame
/// is maximum-filtered over +-max_filter_radius bins first (0 = plain flux).
Activation spectral_flux(const spectral::Spectrogram& spec, std::size_t max_filter_radius = 0);

struct PeakPicking {
  double threshold = 1.0;
  double pre_max = 0.03;   // seconds
  double post_max = 0.03;  // seconds
  double combine = 0.03;   // seconds
  double smooth = 0.0;     // seconds; moving-average width
};

/// Event times (seconds) of frames that pass the threshold, are the maximum of
/// their [t - pre_max, t + post_max] neighbourhood, and lie strictly more than
/// `combine` after the previously reported event.
std::vector<double> pick_peaks(const Activation& act, const PeakPicking& options);

struct OnsetOptions {
  double fps = 100.0;
  std::size_t frame_size = 2048;
  spectral::WindowKind window = spectral::WindowKind::hann;
  std::size_t fft_size = 0;
  spectral::FilterbankKind filterbank = spectral::FilterbankKind::mel;
  spectral::FilterbankOptions filterbank_options{};
  double log_mul = 1.0;
  double log_add = 1.0;
  std::size_t max_filter_radius = 0;
  PeakPicking peaks{};
};

/// The log-filtered spectrogram the onset detectors consume.
spectral::Spectrogram onset_spectrogram(const audio::Signal& signal, const OnsetOptions& options);

/// Spectral-flux activation, or the output of `model` when one is given.
Activation onset_activation(const audio::Signal& signal, const OnsetOptions& options,
                            const ml::NetworkModel* model = nullptr);

std::vector<double> detect_onsets(const audio::Signal& signal, const OnsetOptions& options = {},
                                  const ml::NetworkModel* model = nullptr);

}  // namespace mirkit::features
