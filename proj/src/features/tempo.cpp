#include "mirkit/features/tempo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mirkit/error.hpp"

namespace mirkit::features {

TempoHistogram comb_filter_tempo(const Activation& act, double min_bpm, double max_bpm, double alpha) {
  require(min_bpm > 0.0 && min_bpm < max_bpm, ErrorKind::InvalidParameter, "need 0 < min_bpm < max_bpm");
  require(alpha >= 0.0 && alpha < 1.0, ErrorKind::InvalidParameter, "comb filter alpha must be in [0, 1)");
  if (act.num_frames() > 0 && act.num_columns() != 1)
    fail(ErrorKind::InvalidParameter, "tempo estimation needs a single-column activation");

  const auto min_lag = std::size_t(std::lround(60.0 * act.fps / max_bpm));
  const auto max_lag = std::size_t(std::lround(60.0 * act.fps / min_bpm));
  require(min_lag >= 1, ErrorKind::InvalidParameter, "max_bpm too high for the frame rate");

  const std::vector<double> x = act.column(0);
  TempoHistogram hist;
  hist.min_lag = min_lag;
  hist.fps = act.fps;
  hist.strengths.assign(max_lag - min_lag + 1, 0.0);
  std::vector<double> y(x.size());
  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    double strength = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      y[t] = x[t] + (t >= lag ? alpha * y[t - lag] : 0.0);
      strength += x[t] * y[t];
    }
    hist.strengths[lag - min_lag] = strength;
  }
  return hist;
}

std::vector<TempoEstimate> detect_tempo(const TempoHistogram& hist, std::size_t max_tempi) {
  const auto& h = hist.strengths;
  if (h.empty()) fail(ErrorKind::EmptyHistogram, "tempo histogram has no bins");
  require(max_tempi >= 1, ErrorKind::InvalidParameter, "max_tempi must be >= 1");

  // A plateau counts once, at its largest lag (slowest tempo).
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) continue;
    const bool rises = i == 0 || h[i] >= h[i - 1];
    const bool falls = i + 1 == h.size() || h[i] > h[i + 1];
    if (rises && falls) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
    return h[a] != h[b] ? h[a] > h[b] : a > b;
  });
  if (peaks.size() > max_tempi) peaks.resize(max_tempi);

  double total = 0.0;
  for (std::size_t i : peaks) total += h[i];
  std::vector<TempoEstimate> out;
  for (std::size_t i : peaks) out.push_back({hist.bpm(i), h[i] / total});
  return out;
}

}  // namespace mirkit::features
