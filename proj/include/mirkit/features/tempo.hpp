#pragma once

#include <cstddef>
#include <vector>

#include "mirkit/features/activation.hpp"

namespace mirkit::features {

/// Resonance strength per integer beat interval (lag, in frames).
struct TempoHistogram {
  std::vector<double> strengths;
  std::size_t min_lag = 1;
  double fps = 100.0;

  std::size_t lag(std::size_t i) const noexcept { return min_lag + i; }
  double bpm(std::size_t i) const noexcept { return 60.0 * fps / double(lag(i)); }
};

struct TempoEstimate {
  double bpm = 0.0;
  double strength = 0.0;
  friend bool operator==(const TempoEstimate&, const TempoEstimate&) = default;
};

/// For each lag tau: y(t) = act(t) + alpha * y(t - tau); strength = sum act(t) * y(t).
TempoHistogram comb_filter_tempo(const Activation& act, double min_bpm = 40.0, double max_bpm = 250.0,
                                 double alpha = 0.79);

/// Histogram peaks, strongest first (ties: slower tempo first), strengths
/// renormalized to sum to one over the reported tempi.
std::vector<TempoEstimate> detect_tempo(const TempoHistogram& hist, std::size_t max_tempi = 3);

}  // namespace mirkit::features
