#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mirkit/features/activation.hpp"
#include "mirkit/ml/hmm.hpp"

namespace mirkit::features {

/// Bar-pointer style state space: one state per (beat interval, phase) pair,
/// intervals in whole frames, enumerated interval-major and phase-minor.
class BeatStateSpace {
 public:
  BeatStateSpace(std::size_t min_interval, std::size_t max_interval);

  std::size_t min_interval() const noexcept { return min_interval_; }
  std::size_t max_interval() const noexcept { return max_interval_; }
  std::size_t num_intervals() const noexcept { return max_interval_ - min_interval_ + 1; }
  std::size_t num_states() const noexcept { return num_states_; }

  std::size_t state(std::size_t interval, std::size_t phase) const;
  std::size_t interval_of(std::size_t state) const { return intervals_.at(state); }
  std::size_t phase_of(std::size_t state) const { return phases_.at(state); }

 private:
  std::size_t min_interval_;
  std::size_t max_interval_;
  std::size_t num_states_ = 0;
  std::vector<std::size_t> first_state_;
  std::vector<std::uint32_t> intervals_;
  std::vector<std::uint32_t> phases_;
};

/// Intervals round(60 fps / max_bpm) .. round(60 fps / min_bpm).
BeatStateSpace build_beat_state_space(double min_bpm, double max_bpm, double fps);

struct BeatTracking {
  double transition_lambda = 100.0;
  double observation_lambda = 16.0;
  /// Move each decoded beat to the strongest activation frame inside its beat
  /// window. Without it, an impulse can sit anywhere in the window.
  bool correct = true;
};

/// The HMM used by dbn_beat_track; observations are the two-column matrix
/// built by beat_observations().
ml::HmmModel build_beat_hmm(const BeatStateSpace& space, const BeatTracking& options);

/// Column 0: beat-state likelihood act(t); column 1: non-beat likelihood
/// (1 - act(t)) / (observation_lambda - 1). act is clamped to [1e-7, 1 - 1e-7].
MatrixD beat_observations(const Activation& act, double observation_lambda);

std::vector<double> dbn_beat_track(const Activation& act, const BeatStateSpace& space,
                                   const BeatTracking& options = {});

}  // namespace mirkit::features
