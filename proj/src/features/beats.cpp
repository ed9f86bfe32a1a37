#include "mirkit/features/beats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit::features {

namespace {
constexpr double kActivationFloor = 1e-7;

bool in_beat_window(std::size_t phase, std::size_t interval, double observation_lambda) {
  return double(phase) < double(interval) / observation_lambda;
}
}  // namespace

BeatStateSpace::BeatStateSpace(std::size_t min_interval, std::size_t max_interval)
    : min_interval_(min_interval), max_interval_(max_interval) {
  require(min_interval_ >= 2, ErrorKind::InvalidParameter,
          "minimum beat interval must be >= 2 frames (got " + std::to_string(min_interval_) + ")");
  require(min_interval_ <= max_interval_, ErrorKind::InvalidParameter, "beat interval range is empty");
  for (std::size_t tau = min_interval_; tau <= max_interval_; ++tau) {
    first_state_.push_back(num_states_);
    for (std::size_t phase = 0; phase < tau; ++phase) {
      intervals_.push_back(std::uint32_t(tau));
      phases_.push_back(std::uint32_t(phase));
    }
    num_states_ += tau;
  }
}

std::size_t BeatStateSpace::state(std::size_t interval, std::size_t phase) const {
  if (interval < min_interval_ || interval > max_interval_ || phase >= interval)
    fail(ErrorKind::IndexOutOfRange, "no state for interval " + std::to_string(interval) + ", phase " +
                                         std::to_string(phase));
  return first_state_[interval - min_interval_] + phase;
}

BeatStateSpace build_beat_state_space(double min_bpm, double max_bpm, double fps) {
  require(min_bpm > 0.0 && min_bpm < max_bpm, ErrorKind::InvalidParameter, "need 0 < min_bpm < max_bpm");
  require(fps > 0.0, ErrorKind::InvalidParameter, "fps must be > 0");
  const auto min_interval = std::size_t(std::lround(60.0 * fps / max_bpm));
  const auto max_interval = std::size_t(std::lround(60.0 * fps / min_bpm));
  return BeatStateSpace(min_interval, max_interval);
}

ml::HmmModel build_beat_hmm(const BeatStateSpace& space, const BeatTracking& options) {
  require(options.transition_lambda > 0.0, ErrorKind::InvalidParameter, "transition_lambda must be > 0");
  require(options.observation_lambda > 1.0, ErrorKind::InvalidParameter, "observation_lambda must be > 1");

  std::vector<ml::Transition> transitions;
  transitions.reserve(space.num_states() + space.num_intervals() * space.num_intervals());
  std::vector<double> change(space.num_intervals());
  for (std::size_t tau = space.min_interval(); tau <= space.max_interval(); ++tau) {
    for (std::size_t phase = 0; phase + 1 < tau; ++phase)
      transitions.push_back({std::uint32_t(space.state(tau, phase)), std::uint32_t(space.state(tau, phase + 1)), 1.0});

    // Beat boundary: the interval may change, exponentially penalized by the ratio.
    double total = 0.0;
    for (std::size_t i = 0; i < change.size(); ++i) {
      const double ratio = double(space.min_interval() + i) / double(tau);
      change[i] = std::exp(-options.transition_lambda * std::abs(ratio - 1.0));
      total += change[i];
    }
    const auto from = std::uint32_t(space.state(tau, tau - 1));
    for (std::size_t i = 0; i < change.size(); ++i) {
      const double p = change[i] / total;
      if (p > 0.0) transitions.push_back({from, std::uint32_t(space.state(space.min_interval() + i, 0)), p});
    }
  }

  std::vector<std::uint32_t> columns(space.num_states());
  for (std::size_t s = 0; s < space.num_states(); ++s)
    columns[s] = in_beat_window(space.phase_of(s), space.interval_of(s), options.observation_lambda) ? 0 : 1;

  std::vector<double> initial(space.num_states(), 1.0 / double(space.num_states()));
  return ml::HmmModel(space.num_states(), std::move(transitions), std::move(initial),
                      std::make_shared<ml::ActivationColumnObservations>(std::move(columns)));
}

MatrixD beat_observations(const Activation& act, double observation_lambda) {
  if (act.num_frames() > 0 && act.num_columns() != 1)
    fail(ErrorKind::DimensionMismatch, "beat tracking needs a single-column activation");
  MatrixD obs(act.num_frames(), 2);
  for (std::size_t t = 0; t < act.num_frames(); ++t) {
    const double a = act.values(t, 0);
    if (a < 0.0 || a > 1.0)
      fail(ErrorKind::InvalidParameter, "beat activation must lie in [0, 1] (frame " + std::to_string(t) + ")");
    const double clamped = std::clamp(a, kActivationFloor, 1.0 - kActivationFloor);
    obs(t, 0) = clamped;
    obs(t, 1) = (1.0 - clamped) / (observation_lambda - 1.0);
  }
  return obs;
}

std::vector<double> dbn_beat_track(const Activation& act, const BeatStateSpace& space, const BeatTracking& options) {
  const MatrixD obs = beat_observations(act, options.observation_lambda);
  if (act.num_frames() == 0) return {};
  const auto hmm = build_beat_hmm(space, options);
  const auto decoded = ml::hmm_viterbi(hmm, obs);

  const std::size_t frames = act.num_frames();
  std::vector<double> beats;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t state = decoded.path[t];
    if (space.phase_of(state) != 0) continue;
    std::size_t beat = t;
    if (options.correct) {
      const std::size_t tau = space.interval_of(state);
      std::size_t end = t;
      while (end < frames && in_beat_window(end - t, tau, options.observation_lambda)) ++end;
      for (std::size_t k = t + 1; k < end; ++k)
        if (act.values(k, 0) > act.values(beat, 0)) beat = k;
    }
    beats.push_back(double(beat) / act.fps);
  }
  return beats;
}

}  // namespace mirkit::features
