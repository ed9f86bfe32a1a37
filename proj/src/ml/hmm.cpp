#include "mirkit/ml/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit::ml {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

DiscreteObservations::DiscreteObservations(MatrixD probabilities) : table_(std::move(probabilities)) {
  for (double p : table_.data())
    require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidParameter, "observation probability outside [0, 1]");
}

void DiscreteObservations::log_likelihoods(const MatrixD& observations, std::size_t frame,
                                           std::span<double> out) const {
  require(observations.cols() >= 1, ErrorKind::DimensionMismatch, "discrete observations need a column");
  const double symbol = observations(frame, 0);
  if (!(symbol >= 0.0 && symbol < double(table_.cols())) || symbol != std::floor(symbol))
    fail(ErrorKind::DimensionMismatch, "observation symbol out of range at frame " + std::to_string(frame));
  const auto k = std::size_t(symbol);
  for (std::size_t s = 0; s < table_.rows(); ++s) out[s] = std::log(table_(s, k));
}

GmmObservations::GmmObservations(std::vector<GmmModel> per_state) : gmms_(std::move(per_state)) {}

void GmmObservations::log_likelihoods(const MatrixD& observations, std::size_t frame,
                                      std::span<double> out) const {
  const auto row = observations.row(frame);
  for (std::size_t s = 0; s < gmms_.size(); ++s) out[s] = gmm_log_likelihood(gmms_[s], row);
}

ActivationColumnObservations::ActivationColumnObservations(std::vector<std::uint32_t> columns)
    : columns_(std::move(columns)) {}

void ActivationColumnObservations::log_likelihoods(const MatrixD& observations, std::size_t frame,
                                                   std::span<double> out) const {
  const auto row = observations.row(frame);
  for (std::size_t s = 0; s < columns_.size(); ++s) {
    if (columns_[s] >= row.size())
      fail(ErrorKind::DimensionMismatch, "state " + std::to_string(s) + " reads missing column " +
                                             std::to_string(columns_[s]));
    out[s] = std::log(row[columns_[s]]);
  }
}

HmmModel::HmmModel(std::size_t num_states, std::vector<Transition> transitions,
                   std::vector<double> initial, std::shared_ptr<const ObservationModel> observations)
    : num_states_(num_states),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)),
      observations_(std::move(observations)) {
  require(num_states_ > 0, ErrorKind::InvalidParameter, "HMM needs at least one state");
  require(num_states_ <= std::numeric_limits<std::uint32_t>::max(), ErrorKind::InvalidParameter,
          "too many HMM states");
  require(initial_.size() == num_states_, ErrorKind::ShapeMismatch, "initial distribution length");
  require(observations_ != nullptr && observations_->num_states() == num_states_,
          ErrorKind::ShapeMismatch, "observation model state count");

  const double initial_sum = std::accumulate(initial_.begin(), initial_.end(), 0.0);
  require(std::abs(initial_sum - 1.0) <= 1e-9, ErrorKind::InvalidParameter,
          "initial distribution sums to " + std::to_string(initial_sum));

  std::vector<double> outgoing(num_states_, 0.0);
  std::vector<std::size_t> counts(num_states_ + 1, 0);
  for (const auto& t : transitions_) {
    require(t.from < num_states_ && t.to < num_states_, ErrorKind::ShapeMismatch,
            "transition references an unknown state");
    require(t.probability >= 0.0 && t.probability <= 1.0 + 1e-12, ErrorKind::InvalidParameter,
            "transition probability outside [0, 1]");
    outgoing[t.from] += t.probability;
    ++counts[t.to + 1];
  }
  for (std::size_t s = 0; s < num_states_; ++s)
    require(std::abs(outgoing[s] - 1.0) <= 1e-9, ErrorKind::InvalidParameter,
            "outgoing probabilities of state " + std::to_string(s) + " sum to " +
                std::to_string(outgoing[s]));

  offsets_.assign(num_states_ + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), offsets_.begin());
  std::vector<std::size_t> order(transitions_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ta = transitions_[a];
    const auto& tb = transitions_[b];
    return ta.to != tb.to ? ta.to < tb.to : ta.from < tb.from;
  });
  sources_.resize(order.size());
  log_probs_.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sources_[i] = transitions_[order[i]].from;
    log_probs_[i] = std::log(transitions_[order[i]].probability);
  }
}

ViterbiResult hmm_viterbi(const HmmModel& model, const MatrixD& observations) {
  const std::size_t frames = observations.rows();
  require(frames >= 1, ErrorKind::InvalidParameter, "Viterbi needs at least one frame");
  const std::size_t n = model.num_states();
  const auto& offsets = model.incoming_offsets();
  const auto& sources = model.incoming_sources();
  const auto& log_probs = model.incoming_log_probs();

  std::vector<double> delta(n), next(n), obs(n);
  std::vector<std::uint32_t> back(frames * n, 0);

  model.observations().log_likelihoods(observations, 0, obs);
  for (std::size_t s = 0; s < n; ++s) delta[s] = std::log(model.initial()[s]) + obs[s];

  for (std::size_t t = 1; t < frames; ++t) {
    model.observations().log_likelihoods(observations, t, obs);
    std::uint32_t* bp = back.data() + t * n;
    for (std::size_t s = 0; s < n; ++s) {
      double best = kNegInf;
      std::uint32_t arg = 0;
      for (std::size_t i = offsets[s]; i < offsets[s + 1]; ++i) {
        const double v = delta[sources[i]] + log_probs[i];
        if (v > best) {
          best = v;
          arg = sources[i];
        }
      }
      next[s] = best + obs[s];
      bp[s] = arg;
    }
    delta.swap(next);
  }

  const auto last = std::max_element(delta.begin(), delta.end());
  if (!(*last > kNegInf)) fail(ErrorKind::NoValidPath, "every state sequence has zero probability");

  ViterbiResult result;
  result.log_probability = *last;
  result.path.resize(frames);
  auto state = std::uint32_t(last - delta.begin());
  for (std::size_t t = frames; t-- > 0;) {
    result.path[t] = state;
    state = back[t * n + state];
  }
  return result;
}

MatrixD hmm_forward(const HmmModel& model, const MatrixD& observations) {
  const std::size_t frames = observations.rows();
  require(frames >= 1, ErrorKind::InvalidParameter, "forward pass needs at least one frame");
  const std::size_t n = model.num_states();
  const auto& offsets = model.incoming_offsets();
  const auto& sources = model.incoming_sources();
  const auto& log_probs = model.incoming_log_probs();

  MatrixD alpha(frames, n);
  std::vector<double> obs(n);
  std::vector<double> probs(log_probs.size());
  std::transform(log_probs.begin(), log_probs.end(), probs.begin(), [](double l) { return std::exp(l); });

  // Likelihoods are rescaled by their per-frame maximum; the normalization
  // below removes the common factor.
  auto likelihoods = [&](std::size_t t) {
    model.observations().log_likelihoods(observations, t, obs);
    const double peak = *std::max_element(obs.begin(), obs.end());
    if (!(peak > kNegInf)) fail(ErrorKind::NoValidPath, "zero likelihood at frame " + std::to_string(t));
    for (double& v : obs) v = std::exp(v - peak);
  };
  auto normalize = [&](std::size_t t) {
    auto row = alpha.row(t);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (!(sum > 0.0)) fail(ErrorKind::NoValidPath, "zero total likelihood at frame " + std::to_string(t));
    for (double& v : row) v /= sum;
  };

  likelihoods(0);
  for (std::size_t s = 0; s < n; ++s) alpha(0, s) = model.initial()[s] * obs[s];
  normalize(0);

  for (std::size_t t = 1; t < frames; ++t) {
    likelihoods(t);
    const auto prev = alpha.row(t - 1);
    for (std::size_t s = 0; s < n; ++s) {
      double acc = 0.0;
      for (std::size_t i = offsets[s]; i < offsets[s + 1]; ++i) acc += prev[sources[i]] * probs[i];
      alpha(t, s) = acc * obs[s];
    }
    normalize(t);
  }
  return alpha;
}

}  // namespace mirkit::ml
