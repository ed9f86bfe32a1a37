#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/ml/gmm.hpp"

namespace mirkit::ml {

/// Maps (state, observation frame) to a log-likelihood. Observations are
/// always a frames x dims matrix; each model decides how to read a row.
class ObservationModel {
 public:
  virtual ~ObservationModel() = default;
  virtual std::size_t num_states() const = 0;
  /// Fills `out[s]` with log p(observations[frame] | s) for every state.
  virtual void log_likelihoods(const MatrixD& observations, std::size_t frame,
                               std::span<double> out) const = 0;
};

/// Column 0 of each frame holds an integer symbol; table is states x symbols
/// of probabilities.
class DiscreteObservations final : public ObservationModel {
 public:
  explicit DiscreteObservations(MatrixD probabilities);
  std::size_t num_states() const override { return table_.rows(); }
  void log_likelihoods(const MatrixD& observations, std::size_t frame,
                       std::span<double> out) const override;
  const MatrixD& probabilities() const noexcept { return table_; }

 private:
  MatrixD table_;
};

/// One GMM per state over the full observation row.
class GmmObservations final : public ObservationModel {
 public:
  explicit GmmObservations(std::vector<GmmModel> per_state);
  std::size_t num_states() const override { return gmms_.size(); }
  void log_likelihoods(const MatrixD& observations, std::size_t frame,
                       std::span<double> out) const override;
  const std::vector<GmmModel>& models() const noexcept { return gmms_; }

 private:
  std::vector<GmmModel> gmms_;
};

/// State s reads log(observations(frame, column(s))); typically the
/// observations are a network's output activations.
class ActivationColumnObservations final : public ObservationModel {
 public:
  explicit ActivationColumnObservations(std::vector<std::uint32_t> columns);
  std::size_t num_states() const override { return columns_.size(); }
  void log_likelihoods(const MatrixD& observations, std::size_t frame,
                       std::span<double> out) const override;
  const std::vector<std::uint32_t>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::uint32_t> columns_;
};

struct Transition {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double probability = 0.0;
};

/// HMM with a sparse transition list. Zero-probability transitions are simply
/// absent. Internally transitions are indexed by destination state.
class HmmModel {
 public:
  HmmModel(std::size_t num_states, std::vector<Transition> transitions,
           std::vector<double> initial, std::shared_ptr<const ObservationModel> observations);

  std::size_t num_states() const noexcept { return num_states_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  const std::vector<double>& initial() const noexcept { return initial_; }
  const ObservationModel& observations() const noexcept { return *observations_; }
  std::shared_ptr<const ObservationModel> observation_model() const noexcept { return observations_; }

  // Incoming transitions of state s: indices [incoming_offsets()[s], incoming_offsets()[s+1]),
  // ordered by source state.
  const std::vector<std::size_t>& incoming_offsets() const noexcept { return offsets_; }
  const std::vector<std::uint32_t>& incoming_sources() const noexcept { return sources_; }
  const std::vector<double>& incoming_log_probs() const noexcept { return log_probs_; }

 private:
  std::size_t num_states_;
  std::vector<Transition> transitions_;
  std::vector<double> initial_;
  std::shared_ptr<const ObservationModel> observations_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> sources_;
  std::vector<double> log_probs_;
};

struct ViterbiResult {
  std::vector<std::uint32_t> path;
  double log_probability = 0.0;
};

/// Most probable state sequence. Ties resolve to the lowest state index.
ViterbiResult hmm_viterbi(const HmmModel& model, const MatrixD& observations);

/// Filtered posteriors p(state_t | obs_0..t); every row sums to one.
MatrixD hmm_forward(const HmmModel& model, const MatrixD& observations);

}  // namespace mirkit::ml
