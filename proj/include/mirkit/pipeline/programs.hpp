#pragma once

#include <string>

#include "mirkit/pipeline/processor.hpp"

namespace mirkit::pipeline {

/// load_audio -> frame -> stft -> magnitude -> filterbank -> log -> spectral_flux
/// (or neural_network when `model` is non-empty), default parameters throughout.
ProcessorSpec activation_chain(const std::string& model = "");

/// activation chain -> pick_peaks
ProcessorSpec onset_chain(const std::string& model = "");
/// activation chain -> normalize -> beat_tracker
ProcessorSpec beat_chain(const std::string& model = "");
/// activation chain -> comb_tempo -> detect_tempo
ProcessorSpec tempo_chain(const std::string& model = "");
/// evaluate{task}
ProcessorSpec evaluation_chain(const std::string& task);

/// Default onset threshold for the spectral-flux activation.
inline constexpr double kOnsetThreshold = 4.0;

}  // namespace mirkit::pipeline
