#include "mirkit/pipeline/programs.hpp"

#include "mirkit/pipeline/registry.hpp"

namespace mirkit::pipeline {

namespace {

ProcessorSpec with_defaults(const std::string& kind, ParamMap params = {}) {
  return instantiate(ProcessorSpec{kind, std::move(params), {}})->spec();
}

}  // namespace

ProcessorSpec activation_chain(const std::string& model) {
  ProcessorSpec chain{"sequential", {}, {}};
  for (const char* kind : {"load_audio", "frame", "stft", "magnitude", "filterbank", "log"})
    chain.children.push_back(with_defaults(kind));
  if (model.empty())
    chain.children.push_back(with_defaults("spectral_flux"));
  else
    chain.children.push_back(with_defaults("neural_network", {{"model", model}}));
  return chain;
}

ProcessorSpec onset_chain(const std::string& model) {
  auto chain = activation_chain(model);
  chain.children.push_back(with_defaults("pick_peaks", {{"threshold", kOnsetThreshold}}));
  return chain;
}

ProcessorSpec beat_chain(const std::string& model) {
  auto chain = activation_chain(model);
  chain.children.push_back(with_defaults("normalize"));
  chain.children.push_back(with_defaults("beat_tracker"));
  return chain;
}

ProcessorSpec tempo_chain(const std::string& model) {
  auto chain = activation_chain(model);
  chain.children.push_back(with_defaults("comb_tempo"));
  chain.children.push_back(with_defaults("detect_tempo"));
  return chain;
}

ProcessorSpec evaluation_chain(const std::string& task) {
  return with_defaults("evaluate", {{"task", task}});
}

}  // namespace mirkit::pipeline
