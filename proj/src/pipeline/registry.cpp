#include "mirkit/pipeline/registry.hpp"

#include "mirkit/error.hpp"

namespace mirkit::pipeline {

Registry& Registry::global() {
  static Registry* registry = [] {
    auto* r = new Registry;
    register_builtin_processors(*r);
    return r;
  }();
  return *registry;
}

void Registry::add(const std::string& kind, ProcessorFactory factory) {
  std::lock_guard lock(mutex_);
  factories_[kind] = std::move(factory);
}

bool Registry::contains(std::string_view kind) const {
  std::lock_guard lock(mutex_);
  return factories_.find(kind) != factories_.end();
}

std::vector<std::string> Registry::kinds() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [kind, _] : factories_) out.push_back(kind);
  return out;
}

ProcessorPtr Registry::create(const ProcessorSpec& spec) const {
  ProcessorFactory factory;
  {
    std::lock_guard lock(mutex_);
    const auto it = factories_.find(spec.kind);
    if (it == factories_.end()) fail(ErrorKind::UnregisteredProcessor, "unknown processor kind \"" + spec.kind + "\"");
    factory = it->second;
  }
  return factory(spec);
}

ProcessorPtr instantiate(const ProcessorSpec& spec) { return Registry::global().create(spec); }

}  // namespace mirkit::pipeline
