#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mirkit/pipeline/processor.hpp"

namespace mirkit::pipeline {

using ProcessorFactory = std::function<ProcessorPtr(const ProcessorSpec&)>;

/// Name -> constructor table. The global instance holds every built-in kind.
class Registry {
 public:
  static Registry& global();

  void add(const std::string& kind, ProcessorFactory factory);
  bool contains(std::string_view kind) const;
  std::vector<std::string> kinds() const;
  /// Throws UnregisteredProcessor for unknown kinds, InvalidParameter for bad params.
  ProcessorPtr create(const ProcessorSpec& spec) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, ProcessorFactory, std::less<>> factories_;
};

ProcessorPtr instantiate(const ProcessorSpec& spec);

void register_builtin_processors(Registry& registry);

}  // namespace mirkit::pipeline
