#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mirkit/pipeline/data.hpp"

namespace mirkit::pipeline {

using ParamValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;
using ParamMap = std::map<std::string, ParamValue>;

struct ProcessorSpec {
  std::string kind;
  ParamMap params;
  std::vector<ProcessorSpec> children;

  friend bool operator==(const ProcessorSpec&, const ProcessorSpec&) = default;
};

/// Immutable after construction; process() may run concurrently.
class Processor {
 public:
  virtual ~Processor() = default;
  virtual Data process(const Data& input) const = 0;
  /// Kind plus every effective parameter, defaults included.
  virtual ProcessorSpec spec() const = 0;

  Data operator()(const Data& input) const { return process(input); }
};

using ProcessorPtr = std::shared_ptr<const Processor>;

/// Applies members left to right. Throws EmptyChain for an empty list.
ProcessorPtr compose_sequential(std::vector<ProcessorPtr> processors);

/// Applies every member to the same input and returns a DataList in member
/// order. workers = 0 uses the hardware concurrency.
ProcessorPtr compose_parallel(std::vector<ProcessorPtr> processors, std::size_t workers = 0);

/// Typed, checked access to a ProcessorSpec's params. Every parameter must be
/// read exactly once; finish() rejects anything left over.
class ParamReader {
 public:
  explicit ParamReader(const ProcessorSpec& spec);

  bool get_bool(const std::string& name, bool fallback);
  std::int64_t get_int(const std::string& name, std::int64_t fallback);
  double get_double(const std::string& name, double fallback);
  std::string get_string(const std::string& name, const std::string& fallback);

  /// Throws InvalidParameter naming "kind.name" unless ok.
  void check(bool ok, const std::string& name, const std::string& requirement) const;
  void finish() const;

 private:
  const ParamValue* take(const std::string& name);

  const ProcessorSpec& spec_;
  std::map<std::string, bool> used_;
};

}  // namespace mirkit::pipeline
