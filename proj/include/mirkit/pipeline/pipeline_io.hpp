#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "mirkit/pipeline/processor.hpp"

namespace mirkit::pipeline {

inline constexpr std::int64_t kPipelineFormatVersion = 1;

struct Pipeline {
  ProcessorSpec root;
  std::int64_t format_version = kPipelineFormatVersion;

  friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

/// Canonical document: sorted keys, two-space indent, trailing newline.
std::string pipeline_to_string(const Pipeline& pipeline);
std::size_t save_pipeline(const Pipeline& pipeline, std::ostream& sink);
void save_pipeline_file(const Pipeline& pipeline, const std::filesystem::path& path);

/// The returned tree is normalized: every node lists all its effective
/// parameters, so saving it again is a fixed point.
Pipeline parse_pipeline(const std::string& document);
Pipeline load_pipeline(std::istream& source);
Pipeline load_pipeline_file(const std::filesystem::path& path);

ProcessorPtr instantiate(const Pipeline& pipeline);

}  // namespace mirkit::pipeline
