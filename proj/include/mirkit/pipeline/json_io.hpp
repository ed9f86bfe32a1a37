#pragma once

#include "json.hpp"
#include "mirkit/pipeline/pipeline_io.hpp"

namespace mirkit::pipeline {

/// Node form {kind, params, children?}. Throws UnregisteredProcessor or
/// UnserializableParameter.
nlohmann::json spec_to_json(const ProcessorSpec& spec);
/// Throws ParseError for structural problems and UnregisteredProcessor for unknown kinds.
ProcessorSpec spec_from_json(const nlohmann::json& node);

nlohmann::json pipeline_to_json(const Pipeline& pipeline);
/// Checks the format version and normalizes the tree (see load_pipeline).
Pipeline pipeline_from_json(const nlohmann::json& document);

}  // namespace mirkit::pipeline
