#include <cmath>
#include <fstream>
#include <sstream>

#include "mirkit/error.hpp"
#include "mirkit/pipeline/json_io.hpp"
#include "mirkit/pipeline/registry.hpp"

namespace mirkit::pipeline {

using nlohmann::json;

namespace {

json param_to_json(const std::string& kind, const std::string& name, const ParamValue& value) {
  auto finite = [&](double v) {
    if (!std::isfinite(v))
      fail(ErrorKind::UnserializableParameter, kind + "." + name + " is not a finite number");
    return v;
  };
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return finite(v);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          json list = json::array();
          for (double x : v) list.push_back(finite(x));
          return list;
        } else {
          return v;
        }
      },
      value);
}

ParamValue param_from_json(const std::string& kind, const std::string& name, const json& value) {
  switch (value.type()) {
    case json::value_t::boolean:
      return value.get<bool>();
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return value.get<std::int64_t>();
    case json::value_t::number_float:
      return value.get<double>();
    case json::value_t::string:
      return value.get<std::string>();
    case json::value_t::array: {
      std::vector<double> list;
      for (const auto& item : value) {
        if (!item.is_number()) fail(ErrorKind::ParseError, kind + "." + name + ": list items must be numbers");
        list.push_back(item.get<double>());
      }
      return list;
    }
    default:
      fail(ErrorKind::ParseError, kind + "." + name + ": unsupported parameter value");
  }
}

}  // namespace

json spec_to_json(const ProcessorSpec& spec) {
  if (!Registry::global().contains(spec.kind))
    fail(ErrorKind::UnregisteredProcessor, "unknown processor kind \"" + spec.kind + "\"");
  json node = json::object();
  node["kind"] = spec.kind;
  json params = json::object();
  for (const auto& [name, value] : spec.params) params[name] = param_to_json(spec.kind, name, value);
  node["params"] = std::move(params);
  if (!spec.children.empty()) {
    json children = json::array();
    for (const auto& child : spec.children) children.push_back(spec_to_json(child));
    node["children"] = std::move(children);
  }
  return node;
}

ProcessorSpec spec_from_json(const json& node) {
  if (!node.is_object()) fail(ErrorKind::ParseError, "processor node must be an object");
  for (const auto& [key, _] : node.items())
    if (key != "kind" && key != "params" && key != "children")
      fail(ErrorKind::ParseError, "unexpected key \"" + key + "\" in processor node");
  if (!node.contains("kind") || !node["kind"].is_string())
    fail(ErrorKind::ParseError, "processor node needs a string \"kind\"");
  ProcessorSpec spec;
  spec.kind = node["kind"].get<std::string>();
  if (!Registry::global().contains(spec.kind))
    fail(ErrorKind::UnregisteredProcessor, "unknown processor kind \"" + spec.kind + "\"");
  if (node.contains("params")) {
    if (!node["params"].is_object()) fail(ErrorKind::ParseError, spec.kind + ": \"params\" must be an object");
    for (const auto& [name, value] : node["params"].items())
      spec.params[name] = param_from_json(spec.kind, name, value);
  }
  if (node.contains("children")) {
    if (!node["children"].is_array()) fail(ErrorKind::ParseError, spec.kind + ": \"children\" must be a list");
    for (const auto& child : node["children"]) spec.children.push_back(spec_from_json(child));
  }
  return spec;
}

json pipeline_to_json(const Pipeline& pipeline) {
  json doc = json::object();
  doc["format_version"] = pipeline.format_version;
  doc["root"] = spec_to_json(pipeline.root);
  return doc;
}

Pipeline pipeline_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::ParseError, "pipeline document must be an object");
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
    fail(ErrorKind::ParseError, "missing integer \"format_version\"");
  const auto version = doc["format_version"].get<std::int64_t>();
  if (version != kPipelineFormatVersion)
    fail(ErrorKind::UnknownFormatVersion, "unsupported pipeline format_version " + std::to_string(version));
  if (!doc.contains("root")) fail(ErrorKind::ParseError, "missing \"root\"");
  Pipeline pipeline;
  pipeline.format_version = version;
  pipeline.root = instantiate(spec_from_json(doc["root"]))->spec();
  return pipeline;
}

std::string pipeline_to_string(const Pipeline& pipeline) { return pipeline_to_json(pipeline).dump(2) + "\n"; }

std::size_t save_pipeline(const Pipeline& pipeline, std::ostream& sink) {
  const std::string text = pipeline_to_string(pipeline);
  sink << text;
  if (!sink) fail(ErrorKind::IoError, "failed to write pipeline");
  return text.size();
}

void save_pipeline_file(const Pipeline& pipeline, const std::filesystem::path& path) {
  const std::string text = pipeline_to_string(pipeline);
  std::ofstream out(path, std::ios::binary);
  if (!(out << text)) fail(ErrorKind::IoError, "cannot write " + path.string());
}

Pipeline parse_pipeline(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("pipeline document: ") + e.what());
  }
  return pipeline_from_json(doc);
}

Pipeline load_pipeline(std::istream& source) {
  std::ostringstream buffer;
  buffer << source.rdbuf();
  return parse_pipeline(buffer.str());
}

Pipeline load_pipeline_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::FileNotFound, path.string());
  return load_pipeline(in);
}

ProcessorPtr instantiate(const Pipeline& pipeline) { return instantiate(pipeline.root); }

}  // namespace mirkit::pipeline
