#include "mirkit/cli/programs.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "mirkit/eval/metrics.hpp"
#include "mirkit/pipeline/json_io.hpp"
#include "mirkit/pipeline/parallel.hpp"
#include "mirkit/pipeline/programs.hpp"
#include "mirkit/pipeline/registry.hpp"

namespace mirkit::cli {

using nlohmann::json;

namespace {

constexpr std::string_view kProgramNames[] = {"onsets", "beats", "tempo", "evaluate"};
constexpr std::string_view kDetectionSuffixes[] = {".onsets.txt", ".beats.txt", ".bpm.txt"};

std::string output_stem(const std::filesystem::path& input) {
  const std::string name = input.filename().string();
  for (auto suffix : kDetectionSuffixes)
    if (name.size() > suffix.size() && name.ends_with(suffix)) return name.substr(0, name.size() - suffix.size());
  return input.stem().string();
}

bool is_audio_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return ext == ".wav" || ext == ".flac" || ext == ".mp3" || ext == ".ogg" || ext == ".aif" || ext == ".aiff" ||
         ext == ".m4a";
}

bool is_detection_file(const std::filesystem::path& p) {
  const std::string name = p.filename().string();
  return std::any_of(std::begin(kDetectionSuffixes), std::end(kDetectionSuffixes),
                     [&](std::string_view s) { return name.ends_with(s); });
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) fail(ErrorKind::IoError, "cannot write " + path.string());
}

}  // namespace

Program parse_program(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kProgramNames); ++i)
    if (kProgramNames[i] == name) return Program(i);
  fail(ErrorKind::ParseError, "unknown program \"" + std::string(name) + "\"");
}

std::string_view to_string(Program program) noexcept { return kProgramNames[std::size_t(program)]; }

std::string output_suffix(Program program) {
  switch (program) {
    case Program::onsets:
      return ".onsets.txt";
    case Program::beats:
      return ".beats.txt";
    case Program::tempo:
      return ".bpm.txt";
    case Program::evaluate:
      return ".eval.txt";
  }
  return ".txt";
}

ProgramConfig default_config(Program program, const std::string& option) {
  ProgramConfig config;
  config.program = program;
  switch (program) {
    case Program::onsets:
      config.pipeline.root = pipeline::onset_chain(option);
      break;
    case Program::beats:
      config.pipeline.root = pipeline::beat_chain(option);
      break;
    case Program::tempo:
      config.pipeline.root = pipeline::tempo_chain(option);
      break;
    case Program::evaluate:
      config.pipeline.root = pipeline::evaluation_chain(option.empty() ? "onsets" : option);
      break;
  }
  return config;
}

std::string config_to_string(const ProgramConfig& config) {
  json doc = pipeline::pipeline_to_json(config.pipeline);
  doc["program"] = std::string(to_string(config.program));
  doc["io"] = {{"inputs", config.io.inputs},
               {"output", config.io.output},
               {"output_dir", config.io.output_dir},
               {"workers", config.io.workers}};
  return doc.dump(2) + "\n";
}

void save_config(const ProgramConfig& config, const std::filesystem::path& path) {
  write_text(config_to_string(config), path);
}

ProgramConfig parse_config(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("config document: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ParseError, "config document must be an object");
  if (!doc.contains("program") || !doc["program"].is_string()) fail(ErrorKind::ParseError, "missing \"program\"");

  ProgramConfig config;
  config.program = parse_program(doc["program"].get<std::string>());
  if (doc.contains("io")) {
    const json& io = doc["io"];
    if (!io.is_object()) fail(ErrorKind::ParseError, "\"io\" must be an object");
    try {
      if (io.contains("inputs")) config.io.inputs = io["inputs"].get<std::vector<std::string>>();
      if (io.contains("output")) config.io.output = io["output"].get<std::string>();
      if (io.contains("output_dir")) config.io.output_dir = io["output_dir"].get<std::string>();
      if (io.contains("workers")) config.io.workers = io["workers"].get<std::int64_t>();
    } catch (const json::exception& e) {
      fail(ErrorKind::ParseError, std::string("config io: ") + e.what());
    }
    for (const auto& [key, _] : io.items())
      if (key != "inputs" && key != "output" && key != "output_dir" && key != "workers")
        fail(ErrorKind::ParseError, "unexpected io key \"" + key + "\"");
    if (config.io.workers < 0) fail(ErrorKind::ValidationError, "io.workers must be >= 0");
  }
  json pipeline_doc = doc;
  pipeline_doc.erase("program");
  pipeline_doc.erase("io");
  try {
    config.pipeline = pipeline::pipeline_from_json(pipeline_doc);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidParameter) fail(ErrorKind::ValidationError, e.what());
    throw;
  }
  return config;
}

ProgramConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::FileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string run_to_text(const pipeline::Processor& processor, const std::filesystem::path& input) {
  return pipeline::to_text(processor.process(pipeline::FilePath{input}));
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoInputs:
      return 1;
    case ErrorKind::FileNotFound:
    case ErrorKind::IoError:
      return 2;
    case ErrorKind::DecodeError:
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::UnsupportedRemix:
      return 3;
    default:
      return 4;
  }
}

int run_single(const ProgramConfig& config, const std::filesystem::path& input, const std::string& output,
               std::ostream& out, std::ostream& err) {
  try {
    const auto processor = pipeline::instantiate(config.pipeline);
    const std::string text = run_to_text(*processor, input);
    if (output.empty() || output == "-")
      out << text << std::flush;
    else
      write_text(text, output);
    return 0;
  } catch (const Error& e) {
    err << "error: " << input.string() << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << input.string() << ": " << e.what() << "\n";
    return 4;
  }
}

std::vector<std::filesystem::path> resolve_inputs(Program program, const std::vector<std::string>& inputs) {
  std::vector<std::filesystem::path> out;
  for (const auto& item : inputs) {
    const std::filesystem::path p(item);
    std::error_code ec;
    if (std::filesystem::is_directory(p, ec)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(p, ec)) {
        if (!entry.is_regular_file()) continue;
        const bool wanted = program == Program::evaluate ? is_detection_file(entry.path()) : is_audio_file(entry.path());
        if (wanted) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  if (out.empty()) fail(ErrorKind::NoInputs, "no input files");
  return out;
}

int run_batch(const ProgramConfig& config, const std::vector<std::string>& inputs,
              const std::filesystem::path& output_dir, std::size_t workers, std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> files;
  pipeline::ProcessorPtr processor;
  try {
    files = resolve_inputs(config.program, inputs);
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create " + output_dir.string() + ": " + ec.message());
    processor = pipeline::instantiate(config.pipeline);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }

  struct Outcome {
    int code = 0;
    std::string message;
    pipeline::Data result;
  };
  std::vector<Outcome> outcomes(files.size());
  pipeline::parallel_for(files.size(), workers, [&](std::size_t i) {
    auto& o = outcomes[i];
    try {
      o.result = processor->process(pipeline::FilePath{files[i]});
      write_text(pipeline::to_text(o.result), output_dir / (output_stem(files[i]) + output_suffix(config.program)));
    } catch (const Error& e) {
      o.code = exit_code(e.kind());
      o.message = e.what();
    } catch (const std::exception& e) {
      o.code = 4;
      o.message = e.what();
    }
  });

  int code = 0;
  std::vector<std::string> columns;
  std::vector<eval::ReportRow> rows;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.code != 0) {
      err << "error: " << files[i].string() << ": " << o.message << "\n";
      if (code == 0) code = o.code;
    } else if (const auto* r = std::get_if<pipeline::EvaluationResult>(&o.result.value)) {
      columns = r->columns;
      rows.push_back({r->name, r->values});
    }
  }
  if (config.program == Program::evaluate && !rows.empty()) out << eval::format_report(columns, rows) << std::flush;
  const auto failed = std::count_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return o.code != 0; });
  if (failed > 0) err << failed << " of " << files.size() << " files failed\n";
  return code;
}

}  // namespace mirkit::cli
