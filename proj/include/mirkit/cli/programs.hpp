#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mirkit/error.hpp"
#include "mirkit/pipeline/pipeline_io.hpp"

namespace mirkit::cli {

enum class Program { onsets, beats, tempo, evaluate };

Program parse_program(std::string_view name);
std::string_view to_string(Program program) noexcept;

/// ".onsets.txt", ".beats.txt", ".bpm.txt" or ".eval.txt".
std::string output_suffix(Program program);

struct IoSettings {
  std::vector<std::string> inputs;
  std::string output = "-";  // single mode; "-" = standard output
  std::string output_dir;    // batch mode
  std::int64_t workers = 0;  // 0 = one per CPU

  friend bool operator==(const IoSettings&, const IoSettings&) = default;
};

struct ProgramConfig {
  Program program = Program::onsets;
  pipeline::Pipeline pipeline;
  IoSettings io;

  friend bool operator==(const ProgramConfig&, const ProgramConfig&) = default;
};

/// Default chain of a program with every parameter explicit. For the
/// evaluate program `option` is the task, otherwise an optional model path.
ProgramConfig default_config(Program program, const std::string& option = "");

/// Pipeline document plus "program" and "io" keys.
std::string config_to_string(const ProgramConfig& config);
void save_config(const ProgramConfig& config, const std::filesystem::path& path);
/// ParseError for malformed documents; ValidationError naming the parameter
/// for out-of-range values.
ProgramConfig parse_config(const std::string& document);
ProgramConfig load_config(const std::filesystem::path& path);

/// Text output of the program's pipeline for one input file.
std::string run_to_text(const pipeline::Processor& processor, const std::filesystem::path& input);

/// 0 ok, 1 usage, 2 I/O, 3 decode, 4 model/pipeline.
int exit_code(ErrorKind kind) noexcept;

int run_single(const ProgramConfig& config, const std::filesystem::path& input, const std::string& output,
               std::ostream& out, std::ostream& err);

/// Directories expand to the files a program reads (audio, or detection files
/// for evaluate), sorted by name.
std::vector<std::filesystem::path> resolve_inputs(Program program, const std::vector<std::string>& inputs);

/// One output file per input, "<stem><suffix>" in output_dir. Failures are
/// reported in input order and processing continues.
int run_batch(const ProgramConfig& config, const std::vector<std::string>& inputs,
              const std::filesystem::path& output_dir, std::size_t workers, std::ostream& out, std::ostream& err);

/// Full command line: `<program> single|batch|save-config ...`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mirkit::cli
