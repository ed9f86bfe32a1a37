#include <cstdio>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "mirkit/cli/programs.hpp"
#include "mirkit/pipeline/programs.hpp"
#include "mirkit/pipeline/registry.hpp"

namespace mirkit::cli {

namespace {

using pipeline::ParamValue;
using pipeline::ProcessorSpec;

/// A command-line flag bound to exactly one processor parameter.
struct Flag {
  const char* name;
  const char* kind;
  const char* param;
  const char* help;
};

constexpr Flag kAnalysisFlags[] = {
    {"sample-rate", "load_audio", "sample_rate", "Resample input to this rate (0 keeps the file rate)"},
    {"decoder", "load_audio", "decoder_cmd", "Decoder command for non-WAV input ({input} {output} {sample_rate} {channels})"},
    {"fps", "frame", "fps", "Frames per second"},
    {"frame-size", "frame", "frame_size", "Frame size in samples"},
    {"window", "stft", "window", "Window function: hann, hamming, rectangular"},
    {"fft-size", "stft", "fft_size", "FFT size (0 = next power of two >= frame size)"},
    {"filterbank", "filterbank", "kind", "Filterbank: mel, bark, log"},
    {"num-bands", "filterbank", "num_bands", "Number of mel bands"},
    {"bands-per-octave", "filterbank", "bands_per_octave", "Bands per octave of the log filterbank"},
    {"fmin", "filterbank", "fmin", "Lowest filterbank frequency [Hz]"},
    {"fmax", "filterbank", "fmax", "Highest filterbank frequency [Hz]"},
    {"log-mul", "log", "mul", "Multiplier inside log(mul * x + add)"},
    {"log-add", "log", "add", "Offset inside log(mul * x + add)"},
    {"max-filter-radius", "spectral_flux", "max_filter_radius", "Spectral flux maximum filter radius [bins]"},
    {"model", "neural_network", "model", "Network model file; replaces the spectral flux activation"},
};

constexpr Flag kOnsetFlags[] = {
    {"threshold", "pick_peaks", "threshold", "Peak picking threshold"},
    {"pre-max", "pick_peaks", "pre_max", "Look-back window for the local maximum [s]"},
    {"post-max", "pick_peaks", "post_max", "Look-ahead window for the local maximum [s]"},
    {"combine", "pick_peaks", "combine", "Minimum gap between reported onsets [s]"},
    {"smooth", "pick_peaks", "smooth", "Moving-average smoothing width [s]"},
};

constexpr Flag kBeatFlags[] = {
    {"min-bpm", "beat_tracker", "min_bpm", "Slowest tempo [bpm]"},
    {"max-bpm", "beat_tracker", "max_bpm", "Fastest tempo [bpm]"},
    {"transition-lambda", "beat_tracker", "transition_lambda", "Tempo change penalty"},
    {"observation-lambda", "beat_tracker", "observation_lambda", "Beat window is 1/lambda of the beat interval"},
    {"correct", "beat_tracker", "correct", "Snap beats to the activation maximum in their beat window"},
};

constexpr Flag kTempoFlags[] = {
    {"min-bpm", "comb_tempo", "min_bpm", "Slowest tempo [bpm]"},
    {"max-bpm", "comb_tempo", "max_bpm", "Fastest tempo [bpm]"},
    {"alpha", "comb_tempo", "alpha", "Comb filter feedback gain"},
    {"max-tempi", "detect_tempo", "max_tempi", "Number of tempi to report"},
};

constexpr Flag kEvaluateFlags[] = {
    {"task", "evaluate", "task", "What the detections are: onsets, beats, tempo"},
    {"annotations", "evaluate", "annotations", "Annotation directory (empty = next to the detections)"},
    {"window", "evaluate", "window", "Matching window [s] (onsets, beats)"},
    {"sigma", "evaluate", "sigma", "Cemgil Gaussian width [s] (beats)"},
    {"tolerance", "evaluate", "tolerance", "Relative tempo tolerance (tempo)"},
};

std::vector<Flag> flags_for(Program program) {
  std::vector<Flag> out;
  auto add = [&](const auto& table) { out.insert(out.end(), std::begin(table), std::end(table)); };
  switch (program) {
    case Program::onsets:
      add(kAnalysisFlags);
      add(kOnsetFlags);
      break;
    case Program::beats:
      add(kAnalysisFlags);
      add(kBeatFlags);
      break;
    case Program::tempo:
      add(kAnalysisFlags);
      add(kTempoFlags);
      break;
    case Program::evaluate:
      add(kEvaluateFlags);
      break;
  }
  return out;
}

ProcessorSpec* find_node(ProcessorSpec& node, const std::string& kind) {
  if (node.kind == kind) return &node;
  for (auto& child : node.children)
    if (auto* found = find_node(child, kind)) return found;
  return nullptr;
}

const ParamValue* find_param(const ProcessorSpec& node, const std::string& kind, const std::string& param) {
  if (node.kind == kind) {
    const auto it = node.params.find(param);
    return it == node.params.end() ? nullptr : &it->second;
  }
  for (const auto& child : node.children)
    if (const auto* found = find_param(child, kind, param)) return found;
  return nullptr;
}

std::string param_text(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%g", v);
          return buf;
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v.empty() ? "\"\"" : v;
        } else {
          return "list";
        }
      },
      value);
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ParamValue convert(const std::string& flag, const std::string& text, const ParamValue* like) {
  try {
    std::size_t used = 0;
    if (!like || std::holds_alternative<std::string>(*like)) return text;
    if (std::holds_alternative<bool>(*like)) {
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      throw std::invalid_argument(text);
    }
    if (std::holds_alternative<std::int64_t>(*like)) {
      const auto v = std::int64_t(std::stoll(text, &used));
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw UsageError("--" + flag + ": invalid value \"" + text + "\"");
}

/// Applies flag values to the pipeline tree and re-normalizes it.
void apply_flags(ProgramConfig& config, const std::vector<Flag>& flags,
                 const std::map<std::string, std::string>& given) {
  auto& root = config.pipeline.root;
  if (const auto it = given.find("model"); it != given.end()) {
    auto* flux = find_node(root, "spectral_flux");
    auto* nn = find_node(root, "neural_network");
    if (flux) *flux = ProcessorSpec{"neural_network", {{"model", it->second}}, {}};
    else if (nn) nn->params["model"] = it->second;
    else throw UsageError("--model does not apply to this pipeline");
  }
  if (const auto it = given.find("task"); it != given.end()) {
    auto* node = find_node(root, "evaluate");
    if (!node) throw UsageError("--task does not apply to this pipeline");
    node->params.erase("window");
    node->params.erase("sigma");
    node->params.erase("tolerance");
    node->params["task"] = it->second;
  }
  for (const auto& flag : flags) {
    const std::string name = flag.name;
    const auto it = given.find(name);
    if (it == given.end() || name == "model" || name == "task") continue;
    auto* node = find_node(root, flag.kind);
    if (!node) throw UsageError("--" + name + " does not apply to this pipeline");
    const auto current = node->params.find(flag.param);
    node->params[flag.param] =
        convert(name, it->second, current == node->params.end() ? nullptr : &current->second);
  }
  try {
    root = pipeline::instantiate(root)->spec();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidParameter) throw UsageError(e.what());
    throw;
  }
}

struct ProgramArgs {
  Program program = Program::onsets;
  std::vector<Flag> flags;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  CLI::App* app = nullptr;
  CLI::App* single = nullptr;
  CLI::App* batch = nullptr;
  CLI::App* save = nullptr;
  std::string single_input;
  std::string output;
  std::vector<std::string> batch_inputs;
  std::string output_dir;
  std::int64_t workers = 0;
  std::string save_path;
};

const char* describe(Program program) {
  switch (program) {
    case Program::onsets:
      return "Detect onsets; one time in seconds per line";
    case Program::beats:
      return "Track beats; one time in seconds per line";
    case Program::tempo:
      return "Estimate tempo; lines of \"<bpm> <strength>\", strongest first";
    case Program::evaluate:
      return "Score detection files against <stem>.<task>.ann annotations";
  }
  return "";
}

void setup(CLI::App& root, ProgramArgs& a) {
  a.app = root.add_subcommand(std::string(to_string(a.program)), describe(a.program));
  a.app->fallthrough();
  a.app->require_subcommand(1);
  a.app->add_option("--config", a.config_path, "Load the pipeline and io settings from a saved config");
  const auto defaults = default_config(a.program).pipeline.root;
  std::map<std::string, ProcessorSpec> task_defaults;
  if (a.program == Program::evaluate)
    for (const char* task : {"beats", "tempo"}) task_defaults[task] = default_config(a.program, task).pipeline.root;
  for (const auto& flag : a.flags) {
    const auto* value = find_param(defaults, flag.kind, flag.param);
    // task-specific evaluate params
    for (const char* task : {"beats", "tempo"}) {
      if (value || a.program != Program::evaluate) break;
      value = find_param(task_defaults.at(task), flag.kind, flag.param);
    }
    auto* opt = a.app->add_option("--" + std::string(flag.name), a.values[flag.name],
                                  std::string(flag.help) + "  [" + flag.kind + "." + flag.param + "]");
    opt->default_str(value ? param_text(*value) : "\"\"");
    a.options[flag.name] = opt;
  }

  a.single = a.app->add_subcommand("single", "Process one file");
  a.single->add_option("input", a.single_input, "Input file");
  a.single->add_option("-o,--output", a.output, "Output file (default: standard output)");

  a.batch = a.app->add_subcommand("batch", "Process many files, one output file per input");
  a.batch->add_option("inputs", a.batch_inputs, "Input files or directories");
  a.batch->add_option("-d,--output-dir", a.output_dir, "Output directory");
  a.batch->add_option("-j,--workers", a.workers, "Parallel workers (0 = one per CPU)")->check(CLI::NonNegativeNumber);

  a.save = a.app->add_subcommand("save-config", "Write the effective configuration and exit");
  a.save->add_option("path", a.save_path, "Config file to write")->required();
}

int execute(ProgramArgs& a, std::ostream& out, std::ostream& err) {
  ProgramConfig config;
  try {
    config = a.config_path.empty() ? default_config(a.program) : load_config(a.config_path);
  } catch (const Error& e) {
    err << "error: " << a.config_path << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }
  if (config.program != a.program) {
    err << "error: " << a.config_path << " is a " << to_string(config.program) << " config\n";
    return 1;
  }

  std::map<std::string, std::string> given;
  for (const auto& [name, opt] : a.options)
    if (opt->count() > 0) given[name] = a.values[name];
  try {
    apply_flags(config, a.flags, given);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }

  if (a.save->parsed()) {
    try {
      save_config(config, a.save_path);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_code(e.kind());
    }
    return 0;
  }

  if (a.single->parsed()) {
    std::string input = a.single_input;
    if (input.empty() && !config.io.inputs.empty()) input = config.io.inputs.front();
    if (input.empty()) {
      err << "error: no input file\n";
      return 1;
    }
    const std::string output = a.single->count("--output") > 0 ? a.output : config.io.output;
    return run_single(config, input, output, out, err);
  }

  const auto inputs = a.batch_inputs.empty() ? config.io.inputs : a.batch_inputs;
  const std::string dir = a.batch->count("--output-dir") > 0 ? a.output_dir : config.io.output_dir;
  const auto workers = a.batch->count("--workers") > 0 ? a.workers : config.io.workers;
  if (dir.empty()) {
    err << "error: batch mode needs an output directory (-d)\n";
    return 1;
  }
  if (inputs.empty()) {
    err << "error: no input files\n";
    return 1;
  }
  return run_batch(config, inputs, dir, std::size_t(workers), out, err);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Onset, beat and tempo detection and evaluation", "mirkit");
  app.require_subcommand(1);
  std::vector<ProgramArgs> programs;
  programs.reserve(4);
  for (Program p : {Program::onsets, Program::beats, Program::tempo, Program::evaluate}) {
    auto& a = programs.emplace_back();
    a.program = p;
    a.flags = flags_for(p);
    setup(app, a);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  for (auto& a : programs)
    if (a.app->parsed()) return execute(a, out, err);
  return 1;
}

}  // namespace mirkit::cli
