#include "mirkit/audio/signal.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>

#include "mirkit/audio/wav.hpp"
#include "mirkit/error.hpp"

namespace mirkit::audio {

Signal::Signal(std::vector<double> samples, int sample_rate, int num_channels,
               SampleFormat format, int bit_depth)
    : samples_(std::move(samples)),
      sample_rate_(sample_rate),
      num_channels_(num_channels),
      format_(format),
      bit_depth_(bit_depth) {
  require(sample_rate_ > 0, ErrorKind::InvalidParameter, "sample rate must be positive");
  require(num_channels_ >= 1, ErrorKind::InvalidParameter, "channel count must be >= 1");
  require(samples_.size() % num_channels_ == 0, ErrorKind::DimensionMismatch,
          "sample count is not a multiple of the channel count");
  require(bit_depth_ >= 1 && bit_depth_ <= 64, ErrorKind::InvalidParameter, "bad bit depth");
}

Signal Signal::mono(std::vector<double> samples, int sample_rate) {
  return Signal(std::move(samples), sample_rate, 1, SampleFormat::floating, 32);
}

double Signal::full_scale() const noexcept {
  if (format_ == SampleFormat::floating) return 1.0;
  return std::ldexp(1.0, bit_depth_ - 1);
}

Signal remix(const Signal& signal, int target_channels) {
  const int channels = signal.num_channels();
  if (target_channels == channels) return signal;
  if (target_channels != 1) {
    fail(ErrorKind::UnsupportedRemix, "cannot remix " + std::to_string(channels) + " channels to " +
                                          std::to_string(target_channels));
  }
  const bool integer = signal.format() == SampleFormat::integer;
  std::vector<double> mono(signal.length());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    double sum = 0.0;
    for (int c = 0; c < channels; ++c) sum += signal.at(i, c);
    const double mean = sum / channels;
    mono[i] = integer ? std::trunc(mean) : mean;
  }
  return Signal(std::move(mono), signal.sample_rate(), 1, signal.format(), signal.bit_depth());
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

std::filesystem::path unique_temp_wav() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  auto name = "mirkit-decode-" + std::to_string(rd()) + "-" + std::to_string(counter++) + ".wav";
  return std::filesystem::temp_directory_path() / name;
}

Signal run_decoder(const std::filesystem::path& path, const LoadOptions& options, int fallback_rate,
                   int fallback_channels) {
  const auto out = unique_temp_wav();
  std::string cmd = options.decoder_cmd;
  replace_all(cmd, "{input}", shell_quote(path.string()));
  replace_all(cmd, "{output}", shell_quote(out.string()));
  replace_all(cmd, "{sample_rate}", std::to_string(options.sample_rate.value_or(fallback_rate)));
  replace_all(cmd, "{channels}", std::to_string(options.num_channels.value_or(fallback_channels)));
  const int status = std::system(cmd.c_str());
  if (status != 0 || !std::filesystem::exists(out)) {
    std::error_code ec;
    std::filesystem::remove(out, ec);
    fail(ErrorKind::DecodeError, "decoder command failed for " + path.string());
  }
  try {
    Signal decoded = read_wav(out);
    std::filesystem::remove(out);
    return decoded;
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(out, ec);
    throw;
  }
}

}  // namespace

Signal load_signal(const std::filesystem::path& path, const LoadOptions& options) {
  if (!std::filesystem::is_regular_file(path)) fail(ErrorKind::FileNotFound, path.string());
  if (options.sample_rate && *options.sample_rate <= 0)
    fail(ErrorKind::InvalidParameter, "target sample rate must be positive");

  Signal signal;
  if (looks_like_wav(path)) {
    signal = read_wav(path);
    if (options.sample_rate && *options.sample_rate != signal.sample_rate()) {
      if (options.decoder_cmd.empty())
        fail(ErrorKind::UnsupportedFormat,
             "resampling " + path.string() + " requires a configured decoder_cmd");
      signal = run_decoder(path, options, signal.sample_rate(), signal.num_channels());
    }
  } else {
    if (path.extension() == ".wav" || path.extension() == ".WAV")
      fail(ErrorKind::DecodeError, "not a RIFF/WAVE file: " + path.string());
    if (options.decoder_cmd.empty())
      fail(ErrorKind::UnsupportedFormat, "no decoder configured for " + path.string());
    signal = run_decoder(path, options, options.sample_rate.value_or(44100),
                         options.num_channels.value_or(1));
  }

  if (options.sample_rate && *options.sample_rate != signal.sample_rate())
    fail(ErrorKind::DecodeError, "decoder produced the wrong sample rate for " + path.string());
  if (options.num_channels) signal = remix(signal, *options.num_channels);
  return signal;
}

}  // namespace mirkit::audio
