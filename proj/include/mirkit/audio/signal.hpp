#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mirkit::audio {

enum class SampleFormat { integer, floating };

/// Decoded audio. Samples are stored interleaved (frame-major) as doubles so
/// integer PCM keeps its exact values; normalization to [-1, 1) happens at the
/// STFT, driven by `bit_depth()`.
class Signal {
 public:
  Signal() = default;
  Signal(std::vector<double> samples, int sample_rate, int num_channels, SampleFormat format,
         int bit_depth);

  /// Mono float signal, mostly for tests and synthetic input.
  static Signal mono(std::vector<double> samples, int sample_rate);

  std::size_t length() const noexcept { return num_channels_ ? samples_.size() / num_channels_ : 0; }
  int sample_rate() const noexcept { return sample_rate_; }
  int num_channels() const noexcept { return num_channels_; }
  SampleFormat format() const noexcept { return format_; }
  int bit_depth() const noexcept { return bit_depth_; }
  double duration() const noexcept { return sample_rate_ ? double(length()) / sample_rate_ : 0.0; }

  double at(std::size_t frame, int channel) const {
    return samples_[frame * num_channels_ + channel];
  }
  std::span<const double> samples() const noexcept { return samples_; }

  /// Factor mapping stored values into [-1, 1): 2^(bit_depth-1) for integer PCM, 1 for float.
  double full_scale() const noexcept;

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 0;
  int num_channels_ = 0;
  SampleFormat format_ = SampleFormat::floating;
  int bit_depth_ = 32;
};

/// Downmix to mono (channel mean, truncated toward zero for integer PCM) or
/// identity when the channel count already matches.
Signal remix(const Signal& signal, int target_channels);

struct LoadOptions {
  std::optional<int> sample_rate;
  std::optional<int> num_channels;
  /// Shell command template used for non-WAV input or resampling. Placeholders:
  /// {input} {output} {sample_rate} {channels}. The command must write a WAV
  /// file to {output}.
  std::string decoder_cmd;
};

Signal load_signal(const std::filesystem::path& path, const LoadOptions& options = {});

}  // namespace mirkit::audio
