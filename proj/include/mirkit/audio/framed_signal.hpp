#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "mirkit/audio/signal.hpp"

namespace mirkit::audio {

/// A hop size held as an exact fraction so frame positions never drift,
/// whatever the number of frames.
struct Hop {
  std::int64_t numerator = 1;
  std::int64_t denominator = 1;

  /// Closest fraction with denominator <= 2^20 (exact for decimal hops such as 4.41).
  static Hop from_real(double hop);

  double value() const noexcept { return double(numerator) / double(denominator); }
  friend bool operator==(const Hop&, const Hop&) = default;
};

/// Lazy view of a signal as overlapping, zero-padded frames. Frame k is
/// centered on sample floor(k * hop + 0.5), independently of frame_size, so
/// views with different frame sizes stay aligned.
class FramedSignal {
 public:
  FramedSignal(std::shared_ptr<const Signal> signal, std::size_t frame_size, double hop_size);

  const Signal& signal() const noexcept { return *signal_; }
  std::size_t frame_size() const noexcept { return frame_size_; }
  double hop_size() const noexcept { return hop_.value(); }
  Hop hop() const noexcept { return hop_; }
  std::size_t num_frames() const noexcept { return num_frames_; }
  double fps() const noexcept;

  /// Reference (center) sample of frame k.
  std::int64_t reference(std::size_t index) const noexcept;

  /// frame_size * num_channels interleaved samples, zeros outside the signal.
  std::vector<double> frame(std::size_t index) const;

 private:
  std::shared_ptr<const Signal> signal_;
  std::size_t frame_size_;
  Hop hop_;
  std::size_t num_frames_;
};

FramedSignal frame_signal(const Signal& signal, std::size_t frame_size, double hop_size);

}  // namespace mirkit::audio
