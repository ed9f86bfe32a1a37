#include "mirkit/audio/framed_signal.hpp"

#include <cmath>

#include "mirkit/error.hpp"

namespace mirkit::audio {

Hop Hop::from_real(double hop) {
  require(std::isfinite(hop) && hop > 0.0, ErrorKind::InvalidParameter, "hop size must be positive");
  constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 20;

  // Continued-fraction convergents; stop once the fraction reproduces `hop`
  // to double precision or the denominator would exceed the bound.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = hop;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const auto ai = std::int64_t(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > kMaxDenominator) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (std::abs(double(p1) / double(q1) - hop) <= 1e-14 * hop) break;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return Hop{p1, q1};
}

FramedSignal::FramedSignal(std::shared_ptr<const Signal> signal, std::size_t frame_size,
                           double hop_size)
    : signal_(std::move(signal)), frame_size_(frame_size), hop_(Hop::from_real(hop_size)) {
  require(frame_size_ >= 1, ErrorKind::InvalidParameter, "frame size must be >= 1");
  require(signal_ != nullptr, ErrorKind::InvalidParameter, "null signal");
  // ceil(len / hop) in exact integer arithmetic
  const auto len = static_cast<__int128>(signal_->length());
  num_frames_ = static_cast<std::size_t>((len * hop_.denominator + hop_.numerator - 1) / hop_.numerator);
}

double FramedSignal::fps() const noexcept {
  return double(signal_->sample_rate()) * double(hop_.denominator) / double(hop_.numerator);
}

std::int64_t FramedSignal::reference(std::size_t index) const noexcept {
  // floor(k * num / den + 1/2) == floor((2 k num + den) / (2 den))
  const auto k = static_cast<__int128>(index);
  return static_cast<std::int64_t>((2 * k * hop_.numerator + hop_.denominator) /
                                   (2 * static_cast<__int128>(hop_.denominator)));
}

std::vector<double> FramedSignal::frame(std::size_t index) const {
  if (index >= num_frames_)
    fail(ErrorKind::IndexOutOfRange,
         "frame " + std::to_string(index) + " of " + std::to_string(num_frames_));
  const int channels = signal_->num_channels();
  const auto length = static_cast<std::int64_t>(signal_->length());
  const std::int64_t start = reference(index) - static_cast<std::int64_t>(frame_size_ / 2);

  std::vector<double> out(frame_size_ * channels, 0.0);
  const std::int64_t first = std::max<std::int64_t>(start, 0);
  const std::int64_t last = std::min<std::int64_t>(start + std::int64_t(frame_size_), length);
  const auto samples = signal_->samples();
  for (std::int64_t pos = first; pos < last; ++pos) {
    for (int c = 0; c < channels; ++c)
      out[std::size_t(pos - start) * channels + c] = samples[std::size_t(pos) * channels + c];
  }
  return out;
}

FramedSignal frame_signal(const Signal& signal, std::size_t frame_size, double hop_size) {
  return FramedSignal(std::make_shared<const Signal>(signal), frame_size, hop_size);
}

}  // namespace mirkit::audio
