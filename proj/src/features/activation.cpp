#include "mirkit/features/activation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mirkit/error.hpp"

namespace mirkit::features {

namespace {

void validate(const Activation& act) {
  require(std::isfinite(act.fps) && act.fps > 0.0, ErrorKind::InvalidParameter, "activation fps must be > 0");
  for (double v : act.values.data())
    require(std::isfinite(v), ErrorKind::InvalidParameter, "activation values must be finite");
}

template <class T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) fail(ErrorKind::DecodeError, "truncated activation file");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

Activation::Activation(MatrixD v, double frame_rate) : values(std::move(v)), fps(frame_rate) { validate(*this); }

Activation::Activation(std::span<const double> v, double frame_rate)
    : values(v.size(), 1, std::vector<double>(v.begin(), v.end())), fps(frame_rate) {
  validate(*this);
}

std::vector<double> Activation::column(std::size_t c) const {
  require(c < values.cols() || values.rows() == 0, ErrorKind::IndexOutOfRange, "activation column");
  std::vector<double> out(values.rows());
  for (std::size_t t = 0; t < values.rows(); ++t) out[t] = values(t, c);
  return out;
}

std::string encode_activation(const Activation& act) {
  std::string out;
  put(out, act.fps);
  put(out, std::uint32_t(act.num_frames()));
  put(out, std::uint32_t(act.num_columns()));
  for (double v : act.values.data()) put(out, float(v));
  return out;
}

Activation decode_activation(const std::string& bytes) {
  std::size_t pos = 0;
  const auto fps = take<double>(bytes, pos);
  const auto frames = take<std::uint32_t>(bytes, pos);
  const auto cols = take<std::uint32_t>(bytes, pos);
  if (bytes.size() - pos != std::size_t(frames) * cols * 4)
    fail(ErrorKind::DecodeError, "activation payload size does not match its header");
  std::vector<double> values(std::size_t(frames) * cols);
  for (double& v : values) v = take<float>(bytes, pos);
  return Activation(MatrixD(frames, cols, std::move(values)), fps);
}

void save_activation(const Activation& act, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  const auto bytes = encode_activation(act);
  if (!out.write(bytes.data(), std::streamsize(bytes.size())))
    fail(ErrorKind::IoError, "cannot write " + path.string());
}

Activation load_activation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::FileNotFound, path.string());
  return decode_activation(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
}

std::string activation_to_text(const Activation& act) {
  std::string out;
  char buf[64];
  for (std::size_t t = 0; t < act.num_frames(); ++t) {
    for (std::size_t c = 0; c < act.num_columns(); ++c) {
      std::snprintf(buf, sizeof buf, c ? " %.6f" : "%.6f", act.values(t, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mirkit::features
