#include "mirkit/audio/wav.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mirkit/error.hpp"

namespace mirkit::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint16_t read_u16(const std::uint8_t* p) { return std::uint16_t(p[0] | p[1] << 8); }

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(char(v & 0xFF));
  out.push_back(char(v >> 8));
}

struct Format {
  std::uint16_t tag = 0;
  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
};

double decode_sample(const std::uint8_t* p, const Format& fmt) {
  if (fmt.tag == kFormatFloat) {
    float f;
    std::uint32_t bits = read_u32(p);
    std::memcpy(&f, &bits, sizeof f);
    return f;
  }
  switch (fmt.bits) {
    case 8:
      return double(int(p[0]) - 128);
    case 16:
      return double(std::int16_t(read_u16(p)));
    case 24: {
      std::int32_t v = std::int32_t(p[0]) | std::int32_t(p[1]) << 8 | std::int32_t(p[2]) << 16;
      if (v & 0x800000) v -= 0x1000000;
      return double(v);
    }
    default:
      return double(std::int32_t(read_u32(p)));
  }
}

}  // namespace

bool looks_like_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char header[12] = {};
  if (!in.read(header, sizeof header)) return false;
  return std::memcmp(header, "RIFF", 4) == 0 && std::memcmp(header + 8, "WAVE", 4) == 0;
}

Signal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::FileNotFound, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

Signal decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    fail(ErrorKind::DecodeError, "missing RIFF/WAVE header");

  Format fmt;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) fail(ErrorKind::DecodeError, "truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      fmt.tag = read_u16(f);
      fmt.channels = read_u16(f + 2);
      fmt.sample_rate = int(read_u32(f + 4));
      fmt.bits = read_u16(f + 14);
      if (fmt.tag == kFormatExtensible) {
        if (size < 26) fail(ErrorKind::DecodeError, "truncated extensible fmt chunk");
        fmt.tag = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Some writers leave the data size unset when streaming; clamp to the file.
      data = bytes.subspan(body, std::min<std::size_t>(size, available));
      have_data = true;
      break;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) fail(ErrorKind::DecodeError, "missing fmt chunk");
  if (!have_data) fail(ErrorKind::DecodeError, "missing data chunk");
  if (fmt.channels < 1 || fmt.sample_rate <= 0) fail(ErrorKind::DecodeError, "invalid fmt fields");
  if (fmt.tag == kFormatPcm) {
    if (fmt.bits != 8 && fmt.bits != 16 && fmt.bits != 24 && fmt.bits != 32)
      fail(ErrorKind::UnsupportedFormat, "unsupported PCM bit depth " + std::to_string(fmt.bits));
  } else if (fmt.tag == kFormatFloat) {
    if (fmt.bits != 32)
      fail(ErrorKind::UnsupportedFormat, "only 32-bit float WAV is supported");
  } else {
    fail(ErrorKind::UnsupportedFormat, "unsupported WAV format tag " + std::to_string(fmt.tag));
  }

  const std::size_t width = std::size_t(fmt.bits / 8);
  const std::size_t frame_bytes = width * fmt.channels;
  const std::size_t frames = data.size() / frame_bytes;
  std::vector<double> samples(frames * fmt.channels);
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = decode_sample(data.data() + i * width, fmt);

  const auto format = fmt.tag == kFormatFloat ? SampleFormat::floating : SampleFormat::integer;
  return Signal(std::move(samples), fmt.sample_rate, fmt.channels, format, fmt.bits);
}

void write_wav(const std::filesystem::path& path, const Signal& signal) {
  const bool is_float = signal.format() == SampleFormat::floating;
  const int bits = is_float ? 32 : signal.bit_depth();
  if (!is_float && bits != 8 && bits != 16 && bits != 24 && bits != 32)
    fail(ErrorKind::UnsupportedFormat, "cannot write " + std::to_string(bits) + "-bit PCM");
  const std::size_t width = std::size_t(bits / 8);
  const auto samples = signal.samples();
  const std::uint32_t data_size = std::uint32_t(samples.size() * width);

  std::vector<char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, is_float ? kFormatFloat : kFormatPcm);
  put_u16(out, std::uint16_t(signal.num_channels()));
  put_u32(out, std::uint32_t(signal.sample_rate()));
  put_u32(out, std::uint32_t(signal.sample_rate() * signal.num_channels() * width));
  put_u16(out, std::uint16_t(signal.num_channels() * width));
  put_u16(out, std::uint16_t(bits));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);

  for (double s : samples) {
    if (is_float) {
      float f = float(s);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      put_u32(out, u);
    } else if (bits == 8) {
      out.push_back(char(std::uint8_t(std::int32_t(s) + 128)));
    } else {
      const auto v = std::uint32_t(std::int32_t(s));
      for (std::size_t b = 0; b < width; ++b) out.push_back(char((v >> (8 * b)) & 0xFF));
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file.write(out.data(), std::streamsize(out.size())))
    fail(ErrorKind::IoError, "cannot write " + path.string());
}

}  // namespace mirkit::audio
