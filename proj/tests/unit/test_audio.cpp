#include <numeric>

#include "doctest.h"
#include "mirkit/audio/framed_signal.hpp"
#include "mirkit/audio/signal.hpp"
#include "mirkit/audio/wav.hpp"
#include "mirkit/error.hpp"
#include "test_support.hpp"

using namespace mirkit;
using namespace mirkit::audio;
using mirkit::testing::TempDir;

#define CHECK_ERROR_KIND(expr, expected)                 \
  do {                                                   \
    try {                                                \
      (void)(expr);                                      \
      FAIL("expected " << to_string(expected));          \
    } catch (const Error& e) {                           \
      CHECK(e.kind() == (expected));                     \
    }                                                    \
  } while (0)

namespace {

Signal int_signal(std::vector<double> samples, int channels, int sr = 44100) {
  return Signal(std::move(samples), sr, channels, SampleFormat::integer, 16);
}

std::vector<std::int64_t> references(const FramedSignal& f) {
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < f.num_frames(); ++k) out.push_back(f.reference(k));
  return out;
}

}  // namespace

TEST_CASE("16-bit mono WAV loads verbatim") {
  TempDir dir;
  const std::vector<int> samples = {0, 1, -1, 32767, -32768, 1234};
  mirkit::testing::write_file(dir / "a.wav", mirkit::testing::wav_bytes(1, 1, 44100, 16, mirkit::testing::int16_payload(samples)));
  const Signal s = load_signal(dir / "a.wav");
  CHECK(s.sample_rate() == 44100);
  CHECK(s.num_channels() == 1);
  CHECK(s.format() == SampleFormat::integer);
  CHECK(s.bit_depth() == 16);
  REQUIRE(s.length() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(s.at(i, 0) == samples[i]);
}

TEST_CASE("stereo WAV downmixed on load") {
  TempDir dir;
  mirkit::testing::write_file(dir / "s.wav", mirkit::testing::wav_bytes(1, 2, 44100, 16, mirkit::testing::int16_payload({1000, 3000})));
  LoadOptions options;
  options.num_channels = 1;
  const Signal s = load_signal(dir / "s.wav", options);
  CHECK(s.num_channels() == 1);
  REQUIRE(s.length() == 1);
  CHECK(s.at(0, 0) == 2000.0);
}

TEST_CASE("load errors") {
  TempDir dir;
  CHECK_ERROR_KIND(load_signal(dir / "missing.wav"), ErrorKind::FileNotFound);
  mirkit::testing::write_file(dir / "junk.wav", "this is not audio at all");
  CHECK_ERROR_KIND(load_signal(dir / "junk.wav"), ErrorKind::DecodeError);
  mirkit::testing::write_file(dir / "x.flac", "fLaC....");
  CHECK_ERROR_KIND(load_signal(dir / "x.flac"), ErrorKind::UnsupportedFormat);
  mirkit::testing::write_file(dir / "ok.wav", mirkit::testing::wav_bytes(1, 1, 22050, 16, mirkit::testing::int16_payload({1, 2})));
  LoadOptions resample;
  resample.sample_rate = 44100;
  CHECK_ERROR_KIND(load_signal(dir / "ok.wav", resample), ErrorKind::UnsupportedFormat);
  // truncated data chunk
  std::string bytes = mirkit::testing::wav_bytes(1, 1, 44100, 16, mirkit::testing::int16_payload({1, 2, 3, 4}));
  mirkit::testing::write_file(dir / "cut.wav", bytes.substr(0, 30));
  CHECK_ERROR_KIND(load_signal(dir / "cut.wav"), ErrorKind::DecodeError);
}

TEST_CASE("external decoder command produces the WAV") {
  TempDir dir;
  // a non-WAV container: four junk bytes in front of a WAV image
  mirkit::testing::write_file(dir / "src.bin",
                              "JUNK" + mirkit::testing::wav_bytes(1, 1, 8000, 16, mirkit::testing::int16_payload({5, 6, 7})));
  LoadOptions options;
  options.decoder_cmd = "tail -c +5 {input} > {output}";
  const Signal s = load_signal(dir / "src.bin", options);
  REQUIRE(s.length() == 3);
  CHECK(s.at(2, 0) == 7.0);
  options.decoder_cmd = "false";
  CHECK_ERROR_KIND(load_signal(dir / "src.bin", options), ErrorKind::DecodeError);
}

TEST_CASE("WAV sample formats") {
  TempDir dir;
  SUBCASE("8-bit unsigned is centered") {
    mirkit::testing::write_file(dir / "u8.wav", mirkit::testing::wav_bytes(1, 1, 8000, 8, std::string{char(128), char(255), char(0)}));
    const Signal s = read_wav(dir / "u8.wav");
    CHECK(s.at(0, 0) == 0.0);
    CHECK(s.at(1, 0) == 127.0);
    CHECK(s.at(2, 0) == -128.0);
    CHECK(s.full_scale() == 128.0);
  }
  SUBCASE("24-bit keeps sign") {
    const std::string payload{char(0xff), char(0xff), char(0xff), char(0x00), char(0x00), char(0x80)};
    mirkit::testing::write_file(dir / "i24.wav", mirkit::testing::wav_bytes(1, 1, 8000, 24, payload));
    const Signal s = read_wav(dir / "i24.wav");
    CHECK(s.at(0, 0) == -1.0);
    CHECK(s.at(1, 0) == -8388608.0);
    CHECK(s.full_scale() == 8388608.0);
  }
  SUBCASE("float32") {
    const float values[2] = {0.25f, -1.0f};
    std::string payload(reinterpret_cast<const char*>(values), sizeof values);
    mirkit::testing::write_file(dir / "f.wav", mirkit::testing::wav_bytes(3, 1, 8000, 32, payload));
    const Signal s = read_wav(dir / "f.wav");
    CHECK(s.format() == SampleFormat::floating);
    CHECK(s.at(0, 0) == 0.25);
    CHECK(s.at(1, 0) == -1.0);
  }
  SUBCASE("writer round trip") {
    const Signal original = int_signal({1, -2, 3, -4, 32767, -32768}, 2, 16000);
    write_wav(dir / "rt.wav", original);
    CHECK(read_wav(dir / "rt.wav") == original);
  }
}

TEST_CASE("remix") {
  const Signal mono = int_signal({1, 2, 3}, 1);
  CHECK(remix(mono, 1) == mono);
  const Signal stereo = int_signal({-2, 4}, 2);
  CHECK(remix(stereo, 1).at(0, 0) == 1.0);
  CHECK_ERROR_KIND(remix(stereo, 3), ErrorKind::UnsupportedRemix);
  SUBCASE("integer mean truncates toward zero") {
    const Signal odd = int_signal({-3, 0, 3, 0}, 2);
    const Signal m = remix(odd, 1);
    CHECK(m.at(0, 0) == -1.0);
    CHECK(m.at(1, 0) == 1.0);
  }
  SUBCASE("float mean is exact") {
    const Signal f({-3, 0}, 44100, 2, SampleFormat::floating, 32);
    CHECK(remix(f, 1).at(0, 0) == -1.5);
  }
}

TEST_CASE("framing examples") {
  const Signal ten = Signal::mono(std::vector<double>(10, 1.0), 100);
  const auto f = frame_signal(ten, 4, 2.5);
  CHECK(f.num_frames() == 4);
  CHECK(references(f) == std::vector<std::int64_t>{0, 3, 5, 8});

  CHECK(frame_signal(Signal::mono({}, 100), 4, 2.5).num_frames() == 0);

  const Signal six = Signal::mono({1, 2, 3, 4, 5, 6}, 100);
  const auto g = frame_signal(six, 4, 2.0);
  CHECK(g.frame(0) == std::vector<double>{0, 0, 1, 2});
  CHECK(g.frame(1) == std::vector<double>{1, 2, 3, 4});
  CHECK_ERROR_KIND(g.frame(g.num_frames()), ErrorKind::IndexOutOfRange);
}

TEST_CASE("hop 2.5 and hop 5 views share reference positions") {
  const Signal s = Signal::mono(std::vector<double>(1000, 0.5), 100);
  const auto fine = frame_signal(s, 4, 2.5);
  const auto coarse = frame_signal(s, 8, 5.0);
  for (std::size_t k = 0; k < coarse.num_frames(); ++k) {
    REQUIRE(2 * k < fine.num_frames());
    CHECK(fine.reference(2 * k) == coarse.reference(k));
  }
}

TEST_CASE("exact hop fractions") {
  CHECK(Hop::from_real(4.41) == Hop{441, 100});
  CHECK(Hop::from_real(2.5) == Hop{5, 2});
  CHECK(Hop::from_real(441.0) == Hop{441, 1});
  const Signal s = Signal::mono(std::vector<double>(44100, 0.0), 44100);
  const auto f = frame_signal(s, 2048, 441.0);
  CHECK(f.fps() * f.hop_size() == 44100.0);
  CHECK(f.fps() == 100.0);
}

TEST_CASE("property: num_frames = ceil(len / hop) and frame alignment") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto len = std::size_t(rng() % 5000);
    const double hop = std::round(mirkit::testing::uniform(rng, 0.5, 600.0) * 100.0) / 100.0;
    const auto frame_size = std::size_t(1 + rng() % 64);
    const Signal s = Signal::mono(std::vector<double>(len, 1.0), 1000);
    const auto f = frame_signal(s, frame_size, hop);
    CHECK(f.num_frames() == std::size_t(std::ceil(double(len) / hop - 1e-12)));
    // references independent of frame size
    const auto other = frame_signal(s, frame_size + 7, hop);
    CHECK(references(f) == references(other));
    for (std::size_t k = 0; k < f.num_frames(); ++k)
      CHECK(f.reference(k) == std::int64_t(std::floor(double(k) * hop + 0.5 + 1e-9)));
  }
}

TEST_CASE("property: frames are zero-padded windows of the signal") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto len = std::size_t(1 + rng() % 300);
    auto samples = mirkit::testing::random_vector(rng, len);
    const Signal s = Signal::mono(samples, 1000);
    const auto frame_size = std::size_t(1 + rng() % 40);
    const auto f = frame_signal(s, frame_size, mirkit::testing::uniform(rng, 1.0, 30.0));
    for (std::size_t k = 0; k < f.num_frames(); ++k) {
      const auto frame = f.frame(k);
      REQUIRE(frame.size() == frame_size);
      const std::int64_t start = f.reference(k) - std::int64_t(frame_size / 2);
      for (std::size_t i = 0; i < frame_size; ++i) {
        const std::int64_t n = start + std::int64_t(i);
        const double expected = n >= 0 && n < std::int64_t(len) ? samples[std::size_t(n)] : 0.0;
        CHECK(frame[i] == expected);
      }
    }
  }
}

TEST_CASE("hop = frame size, left-aligned concatenation reproduces the signal") {
  std::mt19937_64 rng(3);
  const auto samples = mirkit::testing::random_vector(rng, 100);
  const Signal s = Signal::mono(samples, 1000);
  const auto f = frame_signal(s, 10, 10.0);
  // frame k covers [10k - 5, 10k + 5); interior samples come from consecutive frames
  std::vector<double> joined;
  for (std::size_t k = 0; k < f.num_frames(); ++k) {
    const auto frame = f.frame(k);
    joined.insert(joined.end(), frame.begin(), frame.end());
  }
  REQUIRE(joined.size() == 100);
  for (std::size_t n = 0; n + 5 < 100; ++n) CHECK(joined[n + 5] == samples[n]);
}
