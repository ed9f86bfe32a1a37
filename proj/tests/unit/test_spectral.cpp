#include <complex>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "mirkit/audio/framed_signal.hpp"
#include "mirkit/error.hpp"
#include "mirkit/spectral/fft.hpp"
#include "mirkit/spectral/filterbank.hpp"
#include "mirkit/spectral/spectrogram.hpp"
#include "mirkit/spectral/stft.hpp"
#include "test_support.hpp"

using namespace mirkit;
using namespace mirkit::spectral;
using audio::Signal;
using cd = std::complex<double>;

#define CHECK_ERROR_KIND(expr, expected)        \
  do {                                          \
    try {                                       \
      (void)(expr);                             \
      FAIL("expected " << to_string(expected)); \
    } catch (const Error& e) {                  \
      CHECK(e.kind() == (expected));            \
    }                                           \
  } while (0)

namespace {

std::vector<cd> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * i % n) / double(n));
    out[k] = acc;
  }
  return out;
}

std::vector<double> bin_frequencies(std::size_t fft_size, double sample_rate) {
  std::vector<double> f(fft_size / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = double(k) * sample_rate / double(fft_size);
  return f;
}

Spectrogram flat_spectrogram(std::size_t frames, const std::vector<double>& freqs, double value) {
  Spectrogram s;
  s.values = MatrixD(frames, freqs.size(), value);
  s.frame_rate = 100.0;
  s.bin_frequencies = freqs;
  return s;
}

std::vector<double> row_sums(const Filterbank& fb) {
  std::vector<double> sums;
  for (std::size_t b = 0; b < fb.num_bands(); ++b) {
    const auto& w = fb.band(b).weights;
    sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
  }
  return sums;
}

Spectrogram tone_spectrogram(double frequency) {
  const auto x = mirkit::testing::sine(44100, frequency, 1.0);
  const auto framed = audio::frame_signal(Signal::mono(x, 44100), 2048, 441.0);
  return magnitude(stft(framed));
}

}  // namespace

TEST_CASE("FFT matches the direct DFT") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 8u, 64u, 512u, 2048u}) {
    const auto x = mirkit::testing::random_vector(rng, n);
    RealFft fft(n);
    std::vector<cd> out(fft.num_bins());
    fft.forward(x, out);
    const auto ref = naive_dft(x);
    for (std::size_t k = 0; k < out.size(); ++k) CHECK(std::abs(out[k] - ref[k]) < 1e-9 * double(n));
  }
}

TEST_CASE("windows are periodic") {
  const auto hann = make_window(WindowKind::hann, 8);
  const auto hamming = make_window(WindowKind::hamming, 8);
  for (std::size_t n = 0; n < 8; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * double(n) / 8.0);
    CHECK(hann[n] == doctest::Approx(0.5 - 0.5 * c).epsilon(1e-15));
    CHECK(hamming[n] == doctest::Approx(0.54 - 0.46 * c).epsilon(1e-15));
  }
  CHECK(make_window(WindowKind::rectangular, 5) == std::vector<double>(5, 1.0));
  CHECK(parse_window("hamming") == WindowKind::hamming);
  CHECK_ERROR_KIND(parse_window("kaiser"), ErrorKind::UnknownWindow);
}

TEST_CASE("stft examples") {
  SUBCASE("all-ones frame, rectangular") {
    const auto framed = audio::frame_signal(Signal::mono(std::vector<double>(12, 1.0), 100), 4, 4.0);
    const auto s = stft(framed, {WindowKind::rectangular, 4, true});
    CHECK(s.coefficients.cols() == 3);
    CHECK(s.coefficients(1, 0) == cd(4.0, 0.0));
    CHECK(std::abs(s.coefficients(1, 1)) < 1e-12);
    CHECK(std::abs(s.coefficients(1, 2)) < 1e-12);
  }
  SUBCASE("cosine at bin 1 of an 8-point frame") {
    std::vector<double> x(32);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2.0 * std::numbers::pi * double(n) / 8.0);
    const auto framed = audio::frame_signal(Signal::mono(x, 8), 8, 8.0);
    const auto mag = magnitude(stft(framed, {WindowKind::rectangular, 8, false}));
    for (std::size_t k = 0; k < 5; ++k) CHECK(mag.values(1, k) == doctest::Approx(k == 1 ? 4.0 : 0.0).epsilon(1e-9));
    CHECK(std::abs(mag.values(1, 0)) < 1e-9);
  }
  SUBCASE("int16 and float encodings give the same magnitudes") {
    const auto tone = mirkit::testing::sine(44100, 1000.0, 0.2, 1.0);
    std::vector<double> as_int(tone.size()), as_float(tone.size());
    for (std::size_t i = 0; i < tone.size(); ++i) {
      as_int[i] = std::round(16384.0 * tone[i]);
      as_float[i] = as_int[i] / 32768.0;
    }
    const Signal si(as_int, 44100, 1, audio::SampleFormat::integer, 16);
    const Signal sf = Signal::mono(as_float, 44100);
    const auto mi = magnitude(stft(audio::frame_signal(si, 2048, 441.0)));
    const auto mf = magnitude(stft(audio::frame_signal(sf, 2048, 441.0)));
    REQUIRE(mi.values.rows() == mf.values.rows());
    for (std::size_t i = 0; i < mi.values.data().size(); ++i)
      CHECK(std::abs(mi.values.data()[i] - mf.values.data()[i]) <= 1e-6 * std::max(1e-12, mf.values.data()[i]) + 1e-15);
  }
  SUBCASE("magnitude") {
    Stft s;
    s.coefficients = Matrix<cd>(1, 2);
    s.coefficients(0, 0) = cd(3.0, 4.0);
    CHECK(magnitude(s).values(0, 0) == 5.0);
    CHECK(magnitude(s).values(0, 1) == 0.0);
  }
  SUBCASE("invalid fft size") {
    const auto framed = audio::frame_signal(Signal::mono(std::vector<double>(100, 0.0), 100), 64, 10.0);
    CHECK_ERROR_KIND(stft(framed, {WindowKind::hann, 32, true}), ErrorKind::InvalidParameter);
    CHECK_ERROR_KIND(stft(framed, {WindowKind::hann, 96, true}), ErrorKind::InvalidParameter);
  }
}

TEST_CASE("stft frames match the direct DFT of the windowed, shifted frame") {
  std::mt19937_64 rng(5);
  const auto x = mirkit::testing::random_vector(rng, 3000);
  const auto framed = audio::frame_signal(Signal::mono(x, 1000), 100, 37.5);
  const auto s = stft(framed, {WindowKind::hann, 128, true});
  const auto w = make_window(WindowKind::hann, 100);
  for (std::size_t k : {std::size_t(0), std::size_t(3), std::size_t(40), framed.num_frames() - 1}) {
    auto frame = framed.frame(k);
    std::vector<double> padded(128, 0.0);
    for (std::size_t i = 0; i < 100; ++i) padded[i] = frame[i] * w[i];
    std::rotate(padded.begin(), padded.begin() + 50, padded.end());
    const auto ref = naive_dft(padded);
    for (std::size_t b = 0; b < ref.size(); ++b) CHECK(std::abs(s.coefficients(k, b) - ref[b]) < 1e-9);
  }
}

TEST_CASE("property: Parseval on random frames") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::size_t(1) << (3 + rng() % 8);
    const auto x = mirkit::testing::random_vector(rng, 4 * n);
    const auto framed = audio::frame_signal(Signal::mono(x, 1000), n, double(n));
    const auto s = stft(framed, {WindowKind::rectangular, n, false});
    const std::size_t k = 1 + rng() % (framed.num_frames() - 1);
    const auto frame = framed.frame(k);
    double time_energy = 0.0;
    for (double v : frame) time_energy += v * v;
    double freq_energy = 0.0;
    for (std::size_t b = 0; b <= n / 2; ++b) {
      const double e = std::norm(s.coefficients(k, b));
      freq_energy += (b == 0 || b == n / 2) ? e : 2.0 * e;
    }
    CHECK(std::abs(freq_energy / double(n) - time_energy) <= 1e-6 * time_energy);
  }
}

TEST_CASE("property: magnitudes invariant to circular shift, stft linear") {
  std::mt19937_64 rng(13);
  const auto x = mirkit::testing::random_vector(rng, 2000);
  const auto y = mirkit::testing::random_vector(rng, 2000);
  const auto fx = audio::frame_signal(Signal::mono(x, 1000), 256, 100.0);
  const auto a = magnitude(stft(fx, {WindowKind::hann, 512, true}));
  const auto b = magnitude(stft(fx, {WindowKind::hann, 512, false}));
  for (std::size_t i = 0; i < a.values.data().size(); ++i) CHECK(std::abs(a.values.data()[i] - b.values.data()[i]) < 1e-9);

  std::vector<double> mix(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mix[i] = 2.0 * x[i] - 0.5 * y[i];
  const auto sx = stft(fx);
  const auto sy = stft(audio::frame_signal(Signal::mono(y, 1000), 256, 100.0));
  const auto sm = stft(audio::frame_signal(Signal::mono(mix, 1000), 256, 100.0));
  for (std::size_t i = 0; i < sm.coefficients.data().size(); ++i)
    CHECK(std::abs(sm.coefficients.data()[i] - (2.0 * sx.coefficients.data()[i] - 0.5 * sy.coefficients.data()[i])) < 1e-9);
}

TEST_CASE("pure tone at a bin concentrates its energy") {
  std::vector<double> x(4096);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(2.0 * std::numbers::pi * 16.0 * double(n) / 256.0);
  const auto s = stft(audio::frame_signal(Signal::mono(x, 256), 256, 256.0), {WindowKind::rectangular, 256, true});
  const std::size_t k = 5;
  double total = 0.0;
  for (std::size_t b = 0; b < s.coefficients.cols(); ++b) total += std::norm(s.coefficients(k, b));
  CHECK(std::norm(s.coefficients(k, 16)) >= (1.0 - 1e-9) * total);
}

TEST_CASE("mel scale") {
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-15));
  CHECK(hz_to_mel(700.0) == doctest::Approx(781.17).epsilon(1e-4));
  for (double f : {0.0, 20.0, 440.0, 17000.0}) CHECK(mel_to_hz(hz_to_mel(f)) == doctest::Approx(f).epsilon(1e-12));
}

TEST_CASE("filterbank construction") {
  const auto freqs = bin_frequencies(2048, 44100.0);
  for (auto kind : {FilterbankKind::mel, FilterbankKind::bark, FilterbankKind::logarithmic}) {
    CAPTURE(to_string(kind));
    const auto fb = build_filterbank(kind, freqs);
    CHECK(fb.num_bins() == freqs.size());
    CHECK(fb.num_bands() > 3);
    for (double s : row_sums(fb)) CHECK(std::abs(s - 1.0) <= 1e-9);
    const auto& centers = fb.band_center_frequencies();
    for (std::size_t b = 0; b < fb.num_bands(); ++b) {
      const auto& band = fb.band(b);
      CHECK(!band.weights.empty());
      bool nonzero = false;
      for (double w : band.weights) {
        CHECK(w >= 0.0);
        nonzero |= w > 0.0;
      }
      CHECK(nonzero);
      if (b) CHECK(centers[b] > centers[b - 1]);
      // the nominal center's nearest bin carries the band's largest weight
      const auto peak = std::max_element(band.weights.begin(), band.weights.end()) - band.weights.begin();
      const double bin_width = freqs[1];
      const auto nearest = std::size_t(std::llround(centers[b] / bin_width));
      CHECK(std::abs(double(band.start + std::size_t(peak)) - double(nearest)) <= 1.0);
      CHECK(band.weights[std::size_t(peak)] >= fb.weight(b, nearest) - 1e-15);
    }
  }
  CHECK(build_filterbank(FilterbankKind::mel, freqs).num_bands() <= 40);
  CHECK(parse_filterbank_kind("log") == FilterbankKind::logarithmic);
  CHECK_ERROR_KIND(build_filterbank(FilterbankKind::mel, freqs, {40, 12, 20.0, 30000.0}), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(build_filterbank(FilterbankKind::mel, bin_frequencies(8, 100.0), {40, 12, 1.0, 5.0}),
                   ErrorKind::Degenerate);
}

TEST_CASE("log filterbank centers step by a semitone") {
  const auto freqs = bin_frequencies(2048, 44100.0);
  const auto fb = build_filterbank(FilterbankKind::logarithmic, freqs, {40, 12, 500.0, 16000.0});
  const auto& c = fb.band_center_frequencies();
  REQUIRE(c.size() > 50);
  for (std::size_t b = 1; b < c.size(); ++b) CHECK(std::abs(c[b] / c[b - 1] - std::pow(2.0, 1.0 / 12.0)) <= 1e-12);
  // the full default range merges low bands; ratios stay whole semitones
  const auto full = build_filterbank(FilterbankKind::logarithmic, freqs);
  const auto& f = full.band_center_frequencies();
  for (std::size_t b = 1; b < f.size(); ++b) {
    const double semitones = 12.0 * std::log2(f[b] / f[b - 1]);
    CHECK(std::abs(semitones - std::round(semitones)) <= 1e-9);
    CHECK(std::round(semitones) >= 1.0);
  }
  // A5 lies on the grid
  CHECK(std::find_if(c.begin(), c.end(), [](double x) { return std::abs(x - 880.0) < 1e-9; }) != c.end());
}

TEST_CASE("normalized mel filterbank coverage") {
  const auto freqs = bin_frequencies(2048, 44100.0);
  const auto fb = build_filterbank(FilterbankKind::mel, freqs);
  std::vector<double> col(freqs.size(), 0.0);
  std::size_t lo = freqs.size(), hi = 0;
  for (std::size_t b = 0; b < fb.num_bands(); ++b) {
    const auto& band = fb.band(b);
    for (std::size_t i = 0; i < band.weights.size(); ++i) col[band.start + i] += band.weights[i];
  }
  const auto& first = fb.band(0);
  const auto& last = fb.band(fb.num_bands() - 1);
  lo = first.start;
  hi = last.start + last.weights.size();
  for (std::size_t k = lo; k < hi; ++k) {
    CHECK(col[k] > 0.0);
    CHECK(col[k] <= 2.0);
  }
}

TEST_CASE("apply_filterbank") {
  const std::vector<double> freqs = {0, 10, 20, 30};
  std::vector<Filterbank::Band> bands;
  for (std::size_t b = 0; b < 4; ++b) bands.push_back({b, {1.0}});
  const Filterbank identity(FilterbankKind::mel, 4, bands, freqs);
  std::mt19937_64 rng(2);
  Spectrogram s = flat_spectrogram(5, freqs, 0.0);
  for (auto& v : s.values.data()) v = mirkit::testing::uniform(rng, 0.0, 3.0);
  CHECK(apply_filterbank(s, identity).values == s.values);

  const Filterbank mean(FilterbankKind::mel, 4, {{0, {0.1, 0.2, 0.3, 0.4}}}, {15.0});
  const auto out = apply_filterbank(flat_spectrogram(2, freqs, 2.5), mean);
  CHECK(out.values.cols() == 1);
  CHECK(out.values(1, 0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(out.bin_frequencies == std::vector<double>{15.0});

  CHECK_ERROR_KIND(apply_filterbank(flat_spectrogram(2, {0, 10, 20}, 1.0), mean), ErrorKind::DimensionMismatch);

  // linearity
  Spectrogram t = flat_spectrogram(5, freqs, 0.0);
  for (auto& v : t.values.data()) v = mirkit::testing::uniform(rng, 0.0, 3.0);
  Spectrogram sum = s;
  for (std::size_t i = 0; i < sum.values.data().size(); ++i) sum.values.data()[i] = 3.0 * s.values.data()[i] + t.values.data()[i];
  const auto a = apply_filterbank(s, mean), b = apply_filterbank(t, mean), c = apply_filterbank(sum, mean);
  for (std::size_t r = 0; r < 5; ++r) CHECK(c.values(r, 0) == doctest::Approx(3.0 * a.values(r, 0) + b.values(r, 0)).epsilon(1e-12));
}

TEST_CASE("log_compress") {
  Spectrogram s = flat_spectrogram(1, {0, 1, 2, 3}, 0.0);
  s.values(0, 1) = 9.0;
  s.values(0, 2) = 0.5;
  s.values(0, 3) = 0.6;
  const auto out = log_compress(s);
  CHECK(out.values(0, 0) == 0.0);
  CHECK(out.values(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.values(0, 2) < out.values(0, 3));
  CHECK_ERROR_KIND(log_compress(s, 1.0, 0.0), ErrorKind::InvalidParameter);
}

TEST_CASE("mfcc") {
  const std::size_t bands = 20;
  std::vector<double> freqs(bands);
  std::iota(freqs.begin(), freqs.end(), 1.0);
  SUBCASE("constant input") {
    const auto m = mfcc(flat_spectrogram(3, freqs, 1.7), 13);
    CHECK(m.cols() == 13);
    CHECK(m(2, 0) == doctest::Approx(1.7 * std::sqrt(double(bands))).epsilon(1e-12));
    for (std::size_t k = 1; k < 13; ++k) CHECK(std::abs(m(2, k)) < 1e-9);
  }
  SUBCASE("full DCT is inverted by the DCT-III") {
    std::mt19937_64 rng(4);
    Spectrogram s = flat_spectrogram(4, freqs, 0.0);
    for (auto& v : s.values.data()) v = mirkit::testing::uniform(rng, -2.0, 2.0);
    const auto c = mfcc(s, bands);
    const double n = double(bands);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t i = 0; i < bands; ++i) {
        double x = 0.0;
        for (std::size_t k = 0; k < bands; ++k) {
          const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
          x += scale * c(r, k) * std::cos(std::numbers::pi * double(k) * (2.0 * double(i) + 1.0) / (2.0 * n));
        }
        CHECK(std::abs(x - s.values(r, i)) < 1e-9);
      }
  }
  CHECK_ERROR_KIND(mfcc(flat_spectrogram(1, freqs, 1.0), bands + 1), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(mfcc(flat_spectrogram(1, freqs, 1.0), 0), ErrorKind::InvalidParameter);
}

TEST_CASE("chroma") {
  auto argmax_class = [](const MatrixD& m) {
    std::vector<double> total(12, 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < 12; ++c) total[c] += m(r, c);
    return std::size_t(std::max_element(total.begin(), total.end()) - total.begin());
  };
  const auto a440 = chroma(tone_spectrogram(440.0));
  CHECK(a440.cols() == 12);
  CHECK(argmax_class(a440) == 0);
  CHECK(argmax_class(chroma(tone_spectrogram(880.0))) == 0);
  CHECK(argmax_class(chroma(tone_spectrogram(440.0 * std::pow(2.0, 3.0 / 12.0)))) == 3);
  const auto silent = chroma(magnitude(stft(audio::frame_signal(Signal::mono(std::vector<double>(8000, 0.0), 44100), 2048, 441.0))));
  for (double v : silent.data()) CHECK(v == 0.0);
}
