#include "mirkit/spectral/filterbank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit::spectral {

namespace {

constexpr std::array<double, 25> kBarkEdges = {
    20,   100,  200,  300,  400,  510,  630,  770,  920,  1080, 1270, 1480,  1720,
    2000, 2320, 2700, 3150, 3700, 4400, 5300, 6400, 7700, 9500, 12000, 15500};

constexpr std::array<double, 24> kBarkCenters = {
    50,   150,  250,  350,  450,  570,  700,  840,  1000, 1170, 1370,  1600,
    1850, 2150, 2500, 2900, 3400, 4000, 4800, 5800, 7000, 8500, 10500, 13500};

std::size_t nearest_bin(std::span<const double> bins, double f) {
  auto it = std::lower_bound(bins.begin(), bins.end(), f);
  if (it == bins.begin()) return 0;
  if (it == bins.end()) return bins.size() - 1;
  const auto hi = std::size_t(it - bins.begin());
  return (f - bins[hi - 1] <= bins[hi] - f) ? hi - 1 : hi;
}

/// `points` holds the feet and centers of consecutive triangles in Hz:
/// triangle j spans points[j] -> points[j+1] -> points[j+2].
Filterbank triangular(FilterbankKind kind, std::span<const double> bins,
                      const std::vector<double>& points, bool normalize) {
  std::vector<std::size_t> unique_bins;
  std::vector<double> unique_freqs;
  for (double p : points) {
    const std::size_t b = nearest_bin(bins, p);
    if (unique_bins.empty() || b != unique_bins.back()) {
      unique_bins.push_back(b);
      unique_freqs.push_back(p);
    }
  }
  if (unique_bins.size() < 3)
    fail(ErrorKind::Degenerate, "frequency range too narrow for the FFT resolution");

  std::vector<Filterbank::Band> bands;
  std::vector<double> centers;
  for (std::size_t j = 0; j + 2 < unique_bins.size(); ++j) {
    const std::size_t start = unique_bins[j];
    const std::size_t center = unique_bins[j + 1];
    const std::size_t stop = unique_bins[j + 2];
    Filterbank::Band band;
    band.start = start + 1;
    for (std::size_t k = start + 1; k < stop; ++k) {
      double w;
      if (k < center)
        w = double(k - start) / double(center - start);
      else if (k == center)
        w = 1.0;
      else
        w = double(stop - k) / double(stop - center);
      band.weights.push_back(w);
    }
    if (normalize) {
      const double sum = std::accumulate(band.weights.begin(), band.weights.end(), 0.0);
      for (double& w : band.weights) w /= sum;
    }
    bands.push_back(std::move(band));
    centers.push_back(unique_freqs[j + 1]);
  }
  return Filterbank(kind, bins.size(), std::move(bands), std::move(centers));
}

}  // namespace

FilterbankKind parse_filterbank_kind(std::string_view name) {
  if (name == "mel") return FilterbankKind::mel;
  if (name == "bark") return FilterbankKind::bark;
  if (name == "logarithmic" || name == "log") return FilterbankKind::logarithmic;
  fail(ErrorKind::InvalidParameter, "unknown filterbank kind '" + std::string(name) + "'");
}

std::string_view to_string(FilterbankKind kind) noexcept {
  switch (kind) {
    case FilterbankKind::mel: return "mel";
    case FilterbankKind::bark: return "bark";
    case FilterbankKind::logarithmic: return "logarithmic";
  }
  return "mel";
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> log_frequencies(int bands_per_octave, double fmin, double fmax, double fref) {
  require(bands_per_octave > 0, ErrorKind::InvalidParameter, "bands_per_octave must be positive");
  require(fmin > 0.0 && fmin < fmax, ErrorKind::InvalidParameter, "need 0 < fmin < fmax");
  const double bpo = bands_per_octave;
  // Nudges keep exact octave/semitone boundaries (e.g. fmin == 220) inside.
  const auto lo = std::int64_t(std::ceil(bpo * std::log2(fmin / fref) - 1e-9));
  const auto hi = std::int64_t(std::floor(bpo * std::log2(fmax / fref) + 1e-9));
  std::vector<double> freqs;
  for (std::int64_t i = lo; i <= hi; ++i) freqs.push_back(fref * std::exp2(double(i) / bpo));
  return freqs;
}

std::span<const double> bark_band_edges() { return kBarkEdges; }
std::span<const double> bark_band_centers() { return kBarkCenters; }

Filterbank::Filterbank(FilterbankKind kind, std::size_t num_bins, std::vector<Band> bands,
                       std::vector<double> centers)
    : kind_(kind), num_bins_(num_bins), bands_(std::move(bands)), centers_(std::move(centers)) {
  require(bands_.size() == centers_.size(), ErrorKind::DimensionMismatch,
          "one center frequency per band required");
  for (const auto& b : bands_)
    require(b.start + b.weights.size() <= num_bins_, ErrorKind::DimensionMismatch,
            "filterbank band exceeds bin range");
}

double Filterbank::weight(std::size_t band, std::size_t bin) const {
  const auto& b = bands_.at(band);
  if (bin < b.start || bin >= b.start + b.weights.size()) return 0.0;
  return b.weights[bin - b.start];
}

Filterbank build_filterbank(FilterbankKind kind, std::span<const double> bin_frequencies,
                            const FilterbankOptions& options) {
  require(bin_frequencies.size() >= 3, ErrorKind::InvalidParameter, "too few frequency bins");
  require(std::is_sorted(bin_frequencies.begin(), bin_frequencies.end()),
          ErrorKind::InvalidParameter, "bin frequencies must be increasing");
  const double fmin = options.fmin;
  const double fmax = options.fmax;
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= bin_frequencies.back()))
    fail(ErrorKind::InvalidParameter, "need 0 <= fmin < fmax <= " +
                                          std::to_string(bin_frequencies.back()) + " Hz");

  std::vector<double> points;
  switch (kind) {
    case FilterbankKind::mel: {
      require(options.num_bands > 0, ErrorKind::InvalidParameter, "num_bands must be positive");
      const double lo = hz_to_mel(fmin);
      const double hi = hz_to_mel(fmax);
      const int n = options.num_bands + 2;
      for (int i = 0; i < n; ++i) points.push_back(mel_to_hz(lo + (hi - lo) * i / (n - 1)));
      break;
    }
    case FilterbankKind::bark: {
      // Centers inside [fmin, fmax]; the outermost triangle feet are the
      // critical-band edges clipped to the range.
      std::size_t first = kBarkCenters.size(), last = 0;
      for (std::size_t i = 0; i < kBarkCenters.size(); ++i) {
        if (kBarkCenters[i] < fmin || kBarkCenters[i] > fmax) continue;
        first = std::min(first, i);
        last = i;
      }
      if (first == kBarkCenters.size())
        fail(ErrorKind::Degenerate, "no Bark band inside [fmin, fmax]");
      points.push_back(std::max(kBarkEdges[first], fmin));
      for (std::size_t i = first; i <= last; ++i) points.push_back(kBarkCenters[i]);
      points.push_back(std::min(kBarkEdges[last + 1], fmax));
      break;
    }
    case FilterbankKind::logarithmic: {
      require(fmin > 0.0, ErrorKind::InvalidParameter, "logarithmic filterbank needs fmin > 0");
      points = log_frequencies(options.bands_per_octave, fmin, fmax, options.fref);
      break;
    }
  }
  return triangular(kind, bin_frequencies, points, options.normalize);
}

}  // namespace mirkit::spectral
