#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mirkit/spectral/stft.hpp"

namespace mirkit::spectral {

enum class FilterbankKind { mel, bark, logarithmic };

FilterbankKind parse_filterbank_kind(std::string_view name);
std::string_view to_string(FilterbankKind kind) noexcept;

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// fref * 2^(i / bands_per_octave) for every integer i landing in [fmin, fmax].
std::vector<double> log_frequencies(int bands_per_octave, double fmin, double fmax,
                                    double fref = 440.0);

/// Critical-band edges (Hz), 25 values delimiting 24 bands.
std::span<const double> bark_band_edges();
std::span<const double> bark_band_centers();

struct FilterbankOptions {
  int num_bands = 40;          // mel
  int bands_per_octave = 12;   // logarithmic
  double fmin = 20.0;
  double fmax = 17000.0;
  bool normalize = true;
  double fref = 440.0;
};

/// Triangular filters stored sparsely: band b covers bins
/// [start(b), start(b) + weights(b).size()).
class Filterbank {
 public:
  struct Band {
    std::size_t start = 0;
    std::vector<double> weights;
  };

  Filterbank(FilterbankKind kind, std::size_t num_bins, std::vector<Band> bands,
             std::vector<double> centers);

  FilterbankKind kind() const noexcept { return kind_; }
  std::size_t num_bins() const noexcept { return num_bins_; }
  std::size_t num_bands() const noexcept { return bands_.size(); }
  const Band& band(std::size_t b) const { return bands_[b]; }
  double weight(std::size_t band, std::size_t bin) const;
  /// Nominal center frequency of every band (before snapping to FFT bins).
  const std::vector<double>& band_center_frequencies() const noexcept { return centers_; }

 private:
  FilterbankKind kind_;
  std::size_t num_bins_;
  std::vector<Band> bands_;
  std::vector<double> centers_;
};

Filterbank build_filterbank(FilterbankKind kind, std::span<const double> bin_frequencies,
                            const FilterbankOptions& options = {});

}  // namespace mirkit::spectral
