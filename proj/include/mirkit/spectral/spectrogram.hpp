#pragma once

#include <cstddef>

#include "mirkit/matrix.hpp"
#include "mirkit/spectral/filterbank.hpp"
#include "mirkit/spectral/stft.hpp"

namespace mirkit::spectral {

/// frames x bins times the transposed filterbank; columns become bands.
Spectrogram apply_filterbank(const Spectrogram& spec, const Filterbank& fb);

/// log10(mul * x + add), elementwise.
Spectrogram log_compress(const Spectrogram& spec, double mul = 1.0, double add = 1.0);

/// Orthonormal DCT-II along the band axis, first `num_coefficients` kept.
MatrixD mfcc(const Spectrogram& log_mel, std::size_t num_coefficients);

/// 12 pitch classes, class 0 = A (440 Hz reference).
MatrixD chroma(const Spectrogram& spec, double fmin = 65.0, double fmax = 2100.0);

}  // namespace mirkit::spectral
