#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mirkit/matrix.hpp"

namespace mirkit::features {

/// Per-frame detector output (onset/beat strength), frames x columns.
struct Activation {
  MatrixD values;
  double fps = 100.0;

  Activation() = default;
  Activation(MatrixD v, double frame_rate);
  /// Single-column activation.
  Activation(std::span<const double> v, double frame_rate);

  std::size_t num_frames() const noexcept { return values.rows(); }
  std::size_t num_columns() const noexcept { return values.cols(); }
  /// Column 0 as a vector.
  std::vector<double> column(std::size_t c = 0) const;
};

// Binary container: fps (f64 LE), frame count (u32 LE), column count (u32 LE),
// then frames * columns row-major f32 LE values.
std::string encode_activation(const Activation& act);
Activation decode_activation(const std::string& bytes);
void save_activation(const Activation& act, const std::filesystem::path& path);
Activation load_activation(const std::filesystem::path& path);

/// One frame per line, columns separated by a single space.
std::string activation_to_text(const Activation& act);

}  // namespace mirkit::features
