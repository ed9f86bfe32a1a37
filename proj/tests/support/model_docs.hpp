#pragma once

// Hand-built model documents, encoded without the library's writer.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace mirkit::testing {

inline std::string base64_f32(const std::vector<float>& values) {
  static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::vector<unsigned char> bytes;
  for (float v : values) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) bytes.push_back((u >> (8 * i)) & 0xFF);
  }
  std::string out;
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::size_t n = std::min<std::size_t>(3, bytes.size() - i);
    std::uint32_t chunk = 0;
    for (std::size_t k = 0; k < 3; ++k) chunk = (chunk << 8) | (k < n ? bytes[i + k] : 0);
    for (std::size_t k = 0; k < 4; ++k) out += k <= n ? alphabet[(chunk >> (18 - 6 * k)) & 63] : '=';
  }
  return out;
}

inline nlohmann::json tensor_doc(std::vector<std::size_t> shape, const std::vector<float>& values) {
  return {{"shape", shape}, {"dtype", "f32le"}, {"data", base64_f32(values)}};
}

/// One dense 2 -> 1 linear layer: y = 0.5 x0 - x1 + 0.25.
inline nlohmann::json minimal_dense_doc() {
  return {{"format_version", 1},
          {"model_kind", "network"},
          {"metadata", {{"name", "tiny"}, {"version", "1"}}},
          {"input_size", 2},
          {"layers",
           {{{"kind", "dense"},
             {"activation", "linear"},
             {"weights", tensor_doc({2, 1}, {0.5f, -1.0f})},
             {"bias", tensor_doc({1}, {0.25f})}}}}};
}

}  // namespace mirkit::testing
