#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <variant>

#include "mirkit/ml/gmm.hpp"
#include "mirkit/ml/hmm.hpp"
#include "mirkit/ml/network.hpp"

namespace mirkit::ml {

// Model documents are JSON:
//   {"format_version": 1, "model_kind": "network" | "hmm" | "gmm",
//    "metadata": {...}, "layers" | "states" | "components": [...],
//    "checksum": "sha256:<hex>"   (optional)}
// Tensors are {"shape": [...], "dtype": "f32le", "data": <base64>} holding
// row-major little-endian 32-bit floats. The checksum covers the compact
// serialization of the document with the checksum key removed.

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<NetworkModel, HmmModel, GmmModel>;

AnyModel parse_model(const std::string& document);
AnyModel load_model(std::istream& source);
AnyModel load_model_file(const std::filesystem::path& path);

/// Convenience for callers that need a network; TypeMismatch otherwise.
NetworkModel load_network_file(const std::filesystem::path& path);

std::string save_model(const AnyModel& model, bool with_checksum = true);
void save_model_file(const AnyModel& model, const std::filesystem::path& path, bool with_checksum = true);

}  // namespace mirkit::ml
