#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "mirkit/audio/signal.hpp"

namespace mirkit::audio {

// RIFF/WAVE PCM (format 1), IEEE float (format 3) and WAVE_FORMAT_EXTENSIBLE
// wrapping either. Little-endian only.

bool looks_like_wav(const std::filesystem::path& path);

Signal read_wav(const std::filesystem::path& path);
Signal decode_wav(std::span<const std::uint8_t> bytes);

/// Writes integer PCM at the signal's bit depth, or 32-bit float.
void write_wav(const std::filesystem::path& path, const Signal& signal);

}  // namespace mirkit::audio
