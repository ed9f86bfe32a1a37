#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mirkit {

/// Every failure raised by the library carries one of these kinds so callers
/// (and the CLI exit-code mapping) can branch without parsing messages.
enum class ErrorKind {
  // pipeline
  TypeMismatch,
  EmptyChain,
  UnregisteredProcessor,
  UnserializableParameter,
  ParseError,
  UnknownFormatVersion,
  InvalidParameter,
  ValidationError,
  // audio
  FileNotFound,
  UnsupportedFormat,
  DecodeError,
  UnsupportedRemix,
  IndexOutOfRange,
  // spectral
  UnknownWindow,
  Degenerate,
  DimensionMismatch,
  // ml
  UnknownActivation,
  IncompatibleLayerOrder,
  KernelTooLarge,
  NoValidPath,
  ShapeMismatch,
  UnknownLayerKind,
  ChecksumMismatch,
  // features / eval
  EmptyHistogram,
  UnsortedInput,
  EmptyDetections,
  // cli
  NoInputs,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace mirkit
