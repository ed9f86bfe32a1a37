#include "mirkit/error.hpp"

namespace mirkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::EmptyChain: return "EmptyChain";
    case ErrorKind::UnregisteredProcessor: return "UnregisteredProcessor";
    case ErrorKind::UnserializableParameter: return "UnserializableParameter";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownFormatVersion: return "UnknownFormatVersion";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::UnsupportedRemix: return "UnsupportedRemix";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnknownWindow: return "UnknownWindow";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownActivation: return "UnknownActivation";
    case ErrorKind::IncompatibleLayerOrder: return "IncompatibleLayerOrder";
    case ErrorKind::KernelTooLarge: return "KernelTooLarge";
    case ErrorKind::NoValidPath: return "NoValidPath";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnknownLayerKind: return "UnknownLayerKind";
    case ErrorKind::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorKind::EmptyHistogram: return "EmptyHistogram";
    case ErrorKind::UnsortedInput: return "UnsortedInput";
    case ErrorKind::EmptyDetections: return "EmptyDetections";
    case ErrorKind::NoInputs: return "NoInputs";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mirkit
