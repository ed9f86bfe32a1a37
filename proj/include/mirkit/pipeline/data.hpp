#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mirkit/audio/framed_signal.hpp"
#include "mirkit/audio/signal.hpp"
#include "mirkit/features/activation.hpp"
#include "mirkit/features/tempo.hpp"
#include "mirkit/matrix.hpp"
#include "mirkit/spectral/stft.hpp"

namespace mirkit::pipeline {

struct FilePath {
  std::filesystem::path path;
};

using Vector = std::vector<double>;

struct Events {
  std::vector<double> times;  // seconds, ascending
};

struct TempoList {
  std::vector<features::TempoEstimate> tempi;
};

struct EvaluationResult {
  std::string name;
  std::vector<std::string> columns;
  std::vector<double> values;
};

struct Data;
using DataList = std::vector<Data>;

/// Everything that flows between processors.
struct Data {
  using Value = std::variant<std::monostate, FilePath, Vector, MatrixD, audio::Signal, audio::FramedSignal,
                             spectral::Stft, spectral::Spectrogram, features::Activation, Events,
                             features::TempoHistogram, TempoList, EvaluationResult, DataList>;
  Value value;

  Data() = default;
  template <class T>
    requires std::is_constructible_v<Value, T&&> && (!std::is_same_v<std::decay_t<T>, Data>)
  Data(T&& v) : value(std::forward<T>(v)) {}

  template <class T>
  bool holds() const noexcept {
    return std::holds_alternative<T>(value);
  }
  template <class T>
  const T& get() const {
    return std::get<T>(value);
  }
};

std::string_view kind_name(const Data& data) noexcept;

/// Program-style text rendering: events as "%.3f" seconds per line, tempi as
/// "<bpm %.2f> <strength %.2f>" per line, matrices one frame per line.
std::string to_text(const Data& data);

}  // namespace mirkit::pipeline
