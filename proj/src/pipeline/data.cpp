#include "mirkit/pipeline/data.hpp"

#include <cstdio>

#include "mirkit/error.hpp"
#include "mirkit/eval/metrics.hpp"

namespace mirkit::pipeline {

namespace {

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

void append_number(std::string& out, const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  out += buf;
}

std::string matrix_text(const MatrixD& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      append_number(out, "%.6f", m(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string_view kind_name(const Data& data) noexcept {
  return std::visit(Overload{
                        [](const std::monostate&) { return "nothing"; },
                        [](const FilePath&) { return "file path"; },
                        [](const Vector&) { return "vector"; },
                        [](const MatrixD&) { return "matrix"; },
                        [](const audio::Signal&) { return "signal"; },
                        [](const audio::FramedSignal&) { return "framed signal"; },
                        [](const spectral::Stft&) { return "stft"; },
                        [](const spectral::Spectrogram&) { return "spectrogram"; },
                        [](const features::Activation&) { return "activation"; },
                        [](const Events&) { return "events"; },
                        [](const features::TempoHistogram&) { return "tempo histogram"; },
                        [](const TempoList&) { return "tempo list"; },
                        [](const EvaluationResult&) { return "evaluation result"; },
                        [](const DataList&) { return "list"; },
                    },
                    data.value);
}

std::string to_text(const Data& data) {
  if (const auto* e = std::get_if<Events>(&data.value)) {
    std::string out;
    for (double t : e->times) {
      append_number(out, "%.3f", t);
      out += '\n';
    }
    return out;
  }
  if (const auto* t = std::get_if<TempoList>(&data.value)) {
    std::string out;
    for (const auto& est : t->tempi) {
      append_number(out, "%.2f", est.bpm);
      out += ' ';
      append_number(out, "%.2f", est.strength);
      out += '\n';
    }
    return out;
  }
  if (const auto* r = std::get_if<EvaluationResult>(&data.value))
    return eval::format_report(r->columns, {{r->name, r->values}});
  if (const auto* a = std::get_if<features::Activation>(&data.value)) return features::activation_to_text(*a);
  if (const auto* m = std::get_if<MatrixD>(&data.value)) return matrix_text(*m);
  if (const auto* s = std::get_if<spectral::Spectrogram>(&data.value)) return matrix_text(s->values);
  if (const auto* v = std::get_if<Vector>(&data.value)) {
    std::string out;
    for (double x : *v) {
      append_number(out, "%.6f", x);
      out += '\n';
    }
    return out;
  }
  if (const auto* h = std::get_if<features::TempoHistogram>(&data.value)) {
    std::string out;
    for (std::size_t i = 0; i < h->strengths.size(); ++i) {
      out += std::to_string(h->lag(i)) + ' ';
      append_number(out, "%.6f", h->strengths[i]);
      out += '\n';
    }
    return out;
  }
  if (const auto* list = std::get_if<DataList>(&data.value)) {
    std::string out;
    for (const auto& item : *list) out += to_text(item);
    return out;
  }
  fail(ErrorKind::TypeMismatch, "no text form for " + std::string(kind_name(data)));
}

}  // namespace mirkit::pipeline
