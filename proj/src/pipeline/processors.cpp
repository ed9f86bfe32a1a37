#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>

#include "mirkit/error.hpp"
#include "mirkit/eval/metrics.hpp"
#include "mirkit/features/beats.hpp"
#include "mirkit/features/onsets.hpp"
#include "mirkit/features/tempo.hpp"
#include "mirkit/ml/model_io.hpp"
#include "mirkit/pipeline/parallel.hpp"
#include "mirkit/pipeline/registry.hpp"
#include "mirkit/spectral/spectrogram.hpp"

namespace mirkit::pipeline {

// --- ParamReader ---

ParamReader::ParamReader(const ProcessorSpec& spec) : spec_(spec) {}

const ParamValue* ParamReader::take(const std::string& name) {
  used_[name] = true;
  const auto it = spec_.params.find(name);
  return it == spec_.params.end() ? nullptr : &it->second;
}

void ParamReader::check(bool ok, const std::string& name, const std::string& requirement) const {
  if (!ok) fail(ErrorKind::InvalidParameter, spec_.kind + "." + name + " " + requirement);
}

bool ParamReader::get_bool(const std::string& name, bool fallback) {
  const auto* v = take(name);
  if (!v) return fallback;
  if (const auto* b = std::get_if<bool>(v)) return *b;
  check(false, name, "must be a boolean");
  return fallback;
}

std::int64_t ParamReader::get_int(const std::string& name, std::int64_t fallback) {
  const auto* v = take(name);
  if (!v) return fallback;
  if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
  if (const auto* d = std::get_if<double>(v); d && std::isfinite(*d) && *d == std::floor(*d) && std::abs(*d) < 9e15)
    return std::int64_t(*d);
  check(false, name, "must be an integer");
  return fallback;
}

double ParamReader::get_double(const std::string& name, double fallback) {
  const auto* v = take(name);
  if (!v) return fallback;
  if (const auto* d = std::get_if<double>(v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(v)) return double(*i);
  check(false, name, "must be a number");
  return fallback;
}

std::string ParamReader::get_string(const std::string& name, const std::string& fallback) {
  const auto* v = take(name);
  if (!v) return fallback;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  check(false, name, "must be a string");
  return fallback;
}

void ParamReader::finish() const {
  for (const auto& [name, _] : spec_.params)
    if (!used_.count(name)) fail(ErrorKind::InvalidParameter, spec_.kind + ": unknown parameter \"" + name + "\"");
}

namespace {

template <class T>
const T& expect(const Data& data, const std::string& kind, const char* wanted) {
  if (const auto* v = std::get_if<T>(&data.value)) return *v;
  fail(ErrorKind::TypeMismatch,
       kind + " expects " + wanted + " input, got " + std::string(kind_name(data)));
}

void no_children(const ProcessorSpec& spec) {
  if (!spec.children.empty()) fail(ErrorKind::InvalidParameter, spec.kind + " takes no children");
}

/// Leaf processor whose spec is fixed at construction.
class Leaf : public Processor {
 public:
  ProcessorSpec spec() const override { return spec_; }

 protected:
  explicit Leaf(std::string kind) { spec_.kind = std::move(kind); }
  template <class T>
  void record(const std::string& name, T value) {
    spec_.params[name] = ParamValue(std::move(value));
  }
  const std::string& kind() const noexcept { return spec_.kind; }

 private:
  ProcessorSpec spec_;
};

template <class F>
Data map_numeric(const Data& in, const std::string& kind, F f) {
  auto apply = [&](MatrixD m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (double& x : m.row(r)) x = f(x);
    return m;
  };
  if (const auto* v = std::get_if<Vector>(&in.value)) {
    Vector out = *v;
    for (double& x : out) x = f(x);
    return out;
  }
  if (const auto* m = std::get_if<MatrixD>(&in.value)) return apply(*m);
  if (const auto* a = std::get_if<features::Activation>(&in.value))
    return features::Activation(apply(a->values), a->fps);
  if (const auto* s = std::get_if<spectral::Spectrogram>(&in.value)) {
    spectral::Spectrogram out = *s;
    out.values = apply(s->values);
    return out;
  }
  fail(ErrorKind::TypeMismatch, kind + " expects numeric input, got " + std::string(kind_name(in)));
}

// --- generic ---

class Identity : public Leaf {
 public:
  explicit Identity(const ProcessorSpec& spec) : Leaf("identity") {
    ParamReader(spec).finish();
    no_children(spec);
  }
  Data process(const Data& in) const override { return in; }
};

class Scale : public Leaf {
 public:
  explicit Scale(const ProcessorSpec& spec) : Leaf("scale") {
    ParamReader p(spec);
    factor_ = p.get_double("factor", 1.0);
    p.finish();
    no_children(spec);
    record("factor", factor_);
  }
  Data process(const Data& in) const override {
    return map_numeric(in, kind(), [f = factor_](double x) { return x * f; });
  }

 private:
  double factor_;
};

class Add : public Leaf {
 public:
  explicit Add(const ProcessorSpec& spec) : Leaf("add") {
    ParamReader p(spec);
    offset_ = p.get_double("offset", 0.0);
    p.finish();
    no_children(spec);
    record("offset", offset_);
  }
  Data process(const Data& in) const override {
    return map_numeric(in, kind(), [o = offset_](double x) { return x + o; });
  }

 private:
  double offset_;
};

class Sequential : public Processor {
 public:
  explicit Sequential(std::vector<ProcessorPtr> members) : members_(std::move(members)) {
    if (members_.empty()) fail(ErrorKind::EmptyChain, "sequential chain has no members");
  }
  Data process(const Data& in) const override {
    Data current = members_.front()->process(in);
    for (std::size_t i = 1; i < members_.size(); ++i) current = members_[i]->process(current);
    return current;
  }
  ProcessorSpec spec() const override {
    ProcessorSpec s{"sequential", {}, {}};
    for (const auto& m : members_) s.children.push_back(m->spec());
    return s;
  }

 private:
  std::vector<ProcessorPtr> members_;
};

class Parallel : public Processor {
 public:
  Parallel(std::vector<ProcessorPtr> members, std::size_t workers)
      : members_(std::move(members)), workers_(workers) {
    if (members_.empty()) fail(ErrorKind::EmptyChain, "parallel group has no members");
  }
  Data process(const Data& in) const override {
    DataList out(members_.size());
    parallel_for(members_.size(), workers_, [&](std::size_t i) { out[i] = members_[i]->process(in); });
    return out;
  }
  ProcessorSpec spec() const override {
    ProcessorSpec s{"parallel", {{"workers", std::int64_t(workers_)}}, {}};
    for (const auto& m : members_) s.children.push_back(m->spec());
    return s;
  }

 private:
  std::vector<ProcessorPtr> members_;
  std::size_t workers_;
};

std::vector<ProcessorPtr> instantiate_children(const ProcessorSpec& spec) {
  std::vector<ProcessorPtr> out;
  for (const auto& child : spec.children) out.push_back(instantiate(child));
  return out;
}

/// Column-wise concatenation of a list of vectors, matrices or activations.
class Stack : public Leaf {
 public:
  explicit Stack(const ProcessorSpec& spec) : Leaf("stack") {
    ParamReader(spec).finish();
    no_children(spec);
  }
  Data process(const Data& in) const override {
    const auto& list = expect<DataList>(in, kind(), "list");
    if (list.empty()) fail(ErrorKind::DimensionMismatch, "stack needs at least one item");
    std::vector<MatrixD> parts;
    std::optional<double> fps;
    for (const auto& item : list) {
      if (const auto* v = std::get_if<Vector>(&item.value)) {
        MatrixD m(v->size(), 1);
        for (std::size_t r = 0; r < v->size(); ++r) m(r, 0) = (*v)[r];
        parts.push_back(std::move(m));
      } else if (const auto* m = std::get_if<MatrixD>(&item.value)) {
        parts.push_back(*m);
      } else if (const auto* a = std::get_if<features::Activation>(&item.value)) {
        if (fps && *fps != a->fps) fail(ErrorKind::DimensionMismatch, "stack: activations differ in fps");
        fps = a->fps;
        parts.push_back(a->values);
      } else {
        fail(ErrorKind::TypeMismatch, "stack cannot stack " + std::string(kind_name(item)));
      }
    }
    const std::size_t rows = parts.front().rows();
    std::size_t cols = 0;
    for (const auto& m : parts) {
      if (m.rows() != rows) fail(ErrorKind::DimensionMismatch, "stack: items differ in length");
      cols += m.cols();
    }
    MatrixD out(rows, cols);
    std::size_t offset = 0;
    for (const auto& m : parts) {
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, offset + c) = m(r, c);
      offset += m.cols();
    }
    if (fps) return features::Activation(std::move(out), *fps);
    return out;
  }
};

// --- audio & spectral ---

class LoadAudio : public Leaf {
 public:
  explicit LoadAudio(const ProcessorSpec& spec) : Leaf("load_audio") {
    ParamReader p(spec);
    sample_rate_ = p.get_int("sample_rate", 0);
    channels_ = p.get_int("channels", 1);
    decoder_cmd_ = p.get_string("decoder_cmd", "");
    p.check(sample_rate_ >= 0, "sample_rate", "must be >= 0 (0 keeps the file's rate)");
    p.check(channels_ >= 0, "channels", "must be >= 0 (0 keeps the file's channels)");
    p.finish();
    no_children(spec);
    record("sample_rate", sample_rate_);
    record("channels", channels_);
    record("decoder_cmd", decoder_cmd_);
  }
  Data process(const Data& in) const override {
    const auto& file = expect<FilePath>(in, kind(), "file path");
    audio::LoadOptions options;
    if (sample_rate_ > 0) options.sample_rate = int(sample_rate_);
    if (channels_ > 0) options.num_channels = int(channels_);
    options.decoder_cmd = decoder_cmd_;
    return audio::load_signal(file.path, options);
  }

 private:
  std::int64_t sample_rate_;
  std::int64_t channels_;
  std::string decoder_cmd_;
};

class Frame : public Leaf {
 public:
  explicit Frame(const ProcessorSpec& spec) : Leaf("frame") {
    ParamReader p(spec);
    frame_size_ = p.get_int("frame_size", 2048);
    fps_ = p.get_double("fps", 100.0);
    p.check(frame_size_ >= 1, "frame_size", "must be >= 1");
    p.check(fps_ > 0.0 && std::isfinite(fps_), "fps", "must be > 0");
    p.finish();
    no_children(spec);
    record("frame_size", frame_size_);
    record("fps", fps_);
  }
  Data process(const Data& in) const override {
    const auto& signal = expect<audio::Signal>(in, kind(), "signal");
    return audio::frame_signal(signal, std::size_t(frame_size_), signal.sample_rate() / fps_);
  }

 private:
  std::int64_t frame_size_;
  double fps_;
};

class StftProcessor : public Leaf {
 public:
  explicit StftProcessor(const ProcessorSpec& spec) : Leaf("stft") {
    ParamReader p(spec);
    const std::string window = p.get_string("window", "hann");
    try {
      options_.window = spectral::parse_window(window);
    } catch (const Error&) {
      p.check(false, "window", "must be hann, hamming or rectangular");
    }
    const auto fft = p.get_int("fft_size", 0);
    p.check(fft == 0 || (fft > 0 && std::has_single_bit(std::uint64_t(fft))), "fft_size",
            "must be 0 (automatic) or a power of two");
    options_.fft_size = std::size_t(fft);
    options_.circular_shift = p.get_bool("circular_shift", true);
    p.finish();
    no_children(spec);
    record("window", std::string(spectral::to_string(options_.window)));
    record("fft_size", fft);
    record("circular_shift", options_.circular_shift);
  }
  Data process(const Data& in) const override {
    return spectral::stft(expect<audio::FramedSignal>(in, kind(), "framed signal"), options_);
  }

 private:
  spectral::StftOptions options_;
};

class Magnitude : public Leaf {
 public:
  explicit Magnitude(const ProcessorSpec& spec) : Leaf("magnitude") {
    ParamReader(spec).finish();
    no_children(spec);
  }
  Data process(const Data& in) const override {
    return spectral::magnitude(expect<spectral::Stft>(in, kind(), "stft"));
  }
};

class FilterbankProcessor : public Leaf {
 public:
  explicit FilterbankProcessor(const ProcessorSpec& spec) : Leaf("filterbank") {
    ParamReader p(spec);
    const std::string name = p.get_string("kind", "mel");
    try {
      kind_ = spectral::parse_filterbank_kind(name);
    } catch (const Error&) {
      p.check(false, "kind", "must be mel, bark or log");
    }
    const auto bands = p.get_int("num_bands", 40);
    const auto bpo = p.get_int("bands_per_octave", 12);
    options_.fmin = p.get_double("fmin", 20.0);
    options_.fmax = p.get_double("fmax", 17000.0);
    options_.fref = p.get_double("fref", 440.0);
    options_.normalize = p.get_bool("normalize", true);
    p.check(bands >= 1 && bands <= 100000, "num_bands", "must be >= 1");
    p.check(bpo >= 1 && bpo <= 1000, "bands_per_octave", "must be >= 1");
    p.check(options_.fmin >= 0.0, "fmin", "must be >= 0");
    p.check(options_.fmax > options_.fmin, "fmax", "must be > fmin");
    p.check(options_.fref > 0.0, "fref", "must be > 0");
    p.finish();
    no_children(spec);
    options_.num_bands = int(bands);
    options_.bands_per_octave = int(bpo);
    record("kind", std::string(spectral::to_string(kind_)));
    record("num_bands", bands);
    record("bands_per_octave", bpo);
    record("fmin", options_.fmin);
    record("fmax", options_.fmax);
    record("fref", options_.fref);
    record("normalize", options_.normalize);
  }
  Data process(const Data& in) const override {
    const auto& spec = expect<spectral::Spectrogram>(in, kind(), "spectrogram");
    auto options = options_;
    // fmax is an upper limit; low sample rates end at Nyquist
    if (!spec.bin_frequencies.empty()) options.fmax = std::min(options.fmax, spec.bin_frequencies.back());
    const auto fb = spectral::build_filterbank(kind_, spec.bin_frequencies, options);
    return spectral::apply_filterbank(spec, fb);
  }

 private:
  spectral::FilterbankKind kind_ = spectral::FilterbankKind::mel;
  spectral::FilterbankOptions options_;
};

class Log : public Leaf {
 public:
  explicit Log(const ProcessorSpec& spec) : Leaf("log") {
    ParamReader p(spec);
    mul_ = p.get_double("mul", 1.0);
    add_ = p.get_double("add", 1.0);
    p.check(mul_ > 0.0, "mul", "must be > 0");
    p.check(add_ > 0.0, "add", "must be > 0");
    p.finish();
    no_children(spec);
    record("mul", mul_);
    record("add", add_);
  }
  Data process(const Data& in) const override {
    return spectral::log_compress(expect<spectral::Spectrogram>(in, kind(), "spectrogram"), mul_, add_);
  }

 private:
  double mul_;
  double add_;
};

class Mfcc : public Leaf {
 public:
  explicit Mfcc(const ProcessorSpec& spec) : Leaf("mfcc") {
    ParamReader p(spec);
    count_ = p.get_int("num_coefficients", 13);
    p.check(count_ >= 1, "num_coefficients", "must be >= 1");
    p.finish();
    no_children(spec);
    record("num_coefficients", count_);
  }
  Data process(const Data& in) const override {
    return spectral::mfcc(expect<spectral::Spectrogram>(in, kind(), "spectrogram"), std::size_t(count_));
  }

 private:
  std::int64_t count_;
};

class Chroma : public Leaf {
 public:
  explicit Chroma(const ProcessorSpec& spec) : Leaf("chroma") {
    ParamReader p(spec);
    fmin_ = p.get_double("fmin", 65.0);
    fmax_ = p.get_double("fmax", 2100.0);
    p.check(fmin_ > 0.0, "fmin", "must be > 0");
    p.check(fmax_ > fmin_, "fmax", "must be > fmin");
    p.finish();
    no_children(spec);
    record("fmin", fmin_);
    record("fmax", fmax_);
  }
  Data process(const Data& in) const override {
    return spectral::chroma(expect<spectral::Spectrogram>(in, kind(), "spectrogram"), fmin_, fmax_);
  }

 private:
  double fmin_;
  double fmax_;
};

// --- features ---

class SpectralFlux : public Leaf {
 public:
  explicit SpectralFlux(const ProcessorSpec& spec) : Leaf("spectral_flux") {
    ParamReader p(spec);
    radius_ = p.get_int("max_filter_radius", 0);
    p.check(radius_ >= 0, "max_filter_radius", "must be >= 0");
    p.finish();
    no_children(spec);
    record("max_filter_radius", radius_);
  }
  Data process(const Data& in) const override {
    return features::spectral_flux(expect<spectral::Spectrogram>(in, kind(), "spectrogram"), std::size_t(radius_));
  }

 private:
  std::int64_t radius_;
};

class NeuralNetwork : public Leaf {
 public:
  explicit NeuralNetwork(const ProcessorSpec& spec) : Leaf("neural_network") {
    ParamReader p(spec);
    path_ = p.get_string("model", "");
    p.check(!path_.empty(), "model", "must name a network model file");
    p.finish();
    no_children(spec);
    record("model", path_);
    model_ = std::make_shared<const ml::NetworkModel>(ml::load_network_file(path_));
  }
  Data process(const Data& in) const override {
    if (const auto* s = std::get_if<spectral::Spectrogram>(&in.value))
      return features::Activation(ml::nn_predict(*model_, s->values), s->frame_rate);
    const auto& act = expect<features::Activation>(in, kind(), "spectrogram or activation");
    return features::Activation(ml::nn_predict(*model_, act.values), act.fps);
  }

 private:
  std::string path_;
  std::shared_ptr<const ml::NetworkModel> model_;
};

/// Divides an activation by its maximum so it lies in [0, 1].
class Normalize : public Leaf {
 public:
  explicit Normalize(const ProcessorSpec& spec) : Leaf("normalize") {
    ParamReader(spec).finish();
    no_children(spec);
  }
  Data process(const Data& in) const override {
    const auto& act = expect<features::Activation>(in, kind(), "activation");
    MatrixD values = act.values;
    double peak = 0.0;
    for (std::size_t r = 0; r < values.rows(); ++r)
      for (double x : values.row(r)) {
        if (x < 0.0) fail(ErrorKind::InvalidParameter, "normalize expects a nonnegative activation");
        peak = std::max(peak, x);
      }
    if (peak > 0.0)
      for (std::size_t r = 0; r < values.rows(); ++r)
        for (double& x : values.row(r)) x /= peak;
    return features::Activation(std::move(values), act.fps);
  }
};

class PickPeaks : public Leaf {
 public:
  explicit PickPeaks(const ProcessorSpec& spec) : Leaf("pick_peaks") {
    ParamReader p(spec);
    const features::PeakPicking defaults;
    o_.threshold = p.get_double("threshold", defaults.threshold);
    o_.pre_max = p.get_double("pre_max", defaults.pre_max);
    o_.post_max = p.get_double("post_max", defaults.post_max);
    o_.combine = p.get_double("combine", defaults.combine);
    o_.smooth = p.get_double("smooth", defaults.smooth);
    p.check(o_.threshold >= 0.0, "threshold", "must be >= 0");
    p.check(o_.pre_max >= 0.0, "pre_max", "must be >= 0");
    p.check(o_.post_max >= 0.0, "post_max", "must be >= 0");
    p.check(o_.combine >= 0.0, "combine", "must be >= 0");
    p.check(o_.smooth >= 0.0, "smooth", "must be >= 0");
    p.finish();
    no_children(spec);
    record("threshold", o_.threshold);
    record("pre_max", o_.pre_max);
    record("post_max", o_.post_max);
    record("combine", o_.combine);
    record("smooth", o_.smooth);
  }
  Data process(const Data& in) const override {
    return Events{features::pick_peaks(expect<features::Activation>(in, kind(), "activation"), o_)};
  }

 private:
  features::PeakPicking o_;
};

class BeatTracker : public Leaf {
 public:
  explicit BeatTracker(const ProcessorSpec& spec) : Leaf("beat_tracker") {
    ParamReader p(spec);
    min_bpm_ = p.get_double("min_bpm", 55.0);
    max_bpm_ = p.get_double("max_bpm", 215.0);
    o_.transition_lambda = p.get_double("transition_lambda", 100.0);
    o_.observation_lambda = p.get_double("observation_lambda", 16.0);
    o_.correct = p.get_bool("correct", true);
    p.check(min_bpm_ > 0.0, "min_bpm", "must be > 0");
    p.check(max_bpm_ > min_bpm_, "max_bpm", "must be > min_bpm");
    p.check(o_.transition_lambda >= 0.0, "transition_lambda", "must be >= 0");
    p.check(o_.observation_lambda > 1.0, "observation_lambda", "must be > 1");
    p.finish();
    no_children(spec);
    record("min_bpm", min_bpm_);
    record("max_bpm", max_bpm_);
    record("transition_lambda", o_.transition_lambda);
    record("observation_lambda", o_.observation_lambda);
    record("correct", o_.correct);
  }
  Data process(const Data& in) const override {
    const auto& act = expect<features::Activation>(in, kind(), "activation");
    const auto space = features::build_beat_state_space(min_bpm_, max_bpm_, act.fps);
    return Events{features::dbn_beat_track(act, space, o_)};
  }

 private:
  double min_bpm_;
  double max_bpm_;
  features::BeatTracking o_;
};

class CombTempo : public Leaf {
 public:
  explicit CombTempo(const ProcessorSpec& spec) : Leaf("comb_tempo") {
    ParamReader p(spec);
    min_bpm_ = p.get_double("min_bpm", 40.0);
    max_bpm_ = p.get_double("max_bpm", 250.0);
    alpha_ = p.get_double("alpha", 0.79);
    p.check(min_bpm_ > 0.0, "min_bpm", "must be > 0");
    p.check(max_bpm_ > min_bpm_, "max_bpm", "must be > min_bpm");
    p.check(alpha_ >= 0.0 && alpha_ < 1.0, "alpha", "must be in [0, 1)");
    p.finish();
    no_children(spec);
    record("min_bpm", min_bpm_);
    record("max_bpm", max_bpm_);
    record("alpha", alpha_);
  }
  Data process(const Data& in) const override {
    return features::comb_filter_tempo(expect<features::Activation>(in, kind(), "activation"), min_bpm_, max_bpm_,
                                       alpha_);
  }

 private:
  double min_bpm_;
  double max_bpm_;
  double alpha_;
};

class DetectTempo : public Leaf {
 public:
  explicit DetectTempo(const ProcessorSpec& spec) : Leaf("detect_tempo") {
    ParamReader p(spec);
    max_tempi_ = p.get_int("max_tempi", 3);
    p.check(max_tempi_ >= 1, "max_tempi", "must be >= 1");
    p.finish();
    no_children(spec);
    record("max_tempi", max_tempi_);
  }
  Data process(const Data& in) const override {
    const auto& hist = expect<features::TempoHistogram>(in, kind(), "tempo histogram");
    return TempoList{features::detect_tempo(hist, std::size_t(max_tempi_))};
  }

 private:
  std::int64_t max_tempi_;
};

// --- output & evaluation ---

/// Writes the text form of its input to `sink` ("-" = standard output) and
/// passes the input through unchanged.
class Write : public Leaf {
 public:
  explicit Write(const ProcessorSpec& spec) : Leaf("write") {
    ParamReader p(spec);
    sink_ = p.get_string("sink", "-");
    p.check(!sink_.empty(), "sink", "must be a path or \"-\"");
    p.finish();
    no_children(spec);
    record("sink", sink_);
  }
  Data process(const Data& in) const override {
    const std::string text = to_text(in);
    if (sink_ == "-") {
      static std::mutex stdout_mutex;
      std::lock_guard lock(stdout_mutex);
      std::cout << text << std::flush;
    } else {
      std::ofstream out(sink_, std::ios::binary);
      if (!(out << text)) fail(ErrorKind::IoError, "cannot write " + sink_);
    }
    return in;
  }

 private:
  std::string sink_;
};

struct Task {
  const char* name;
  const char* suffix;
  double window;
};

constexpr Task kTasks[] = {
    {"onsets", "onsets", eval::kOnsetWindow},
    {"beats", "beats", eval::kBeatWindow},
    {"tempo", "bpm", 0.0},
};

/// Scores a detection file against the annotation file next to it (or in
/// `annotations`): "<stem>.<suffix>.txt" pairs with "<stem>.<suffix>.ann".
class Evaluate : public Leaf {
 public:
  explicit Evaluate(const ProcessorSpec& spec) : Leaf("evaluate") {
    ParamReader p(spec);
    const std::string name = p.get_string("task", "onsets");
    const auto it = std::find_if(std::begin(kTasks), std::end(kTasks),
                                 [&](const Task& t) { return name == t.name; });
    p.check(it != std::end(kTasks), "task", "must be onsets, beats or tempo");
    task_ = *it;
    annotations_ = p.get_string("annotations", "");
    if (name == "tempo") {
      tolerance_ = p.get_double("tolerance", eval::kTempoTolerance);
      p.check(tolerance_ >= 0.0, "tolerance", "must be >= 0");
    } else {
      window_ = p.get_double("window", task_.window);
      p.check(window_ >= 0.0, "window", "must be >= 0");
      if (name == "beats") {
        sigma_ = p.get_double("sigma", eval::kCemgilSigma);
        p.check(sigma_ > 0.0, "sigma", "must be > 0");
      }
    }
    p.finish();
    no_children(spec);
    record("task", name);
    record("annotations", annotations_);
    if (name == "tempo") {
      record("tolerance", tolerance_);
    } else {
      record("window", window_);
      if (name == "beats") record("sigma", sigma_);
    }
  }

  Data process(const Data& in) const override {
    const auto& file = expect<FilePath>(in, kind(), "file path");
    const std::string suffix = std::string(".") + task_.suffix;
    std::string stem = file.path.filename().string();
    for (const auto& ext : {suffix + ".txt", std::string(".txt")}) {
      if (stem.size() > ext.size() && stem.ends_with(ext)) {
        stem.resize(stem.size() - ext.size());
        break;
      }
    }
    const auto dir = annotations_.empty() ? file.path.parent_path() : std::filesystem::path(annotations_);
    const auto ann_path = dir / (stem + suffix + ".ann");
    const auto detections = eval::read_events(file.path);

    EvaluationResult result;
    result.name = stem;
    const std::string task = task_.name;
    if (task == "onsets") {
      const auto m = eval::f_measure(eval::match_events(detections, eval::read_events(ann_path), window_));
      result.columns = {"precision", "recall", "f_measure"};
      result.values = {m.precision, m.recall, m.f1};
    } else if (task == "beats") {
      const auto s = eval::evaluate_beats(detections, eval::read_events(ann_path), window_, sigma_);
      result.columns = {"f_measure", "cemgil"};
      result.values = {s.f1, s.cemgil};
    } else {
      std::vector<features::TempoEstimate> tempi;
      for (double bpm : detections) tempi.push_back({bpm, 0.0});
      const auto s = eval::evaluate_tempo(tempi, eval::read_tempo_annotation(ann_path), tolerance_);
      result.columns = {"acc1", "acc2"};
      result.values = {double(s.acc1), double(s.acc2)};
    }
    return result;
  }

 private:
  Task task_{};
  std::string annotations_;
  double window_ = 0.0;
  double sigma_ = eval::kCemgilSigma;
  double tolerance_ = eval::kTempoTolerance;
};

template <class P>
ProcessorFactory leaf() {
  return [](const ProcessorSpec& spec) -> ProcessorPtr { return std::make_shared<const P>(spec); };
}

}  // namespace

ProcessorPtr compose_sequential(std::vector<ProcessorPtr> processors) {
  return std::make_shared<const Sequential>(std::move(processors));
}

ProcessorPtr compose_parallel(std::vector<ProcessorPtr> processors, std::size_t workers) {
  return std::make_shared<const Parallel>(std::move(processors), workers);
}

void register_builtin_processors(Registry& r) {
  r.add("identity", leaf<Identity>());
  r.add("scale", leaf<Scale>());
  r.add("add", leaf<Add>());
  r.add("sequential", [](const ProcessorSpec& spec) -> ProcessorPtr {
    ParamReader(spec).finish();
    return compose_sequential(instantiate_children(spec));
  });
  r.add("parallel", [](const ProcessorSpec& spec) -> ProcessorPtr {
    ParamReader p(spec);
    const auto workers = p.get_int("workers", 0);
    p.check(workers >= 0, "workers", "must be >= 0 (0 = one per CPU)");
    p.finish();
    return compose_parallel(instantiate_children(spec), std::size_t(workers));
  });
  r.add("stack", leaf<Stack>());
  r.add("load_audio", leaf<LoadAudio>());
  r.add("frame", leaf<Frame>());
  r.add("stft", leaf<StftProcessor>());
  r.add("magnitude", leaf<Magnitude>());
  r.add("filterbank", leaf<FilterbankProcessor>());
  r.add("log", leaf<Log>());
  r.add("mfcc", leaf<Mfcc>());
  r.add("chroma", leaf<Chroma>());
  r.add("spectral_flux", leaf<SpectralFlux>());
  r.add("neural_network", leaf<NeuralNetwork>());
  r.add("normalize", leaf<Normalize>());
  r.add("pick_peaks", leaf<PickPeaks>());
  r.add("beat_tracker", leaf<BeatTracker>());
  r.add("comb_tempo", leaf<CombTempo>());
  r.add("detect_tempo", leaf<DetectTempo>());
  r.add("write", leaf<Write>());
  r.add("evaluate", leaf<Evaluate>());
}

}  // namespace mirkit::pipeline
