#include "mirkit/ml/model_io.hpp"

#include <openssl/evp.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mirkit/error.hpp"

namespace mirkit::ml {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---- encoding helpers -------------------------------------------------------

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), int(bytes.size()));
  out.resize(std::size_t(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) fail(ErrorKind::ParseError, "base64 payload length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * text.size() / 4 + 1);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()), int(text.size()));
  if (n < 0) fail(ErrorKind::ParseError, "invalid base64 payload");
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(std::size_t(n) - padding);
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::ChecksumMismatch, "cannot compute SHA-256");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

// ---- reading ------------------------------------------------------------------

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(ErrorKind::ParseError, std::string("missing key '") + key + "'");
  return obj.at(key);
}

template <class T>
T get(const json& obj, const char* key) {
  try {
    return field(obj, key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

Tensor read_tensor(const json& obj, const char* key) {
  const json& t = field(obj, key);
  Tensor out;
  out.shape = get<std::vector<std::size_t>>(t, "shape");
  if (get<std::string>(t, "dtype") != "f32le")
    fail(ErrorKind::ParseError, std::string("tensor '") + key + "' must have dtype f32le");
  const auto bytes = base64_decode(get<std::string>(t, "data"));
  std::size_t count = 1;
  for (std::size_t d : out.shape) count *= d;
  if (bytes.size() != count * 4)
    fail(ErrorKind::ShapeMismatch, std::string("tensor '") + key + "' holds " + std::to_string(bytes.size()) +
                                       " bytes, shape needs " + std::to_string(count * 4));
  out.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* p = bytes.data() + 4 * i;
    const std::uint32_t u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
                            std::uint32_t(p[3]) << 24;
    float f;
    std::memcpy(&f, &u, sizeof f);
    out.values[i] = f;
  }
  return out;
}

void expect_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.shape.size() != rank)
    fail(ErrorKind::ShapeMismatch, std::string(what) + " must have rank " + std::to_string(rank));
}

MatrixD read_matrix(const json& obj, const char* key) {
  Tensor t = read_tensor(obj, key);
  expect_rank(t, 2, key);
  return MatrixD(t.shape[0], t.shape[1], std::move(t.values));
}

std::vector<double> read_vector(const json& obj, const char* key) {
  Tensor t = read_tensor(obj, key);
  expect_rank(t, 1, key);
  return std::move(t.values);
}

LstmGate read_gate(const json& obj, const char* key) {
  const json& g = field(obj, key);
  LstmGate gate;
  gate.weights = read_matrix(g, "weights");
  gate.recurrent_weights = read_matrix(g, "recurrent_weights");
  gate.bias = read_vector(g, "bias");
  if (g.contains("peephole")) gate.peephole = read_vector(g, "peephole");
  return gate;
}

SequenceLayer read_sequence_layer(const json& obj);

Layer read_layer(const json& obj) {
  const auto kind = get<std::string>(obj, "kind");
  auto activation = [&] { return parse_activation(get<std::string>(obj, "activation")); };
  if (kind == "dense") {
    DenseLayer l{read_matrix(obj, "weights"), read_vector(obj, "bias"), activation()};
    validate(l);
    return l;
  }
  if (kind == "recurrent" || kind == "lstm") {
    return std::visit([](auto&& l) -> Layer { return std::move(l); }, read_sequence_layer(obj));
  }
  if (kind == "bidirectional") {
    BidirectionalLayer l{read_sequence_layer(field(obj, "forward")), read_sequence_layer(field(obj, "backward"))};
    validate(l);
    return l;
  }
  if (kind == "conv2d") {
    Tensor k = read_tensor(obj, "weights");
    expect_rank(k, 4, "conv2d weights");
    ConvLayer l{k.shape[0], k.shape[1], k.shape[2], k.shape[3], std::move(k.values), read_vector(obj, "bias"),
                activation()};
    validate(l);
    return l;
  }
  if (kind == "maxpool") {
    const auto size = get<std::vector<std::size_t>>(obj, "size");
    if (size.size() != 2) fail(ErrorKind::ShapeMismatch, "maxpool size must have two entries");
    MaxPoolLayer l{size[0], size[1]};
    validate(l);
    return l;
  }
  if (kind == "activation") return ActivationLayer{activation()};
  fail(ErrorKind::UnknownLayerKind, kind);
}

SequenceLayer read_sequence_layer(const json& obj) {
  const auto kind = get<std::string>(obj, "kind");
  if (kind == "recurrent") {
    RecurrentLayer l{read_matrix(obj, "weights"), read_matrix(obj, "recurrent_weights"), read_vector(obj, "bias"),
                     parse_activation(get<std::string>(obj, "activation"))};
    validate(l);
    return l;
  }
  if (kind == "lstm") {
    LstmLayer l{read_gate(obj, "input_gate"), read_gate(obj, "forget_gate"), read_gate(obj, "cell"),
                read_gate(obj, "output_gate")};
    validate(l);
    return l;
  }
  fail(ErrorKind::UnknownLayerKind, kind + " (expected recurrent or lstm)");
}

GmmModel read_gmm(const json& components) {
  if (!components.is_array()) fail(ErrorKind::ParseError, "'components' must be a list");
  std::vector<GmmComponent> out;
  for (const auto& c : components)
    out.push_back({get<double>(c, "weight"), read_vector(c, "mean"), read_vector(c, "covariance")});
  return GmmModel(std::move(out));
}

HmmModel read_hmm(const json& doc) {
  const auto observation = get<std::string>(doc, "observation");
  const json& states = field(doc, "states");
  if (!states.is_array() || states.empty()) fail(ErrorKind::ParseError, "'states' must be a non-empty list");
  const std::size_t n = states.size();

  std::vector<double> initial;
  std::vector<Transition> transitions;
  std::vector<std::vector<double>> discrete_rows;
  std::vector<GmmModel> gmms;
  std::vector<std::uint32_t> columns;
  for (std::size_t s = 0; s < n; ++s) {
    const json& st = states[s];
    initial.push_back(get<double>(st, "initial"));
    const auto outgoing = get<std::vector<std::pair<std::uint32_t, double>>>(st, "transitions");
    for (const auto& [to, p] : outgoing) transitions.push_back({std::uint32_t(s), to, p});
    const json& obs = field(st, "observation");
    if (observation == "discrete") {
      discrete_rows.push_back(read_vector(obs, "probabilities"));
    } else if (observation == "gmm") {
      gmms.push_back(read_gmm(field(obs, "components")));
    } else if (observation == "activation_column") {
      columns.push_back(get<std::uint32_t>(obs, "column"));
    } else {
      fail(ErrorKind::ParseError, "unknown observation model '" + observation + "'");
    }
  }

  std::shared_ptr<const ObservationModel> model;
  if (observation == "discrete") {
    const std::size_t symbols = discrete_rows.front().size();
    MatrixD table(n, symbols);
    for (std::size_t s = 0; s < n; ++s) {
      if (discrete_rows[s].size() != symbols) fail(ErrorKind::ShapeMismatch, "discrete tables differ in length");
      std::copy(discrete_rows[s].begin(), discrete_rows[s].end(), table.row(s).begin());
    }
    model = std::make_shared<DiscreteObservations>(std::move(table));
  } else if (observation == "gmm") {
    model = std::make_shared<GmmObservations>(std::move(gmms));
  } else {
    model = std::make_shared<ActivationColumnObservations>(std::move(columns));
  }
  return HmmModel(n, std::move(transitions), std::move(initial), std::move(model));
}

// ---- writing ------------------------------------------------------------------

json tensor(const std::vector<std::size_t>& shape, const std::vector<double>& values) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(values.size() * 4);
  for (double v : values) {
    const float f = float(v);
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof u);
    for (int b = 0; b < 4; ++b) bytes.push_back(std::uint8_t(u >> (8 * b)));
  }
  return {{"shape", shape}, {"dtype", "f32le"}, {"data", base64_encode(bytes)}};
}

json tensor(const MatrixD& m) { return tensor({m.rows(), m.cols()}, m.data()); }
json tensor(const std::vector<double>& v) { return tensor({v.size()}, v); }

json write_gate(const LstmGate& g) {
  json out = {{"weights", tensor(g.weights)},
              {"recurrent_weights", tensor(g.recurrent_weights)},
              {"bias", tensor(g.bias)}};
  if (!g.peephole.empty()) out["peephole"] = tensor(g.peephole);
  return out;
}

json write_sequence_layer(const SequenceLayer& layer) {
  return std::visit(overloaded{[](const RecurrentLayer& l) -> json {
                                 return {{"kind", "recurrent"},
                                         {"activation", to_string(l.activation)},
                                         {"weights", tensor(l.weights)},
                                         {"recurrent_weights", tensor(l.recurrent_weights)},
                                         {"bias", tensor(l.bias)}};
                               },
                               [](const LstmLayer& l) -> json {
                                 return {{"kind", "lstm"},
                                         {"input_gate", write_gate(l.input_gate)},
                                         {"forget_gate", write_gate(l.forget_gate)},
                                         {"cell", write_gate(l.cell)},
                                         {"output_gate", write_gate(l.output_gate)}};
                               }},
                    layer);
}

json write_layer(const Layer& layer) {
  return std::visit(
      overloaded{
          [](const DenseLayer& l) -> json {
            return {{"kind", "dense"},
                    {"activation", to_string(l.activation)},
                    {"weights", tensor(l.weights)},
                    {"bias", tensor(l.bias)}};
          },
          [](const RecurrentLayer& l) -> json { return write_sequence_layer(l); },
          [](const LstmLayer& l) -> json { return write_sequence_layer(l); },
          [](const BidirectionalLayer& l) -> json {
            return {{"kind", "bidirectional"},
                    {"forward", write_sequence_layer(l.forward)},
                    {"backward", write_sequence_layer(l.backward)}};
          },
          [](const ConvLayer& l) -> json {
            return {{"kind", "conv2d"},
                    {"activation", to_string(l.activation)},
                    {"weights", tensor({l.out_channels, l.in_channels, l.kernel_height, l.kernel_width}, l.kernel)},
                    {"bias", tensor(l.bias)}};
          },
          [](const MaxPoolLayer& l) -> json {
            return {{"kind", "maxpool"}, {"size", {l.pool_height, l.pool_width}}};
          },
          [](const ActivationLayer& l) -> json {
            return {{"kind", "activation"}, {"activation", to_string(l.activation)}};
          },
      },
      layer);
}

json write_gmm_components(const GmmModel& model) {
  json out = json::array();
  for (const auto& c : model.components())
    out.push_back({{"weight", c.weight}, {"mean", tensor(c.mean)}, {"covariance", tensor(c.covariance)}});
  return out;
}

json write_hmm(const HmmModel& model) {
  const auto& obs = model.observation_model();
  std::string kind;
  if (dynamic_cast<const DiscreteObservations*>(obs.get()))
    kind = "discrete";
  else if (dynamic_cast<const GmmObservations*>(obs.get()))
    kind = "gmm";
  else if (dynamic_cast<const ActivationColumnObservations*>(obs.get()))
    kind = "activation_column";
  else
    fail(ErrorKind::UnserializableParameter, "custom observation models cannot be saved");

  std::vector<json> states(model.num_states());
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    states[s]["initial"] = model.initial()[s];
    states[s]["transitions"] = json::array();
  }
  for (const auto& t : model.transitions()) states[t.from]["transitions"].push_back({t.to, t.probability});
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    if (auto* d = dynamic_cast<const DiscreteObservations*>(obs.get())) {
      const auto row = d->probabilities().row(s);
      states[s]["observation"] = {{"probabilities", tensor(std::vector<double>(row.begin(), row.end()))}};
    } else if (auto* g = dynamic_cast<const GmmObservations*>(obs.get())) {
      states[s]["observation"] = {{"components", write_gmm_components(g->models()[s])}};
    } else {
      const auto* c = dynamic_cast<const ActivationColumnObservations*>(obs.get());
      states[s]["observation"] = {{"column", c->columns()[s]}};
    }
  }
  return {{"observation", kind}, {"states", states}};
}

}  // namespace

AnyModel parse_model(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ParseError, "model document must be an object");

  const int version = get<int>(doc, "format_version");
  if (version != kModelFormatVersion)
    fail(ErrorKind::UnknownFormatVersion, "model format_version " + std::to_string(version));

  if (doc.contains("checksum")) {
    const auto expected = get<std::string>(doc, "checksum");
    json body = doc;
    body.erase("checksum");
    if (expected != "sha256:" + sha256_hex(body.dump()))
      fail(ErrorKind::ChecksumMismatch, "model checksum does not match its content");
  }

  const auto kind = get<std::string>(doc, "model_kind");
  if (kind == "network") {
    const json& layers = field(doc, "layers");
    if (!layers.is_array()) fail(ErrorKind::ParseError, "'layers' must be a list");
    std::vector<Layer> stack;
    for (const auto& l : layers) stack.push_back(read_layer(l));
    ModelMetadata meta;
    if (doc.contains("metadata")) {
      const json& m = doc["metadata"];
      meta.name = m.value("name", "");
      meta.version = m.value("version", "");
    }
    return NetworkModel(std::move(stack), get<std::size_t>(doc, "input_size"), meta);
  }
  if (kind == "hmm") return read_hmm(doc);
  if (kind == "gmm") return read_gmm(field(doc, "components"));
  fail(ErrorKind::ParseError, "unknown model_kind '" + kind + "'");
}

AnyModel load_model(std::istream& source) {
  std::ostringstream buffer;
  buffer << source.rdbuf();
  return parse_model(buffer.str());
}

AnyModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::FileNotFound, path.string());
  return load_model(in);
}

NetworkModel load_network_file(const std::filesystem::path& path) {
  auto model = load_model_file(path);
  if (auto* net = std::get_if<NetworkModel>(&model)) return std::move(*net);
  fail(ErrorKind::TypeMismatch, path.string() + " does not hold a network model");
}

std::string save_model(const AnyModel& model, bool with_checksum) {
  json doc = std::visit(overloaded{
                            [](const NetworkModel& m) -> json {
                              json layers = json::array();
                              for (const auto& l : m.layers()) layers.push_back(write_layer(l));
                              return {{"model_kind", "network"},
                                      {"metadata", {{"name", m.metadata().name}, {"version", m.metadata().version}}},
                                      {"input_size", m.input_size()},
                                      {"layers", layers}};
                            },
                            [](const HmmModel& m) -> json {
                              json out = write_hmm(m);
                              out["model_kind"] = "hmm";
                              return out;
                            },
                            [](const GmmModel& m) -> json {
                              return {{"model_kind", "gmm"}, {"components", write_gmm_components(m)}};
                            },
                        },
                        model);
  doc["format_version"] = kModelFormatVersion;
  if (!doc.contains("metadata")) doc["metadata"] = json::object();
  if (with_checksum) doc["checksum"] = "sha256:" + sha256_hex(doc.dump());
  return doc.dump(2) + "\n";
}

void save_model_file(const AnyModel& model, const std::filesystem::path& path, bool with_checksum) {
  std::ofstream out(path, std::ios::binary);
  out << save_model(model, with_checksum);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
}

}  // namespace mirkit::ml
