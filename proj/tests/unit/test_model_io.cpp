#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mirkit/error.hpp"
#include "mirkit/ml/model_io.hpp"
#include "model_docs.hpp"
#include "test_support.hpp"

using namespace mirkit;
using namespace mirkit::ml;
using nlohmann::json;

#define CHECK_ERROR_KIND(expr, expected)        \
  do {                                          \
    try {                                       \
      (void)(expr);                             \
      FAIL("expected " << to_string(expected)); \
    } catch (const Error& e) {                  \
      CHECK(e.kind() == (expected));            \
    }                                           \
  } while (0)

namespace {

double f32(double v) { return double(float(v)); }

MatrixD random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  MatrixD m(r, c);
  for (auto& v : m.data()) v = f32(mirkit::testing::uniform(rng, -1, 1));
  return m;
}

std::vector<double> random_f32(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = f32(mirkit::testing::uniform(rng, -1, 1));
  return v;
}

LstmGate gate(std::mt19937_64& rng, std::size_t in, std::size_t out, bool peephole) {
  return {random_matrix(rng, in, out), random_matrix(rng, out, out), random_f32(rng, out),
          peephole ? random_f32(rng, out) : std::vector<double>{}};
}

NetworkModel every_layer_kind(std::mt19937_64& rng) {
  const ConvLayer conv{2, 1, 2, 2, random_f32(rng, 8), random_f32(rng, 2), ActivationKind::relu};
  const MaxPoolLayer pool{1, 2};
  const DenseLayer dense{random_matrix(rng, 4, 3), random_f32(rng, 3), ActivationKind::tanh};
  const RecurrentLayer rnn{random_matrix(rng, 3, 2), random_matrix(rng, 2, 2), random_f32(rng, 2),
                           ActivationKind::tanh};
  const LstmLayer lstm{gate(rng, 3, 2, true), gate(rng, 3, 2, true), gate(rng, 3, 2, false), gate(rng, 3, 2, true)};
  const BidirectionalLayer bi{rnn, lstm};
  const DenseLayer head{random_matrix(rng, 4, 3), random_f32(rng, 3), ActivationKind::linear};
  return NetworkModel({conv, pool, dense, bi, head, ActivationLayer{ActivationKind::softmax}}, 5, {"all", "2"});
}

}  // namespace

TEST_CASE("minimal dense document") {
  const auto model = parse_model(mirkit::testing::minimal_dense_doc().dump());
  REQUIRE(std::holds_alternative<NetworkModel>(model));
  const auto& net = std::get<NetworkModel>(model);
  CHECK(net.input_size() == 2);
  CHECK(net.output_size() == 1);
  CHECK(net.metadata().name == "tiny");
  const auto y = nn_predict(net, MatrixD(1, 2, {2.0, 1.0}));
  CHECK(y(0, 0) == 0.25);
}

TEST_CASE("malformed documents") {
  SUBCASE("tensor length does not match shape") {
    auto doc = mirkit::testing::minimal_dense_doc();
    doc["layers"][0]["weights"] = mirkit::testing::tensor_doc({2, 1}, {0.5f, -1.0f, 3.0f});
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::ShapeMismatch);
  }
  SUBCASE("inconsistent layer shapes") {
    auto doc = mirkit::testing::minimal_dense_doc();
    doc["layers"][0]["bias"] = mirkit::testing::tensor_doc({2}, {0.0f, 0.0f});
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::ShapeMismatch);
    doc = mirkit::testing::minimal_dense_doc();
    doc["input_size"] = 3;
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::ShapeMismatch);
  }
  SUBCASE("unknown layer kind") {
    auto doc = mirkit::testing::minimal_dense_doc();
    doc["layers"][0]["kind"] = "batchnorm";
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::UnknownLayerKind);
  }
  SUBCASE("unknown version") {
    auto doc = mirkit::testing::minimal_dense_doc();
    doc["format_version"] = 2;
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::UnknownFormatVersion);
  }
  SUBCASE("wrong dtype and missing keys") {
    auto doc = mirkit::testing::minimal_dense_doc();
    doc["layers"][0]["bias"]["dtype"] = "f64le";
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::ParseError);
    doc = mirkit::testing::minimal_dense_doc();
    doc.erase("layers");
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::ParseError);
    CHECK_ERROR_KIND(parse_model("{not json"), ErrorKind::ParseError);
    CHECK_ERROR_KIND(parse_model("[]"), ErrorKind::ParseError);
  }
  SUBCASE("unknown activation") {
    auto doc = mirkit::testing::minimal_dense_doc();
    doc["layers"][0]["activation"] = "swish";
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::UnknownActivation);
  }
  SUBCASE("checksum") {
    const auto good = json::parse(save_model(std::get<NetworkModel>(parse_model(mirkit::testing::minimal_dense_doc().dump()))));
    REQUIRE(good.contains("checksum"));
    CHECK_NOTHROW(parse_model(good.dump()));
    auto tampered = good;
    tampered["metadata"]["name"] = "other";
    CHECK_ERROR_KIND(parse_model(tampered.dump()), ErrorKind::ChecksumMismatch);
  }
  SUBCASE("hmm rows must sum to one") {
    const json doc = {{"format_version", 1},
                      {"model_kind", "hmm"},
                      {"observation", "activation_column"},
                      {"states",
                       {{{"initial", 1.0}, {"transitions", {{0, 0.5}}}, {"observation", {{"column", 0}}}}}}};
    CHECK_ERROR_KIND(parse_model(doc.dump()), ErrorKind::InvalidParameter);
  }
  SUBCASE("missing file") {
    CHECK_ERROR_KIND(load_model_file("/nonexistent/model.json"), ErrorKind::FileNotFound);
  }
}

TEST_CASE("network round trip is bit-exact") {
  std::mt19937_64 rng(12);
  const auto net = every_layer_kind(rng);
  const auto seq = mirkit::testing::random_vector(rng, 9 * 5);
  const MatrixD input(9, 5, seq);
  const auto before = nn_predict(net, input);

  mirkit::testing::TempDir dir;
  save_model_file(net, dir / "model.json");
  const auto loaded = load_network_file(dir / "model.json");
  CHECK(loaded.metadata() == net.metadata());
  CHECK(loaded.layers().size() == net.layers().size());
  const auto after = nn_predict(loaded, input);
  CHECK(after.data() == before.data());
  CHECK(save_model(loaded) == save_model(net));

  std::istringstream unsummed(save_model(net, false));
  CHECK(nn_predict(std::get<NetworkModel>(load_model(unsummed)), input).data() == before.data());
}

TEST_CASE("hmm and gmm round trips") {
  std::mt19937_64 rng(13);
  const GmmModel gmm({{0.25, {0.5, -1.0}, {1.0, 0.5}}, {0.75, {-0.25, 2.0}, {2.0, 0.125}}});
  const auto g2 = std::get<GmmModel>(parse_model(save_model(gmm)));
  for (int i = 0; i < 10; ++i) {
    const auto x = mirkit::testing::random_vector(rng, 2, -2, 2);
    CHECK(gmm_log_likelihood(g2, x) == gmm_log_likelihood(gmm, x));
  }

  const MatrixD emit(2, 3, {0.5, 0.25, 0.25, 0.125, 0.375, 0.5});
  const HmmModel hmm(2, {{0, 0, 0.75}, {0, 1, 0.25}, {1, 0, 0.5}, {1, 1, 0.5}}, {0.5, 0.5},
                     std::make_shared<DiscreteObservations>(emit));
  const auto h2 = std::get<HmmModel>(parse_model(save_model(hmm)));
  const MatrixD obs(6, 1, {0, 2, 1, 1, 0, 2});
  CHECK(hmm_viterbi(h2, obs).path == hmm_viterbi(hmm, obs).path);
  CHECK(hmm_viterbi(h2, obs).log_probability == hmm_viterbi(hmm, obs).log_probability);
  CHECK(hmm_forward(h2, obs).data() == hmm_forward(hmm, obs).data());

  const HmmModel cols(2, {{0, 1, 1.0}, {1, 0, 1.0}}, {1.0, 0.0},
                      std::make_shared<ActivationColumnObservations>(std::vector<std::uint32_t>{0, 1}));
  const HmmModel gm(2, {{0, 1, 1.0}, {1, 0, 1.0}}, {1.0, 0.0},
                    std::make_shared<GmmObservations>(std::vector<GmmModel>{gmm, gmm}));
  CHECK(save_model(std::get<HmmModel>(parse_model(save_model(cols)))) == save_model(cols));
  CHECK(save_model(std::get<HmmModel>(parse_model(save_model(gm)))) == save_model(gm));
}

TEST_CASE("load_network_file rejects other model kinds") {
  mirkit::testing::TempDir dir;
  save_model_file(GmmModel({{1.0, {0.0}, {1.0}}}), dir / "gmm.json");
  CHECK_ERROR_KIND(load_network_file(dir / "gmm.json"), ErrorKind::TypeMismatch);
}
