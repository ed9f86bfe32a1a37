#include "mirkit/ml/network.hpp"

#include <string>
#include <type_traits>
#include <variant>

#include "mirkit/error.hpp"

namespace mirkit::ml {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool uses_softmax(const Layer& layer) {
  return std::visit(
      overloaded{[](const DenseLayer& l) { return l.activation == ActivationKind::softmax; },
                 [](const RecurrentLayer& l) { return l.activation == ActivationKind::softmax; },
                 [](const ConvLayer& l) { return l.activation == ActivationKind::softmax; },
                 [](const ActivationLayer& l) { return l.activation == ActivationKind::softmax; },
                 [](const BidirectionalLayer& l) {
                   auto soft = [](const SequenceLayer& s) {
                     const auto* r = std::get_if<RecurrentLayer>(&s);
                     return r && r->activation == ActivationKind::softmax;
                   };
                   return soft(l.forward) || soft(l.backward);
                 },
                 [](const auto&) { return false; }},
      layer);
}

// Shape flowing through the stack: either a frame sequence of `features`
// columns or an image with `channels` x `features` per time step.
struct FlowShape {
  bool image = false;
  std::size_t channels = 1;
  std::size_t features = 0;

  std::size_t flat() const { return image ? channels * features : features; }
};

void expect_input(const FlowShape& shape, std::size_t expected, std::size_t index) {
  if (shape.flat() != expected)
    fail(ErrorKind::ShapeMismatch, "layer " + std::to_string(index) + " expects " +
                                       std::to_string(expected) + " inputs, previous stage yields " +
                                       std::to_string(shape.flat()));
}

}  // namespace

NetworkModel::NetworkModel(std::vector<Layer> layers, std::size_t input_size, ModelMetadata metadata)
    : layers_(std::move(layers)), input_size_(input_size), metadata_(std::move(metadata)) {
  FlowShape shape{false, 1, input_size_};
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (uses_softmax(layers_[i]) && i + 1 != layers_.size())
      fail(ErrorKind::IncompatibleLayerOrder,
           "softmax is only allowed in the last layer (found in layer " + std::to_string(i) + ")");
    std::visit(overloaded{
                   [&](const DenseLayer& l) {
                     validate(l);
                     expect_input(shape, ml::input_size(l), i);
                     shape = {false, 1, ml::output_size(l)};
                   },
                   [&](const RecurrentLayer& l) {
                     validate(l);
                     expect_input(shape, l.weights.rows(), i);
                     shape = {false, 1, l.weights.cols()};
                   },
                   [&](const LstmLayer& l) {
                     validate(l);
                     expect_input(shape, l.cell.weights.rows(), i);
                     shape = {false, 1, l.cell.weights.cols()};
                   },
                   [&](const BidirectionalLayer& l) {
                     validate(l);
                     expect_input(shape, ml::input_size(l.forward), i);
                     shape = {false, 1, ml::output_size(l.forward) + ml::output_size(l.backward)};
                   },
                   [&](const ConvLayer& l) {
                     validate(l);
                     const std::size_t channels = shape.image ? shape.channels : 1;
                     if (channels != l.in_channels)
                       fail(ErrorKind::ShapeMismatch, "convolution layer " + std::to_string(i) +
                                                          " expects " + std::to_string(l.in_channels) +
                                                          " channels");
                     if (shape.features < l.kernel_width)
                       fail(ErrorKind::KernelTooLarge,
                            "kernel wider than the feature axis in layer " + std::to_string(i));
                     shape = {true, l.out_channels, shape.features - l.kernel_width + 1};
                   },
                   [&](const MaxPoolLayer& l) {
                     validate(l);
                     if (shape.features < l.pool_width)
                       fail(ErrorKind::KernelTooLarge,
                            "pool wider than the feature axis in layer " + std::to_string(i));
                     shape = {true, shape.image ? shape.channels : 1, shape.features / l.pool_width};
                   },
                   [&](const ActivationLayer&) {},
               },
               layers_[i]);
  }
  output_size_ = shape.flat();
}

MatrixD nn_predict(const NetworkModel& model, const MatrixD& sequence) {
  if (sequence.rows() > 0 && sequence.cols() != model.input_size())
    fail(ErrorKind::DimensionMismatch, "model expects " + std::to_string(model.input_size()) +
                                           " features, got " + std::to_string(sequence.cols()));

  std::variant<MatrixD, Tensor3> state = sequence;

  auto as_sequence = [&]() -> MatrixD {
    if (auto* m = std::get_if<MatrixD>(&state)) return std::move(*m);
    const auto& t = std::get<Tensor3>(state);
    MatrixD m(t.height, t.channels * t.width);
    for (std::size_t c = 0; c < t.channels; ++c)
      for (std::size_t y = 0; y < t.height; ++y)
        for (std::size_t x = 0; x < t.width; ++x) m(y, c * t.width + x) = t.at(c, y, x);
    return m;
  };
  auto as_image = [&]() -> Tensor3 {
    if (auto* t = std::get_if<Tensor3>(&state)) return std::move(*t);
    const auto& m = std::get<MatrixD>(state);
    Tensor3 t(1, m.rows(), m.cols());
    t.data = m.data();
    return t;
  };

  for (const auto& layer : model.layers()) {
    std::visit(overloaded{
                   [&](const DenseLayer& l) {
                     const MatrixD in = as_sequence();
                     MatrixD out(in.rows(), ml::output_size(l));
                     for (std::size_t t = 0; t < in.rows(); ++t) {
                       const auto y = dense_forward(l, in.row(t));
                       std::copy(y.begin(), y.end(), out.row(t).begin());
                     }
                     state = std::move(out);
                   },
                   [&](const RecurrentLayer& l) { state = recurrent_forward(l, as_sequence()); },
                   [&](const LstmLayer& l) { state = lstm_forward(l, as_sequence()); },
                   [&](const BidirectionalLayer& l) {
                     state = bidirectional_forward(l.forward, l.backward, as_sequence());
                   },
                   [&](const ConvLayer& l) { state = conv_forward(l, as_image()); },
                   [&](const MaxPoolLayer& l) { state = maxpool_forward(l, as_image()); },
                   [&](const ActivationLayer& l) {
                     if (auto* t = std::get_if<Tensor3>(&state)) {
                       if (l.activation != ActivationKind::softmax) {
                         apply_activation_inplace(l.activation, t->data);
                         return;
                       }
                     }
                     MatrixD m = as_sequence();
                     for (std::size_t r = 0; r < m.rows(); ++r) apply_activation_inplace(l.activation, m.row(r));
                     state = std::move(m);
                   },
               },
               layer);
  }
  return as_sequence();
}

}  // namespace mirkit::ml
