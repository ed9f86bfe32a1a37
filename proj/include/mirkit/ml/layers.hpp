#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/ml/activations.hpp"

namespace mirkit::ml {

// Weight matrices are stored input x output, so a dense layer computes
// activation(W^T x + b).

struct DenseLayer {
  MatrixD weights;
  std::vector<double> bias;
  ActivationKind activation = ActivationKind::linear;
};

struct RecurrentLayer {
  MatrixD weights;
  MatrixD recurrent_weights;  // output x output
  std::vector<double> bias;
  ActivationKind activation = ActivationKind::tanh;
};

struct LstmGate {
  MatrixD weights;
  MatrixD recurrent_weights;
  std::vector<double> bias;
  std::vector<double> peephole;  // empty when the gate has no peephole connection
};

/// Gates use the logistic sigmoid; the cell candidate and the output
/// nonlinearity use tanh.
struct LstmLayer {
  LstmGate input_gate;
  LstmGate forget_gate;
  LstmGate cell;
  LstmGate output_gate;
};

using SequenceLayer = std::variant<RecurrentLayer, LstmLayer>;

struct BidirectionalLayer {
  SequenceLayer forward;
  SequenceLayer backward;
};

/// Kernel layout: out_channels x in_channels x kernel_height x kernel_width.
struct ConvLayer {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_height = 0;
  std::size_t kernel_width = 0;
  std::vector<double> kernel;
  std::vector<double> bias;
  ActivationKind activation = ActivationKind::linear;
};

struct MaxPoolLayer {
  std::size_t pool_height = 1;
  std::size_t pool_width = 1;
};

struct ActivationLayer {
  ActivationKind activation = ActivationKind::linear;
};

using Layer = std::variant<DenseLayer, RecurrentLayer, LstmLayer, BidirectionalLayer, ConvLayer,
                           MaxPoolLayer, ActivationLayer>;

/// channels x height (time) x width (features).
struct Tensor3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  double& at(std::size_t c, std::size_t h, std::size_t w) { return data[(c * height + h) * width + w]; }
  double at(std::size_t c, std::size_t h, std::size_t w) const {
    return data[(c * height + h) * width + w];
  }
};

std::size_t input_size(const DenseLayer& layer) noexcept;
std::size_t output_size(const DenseLayer& layer) noexcept;
std::size_t input_size(const SequenceLayer& layer) noexcept;
std::size_t output_size(const SequenceLayer& layer) noexcept;

/// Throws ShapeMismatch when the stored tensors disagree with each other.
void validate(const DenseLayer& layer);
void validate(const RecurrentLayer& layer);
void validate(const LstmLayer& layer);
void validate(const BidirectionalLayer& layer);
void validate(const ConvLayer& layer);
void validate(const MaxPoolLayer& layer);

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x);
MatrixD recurrent_forward(const RecurrentLayer& layer, const MatrixD& sequence);
MatrixD lstm_forward(const LstmLayer& layer, const MatrixD& sequence);
MatrixD sequence_forward(const SequenceLayer& layer, const MatrixD& sequence);
MatrixD bidirectional_forward(const SequenceLayer& forward, const SequenceLayer& backward,
                              const MatrixD& sequence);
Tensor3 conv_forward(const ConvLayer& layer, const Tensor3& input);
Tensor3 maxpool_forward(const MaxPoolLayer& layer, const Tensor3& input);

}  // namespace mirkit::ml
