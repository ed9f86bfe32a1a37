#include "mirkit/ml/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit::ml {

namespace {

void check_shape(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::ShapeMismatch, what);
}

void validate_gate(const LstmGate& g, std::size_t in, std::size_t out, const char* name) {
  const std::string n = name;
  check_shape(g.weights.rows() == in && g.weights.cols() == out, n + " weights shape");
  check_shape(g.recurrent_weights.rows() == out && g.recurrent_weights.cols() == out,
              n + " recurrent weights shape");
  check_shape(g.bias.size() == out, n + " bias length");
  check_shape(g.peephole.empty() || g.peephole.size() == out, n + " peephole length");
}

// acc[j] += sum_i x[i] * W(i, j)
void accumulate_transposed(const MatrixD& w, std::span<const double> x, std::span<double> acc) {
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double xi = x[i];
    const auto row = w.row(i);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += xi * row[j];
  }
}

void check_sequence(const MatrixD& sequence, std::size_t expected) {
  if (sequence.rows() > 0 && sequence.cols() != expected)
    fail(ErrorKind::DimensionMismatch, "sequence has " + std::to_string(sequence.cols()) +
                                           " features, layer expects " + std::to_string(expected));
}

std::vector<double> gate_preactivation(const LstmGate& g, std::span<const double> x,
                                       std::span<const double> h) {
  std::vector<double> acc(g.bias);
  accumulate_transposed(g.weights, x, acc);
  accumulate_transposed(g.recurrent_weights, h, acc);
  return acc;
}

MatrixD reversed(const MatrixD& m) {
  MatrixD out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(m.rows() - 1 - r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace

std::size_t input_size(const DenseLayer& layer) noexcept { return layer.weights.rows(); }
std::size_t output_size(const DenseLayer& layer) noexcept { return layer.weights.cols(); }

std::size_t input_size(const SequenceLayer& layer) noexcept {
  return std::visit(
      [](const auto& l) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, LstmLayer>)
          return l.cell.weights.rows();
        else
          return l.weights.rows();
      },
      layer);
}

std::size_t output_size(const SequenceLayer& layer) noexcept {
  return std::visit(
      [](const auto& l) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, LstmLayer>)
          return l.cell.weights.cols();
        else
          return l.weights.cols();
      },
      layer);
}

void validate(const DenseLayer& layer) {
  check_shape(layer.bias.size() == layer.weights.cols(), "dense bias length");
}

void validate(const RecurrentLayer& layer) {
  const std::size_t out = layer.weights.cols();
  check_shape(layer.bias.size() == out, "recurrent bias length");
  check_shape(layer.recurrent_weights.rows() == out && layer.recurrent_weights.cols() == out,
              "recurrent weights shape");
}

void validate(const LstmLayer& layer) {
  const std::size_t in = layer.cell.weights.rows();
  const std::size_t out = layer.cell.weights.cols();
  validate_gate(layer.input_gate, in, out, "input gate");
  validate_gate(layer.forget_gate, in, out, "forget gate");
  validate_gate(layer.cell, in, out, "cell");
  validate_gate(layer.output_gate, in, out, "output gate");
  check_shape(layer.cell.peephole.empty(), "the cell candidate has no peephole");
}

void validate(const BidirectionalLayer& layer) {
  std::visit([](const auto& l) { validate(l); }, layer.forward);
  std::visit([](const auto& l) { validate(l); }, layer.backward);
  check_shape(input_size(layer.forward) == input_size(layer.backward),
              "bidirectional halves disagree on input size");
}

void validate(const ConvLayer& layer) {
  check_shape(layer.out_channels > 0 && layer.in_channels > 0 && layer.kernel_height > 0 &&
                  layer.kernel_width > 0,
              "convolution dimensions must be positive");
  check_shape(layer.kernel.size() ==
                  layer.out_channels * layer.in_channels * layer.kernel_height * layer.kernel_width,
              "convolution kernel size");
  check_shape(layer.bias.size() == layer.out_channels, "convolution bias length");
}

void validate(const MaxPoolLayer& layer) {
  check_shape(layer.pool_height > 0 && layer.pool_width > 0, "pool size must be positive");
}

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x) {
  if (x.size() != input_size(layer))
    fail(ErrorKind::DimensionMismatch, "dense layer expects " + std::to_string(input_size(layer)) +
                                           " inputs, got " + std::to_string(x.size()));
  std::vector<double> y(layer.bias);
  accumulate_transposed(layer.weights, x, y);
  apply_activation_inplace(layer.activation, y);
  return y;
}

MatrixD recurrent_forward(const RecurrentLayer& layer, const MatrixD& sequence) {
  check_sequence(sequence, layer.weights.rows());
  const std::size_t out = layer.weights.cols();
  MatrixD result(sequence.rows(), out);
  std::vector<double> h(out, 0.0);
  for (std::size_t t = 0; t < sequence.rows(); ++t) {
    std::vector<double> acc(layer.bias);
    accumulate_transposed(layer.weights, sequence.row(t), acc);
    accumulate_transposed(layer.recurrent_weights, h, acc);
    apply_activation_inplace(layer.activation, acc);
    h = acc;
    std::copy(h.begin(), h.end(), result.row(t).begin());
  }
  return result;
}

MatrixD lstm_forward(const LstmLayer& layer, const MatrixD& sequence) {
  check_sequence(sequence, layer.cell.weights.rows());
  const std::size_t out = layer.cell.weights.cols();
  MatrixD result(sequence.rows(), out);
  std::vector<double> h(out, 0.0), c(out, 0.0);
  for (std::size_t t = 0; t < sequence.rows(); ++t) {
    const auto x = sequence.row(t);
    auto ig = gate_preactivation(layer.input_gate, x, h);
    auto fg = gate_preactivation(layer.forget_gate, x, h);
    auto cand = gate_preactivation(layer.cell, x, h);
    auto og = gate_preactivation(layer.output_gate, x, h);
    for (std::size_t j = 0; j < out; ++j) {
      if (!layer.input_gate.peephole.empty()) ig[j] += layer.input_gate.peephole[j] * c[j];
      if (!layer.forget_gate.peephole.empty()) fg[j] += layer.forget_gate.peephole[j] * c[j];
      const double i_t = sigmoid(ig[j]);
      const double f_t = sigmoid(fg[j]);
      c[j] = f_t * c[j] + i_t * std::tanh(cand[j]);
      if (!layer.output_gate.peephole.empty()) og[j] += layer.output_gate.peephole[j] * c[j];
      h[j] = sigmoid(og[j]) * std::tanh(c[j]);
    }
    std::copy(h.begin(), h.end(), result.row(t).begin());
  }
  return result;
}

MatrixD sequence_forward(const SequenceLayer& layer, const MatrixD& sequence) {
  return std::visit(
      [&](const auto& l) -> MatrixD {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, LstmLayer>)
          return lstm_forward(l, sequence);
        else
          return recurrent_forward(l, sequence);
      },
      layer);
}

MatrixD bidirectional_forward(const SequenceLayer& forward, const SequenceLayer& backward,
                              const MatrixD& sequence) {
  if (input_size(forward) != input_size(backward))
    fail(ErrorKind::DimensionMismatch, "bidirectional halves disagree on input size");
  const MatrixD fwd = sequence_forward(forward, sequence);
  const MatrixD bwd = reversed(sequence_forward(backward, reversed(sequence)));
  const std::size_t a = output_size(forward), b = output_size(backward);
  MatrixD out(sequence.rows(), a + b);
  for (std::size_t t = 0; t < sequence.rows(); ++t) {
    std::copy(fwd.row(t).begin(), fwd.row(t).end(), out.row(t).begin());
    std::copy(bwd.row(t).begin(), bwd.row(t).end(), out.row(t).begin() + std::ptrdiff_t(a));
  }
  return out;
}

Tensor3 conv_forward(const ConvLayer& layer, const Tensor3& input) {
  if (input.channels != layer.in_channels)
    fail(ErrorKind::DimensionMismatch, "convolution expects " + std::to_string(layer.in_channels) +
                                           " channels, got " + std::to_string(input.channels));
  if (input.height < layer.kernel_height || input.width < layer.kernel_width)
    fail(ErrorKind::KernelTooLarge, "kernel exceeds input extent");
  const std::size_t oh = input.height - layer.kernel_height + 1;
  const std::size_t ow = input.width - layer.kernel_width + 1;
  Tensor3 out(layer.out_channels, oh, ow);
  const std::size_t kh = layer.kernel_height, kw = layer.kernel_width;
  for (std::size_t o = 0; o < layer.out_channels; ++o) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        double acc = layer.bias[o];
        for (std::size_t c = 0; c < layer.in_channels; ++c) {
          const double* k = layer.kernel.data() + ((o * layer.in_channels + c) * kh) * kw;
          for (std::size_t dy = 0; dy < kh; ++dy)
            for (std::size_t dx = 0; dx < kw; ++dx) acc += k[dy * kw + dx] * input.at(c, y + dy, x + dx);
        }
        out.at(o, y, x) = acc;
      }
    }
  }
  if (layer.activation == ActivationKind::softmax) {
    std::vector<double> column(out.channels);
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        for (std::size_t o = 0; o < out.channels; ++o) column[o] = out.at(o, y, x);
        apply_activation_inplace(ActivationKind::softmax, column);
        for (std::size_t o = 0; o < out.channels; ++o) out.at(o, y, x) = column[o];
      }
    }
  } else {
    apply_activation_inplace(layer.activation, out.data);
  }
  return out;
}

Tensor3 maxpool_forward(const MaxPoolLayer& layer, const Tensor3& input) {
  if (input.height < layer.pool_height || input.width < layer.pool_width)
    fail(ErrorKind::KernelTooLarge, "pool window exceeds input extent");
  const std::size_t oh = input.height / layer.pool_height;
  const std::size_t ow = input.width / layer.pool_width;
  Tensor3 out(input.channels, oh, ow, -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < input.channels; ++c)
    for (std::size_t y = 0; y < oh * layer.pool_height; ++y)
      for (std::size_t x = 0; x < ow * layer.pool_width; ++x) {
        double& cell = out.at(c, y / layer.pool_height, x / layer.pool_width);
        cell = std::max(cell, input.at(c, y, x));
      }
  return out;
}

}  // namespace mirkit::ml
