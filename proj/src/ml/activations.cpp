#include "mirkit/ml/activations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit::ml {

ActivationKind parse_activation(std::string_view name) {
  if (name == "linear") return ActivationKind::linear;
  if (name == "sigmoid") return ActivationKind::sigmoid;
  if (name == "tanh") return ActivationKind::tanh;
  if (name == "relu") return ActivationKind::relu;
  if (name == "softmax") return ActivationKind::softmax;
  fail(ErrorKind::UnknownActivation, std::string(name));
}

std::string_view to_string(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::linear: return "linear";
    case ActivationKind::sigmoid: return "sigmoid";
    case ActivationKind::tanh: return "tanh";
    case ActivationKind::relu: return "relu";
    case ActivationKind::softmax: return "softmax";
  }
  return "linear";
}

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

void apply_activation_inplace(ActivationKind kind, std::span<double> values) {
  switch (kind) {
    case ActivationKind::linear:
      return;
    case ActivationKind::sigmoid:
      for (double& v : values) v = sigmoid(v);
      return;
    case ActivationKind::tanh:
      for (double& v : values) v = std::tanh(v);
      return;
    case ActivationKind::relu:
      for (double& v : values) v = std::max(0.0, v);
      return;
    case ActivationKind::softmax: {
      if (values.empty()) return;
      const double peak = *std::max_element(values.begin(), values.end());
      double sum = 0.0;
      for (double& v : values) {
        v = std::exp(v - peak);
        sum += v;
      }
      for (double& v : values) v /= sum;
      return;
    }
  }
}

std::vector<double> apply_activation(ActivationKind kind, std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  apply_activation_inplace(kind, out);
  return out;
}

}  // namespace mirkit::ml
