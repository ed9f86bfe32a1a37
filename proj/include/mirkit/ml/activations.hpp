#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace mirkit::ml {

enum class ActivationKind { linear, sigmoid, tanh, relu, softmax };

ActivationKind parse_activation(std::string_view name);
std::string_view to_string(ActivationKind kind) noexcept;

double sigmoid(double x) noexcept;

/// In place. Softmax subtracts the maximum first so large inputs do not overflow.
void apply_activation_inplace(ActivationKind kind, std::span<double> values);

std::vector<double> apply_activation(ActivationKind kind, std::span<const double> values);

}  // namespace mirkit::ml
