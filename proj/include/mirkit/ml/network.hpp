#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/ml/layers.hpp"

namespace mirkit::ml {

struct ModelMetadata {
  std::string name;
  std::string version;
  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

/// Ordered layer stack. Convolution and pooling layers see the sequence as a
/// one-channel image (time x features); any following frame-wise or recurrent
/// layer sees channels flattened per frame (channel-major).
class NetworkModel {
 public:
  NetworkModel() = default;
  /// Validates shapes and layer order; throws ShapeMismatch or IncompatibleLayerOrder.
  NetworkModel(std::vector<Layer> layers, std::size_t input_size, ModelMetadata metadata = {});

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::size_t input_size() const noexcept { return input_size_; }
  std::size_t output_size() const noexcept { return output_size_; }
  const ModelMetadata& metadata() const noexcept { return metadata_; }

 private:
  std::vector<Layer> layers_;
  std::size_t input_size_ = 0;
  std::size_t output_size_ = 0;
  ModelMetadata metadata_;
};

/// frames x features in, frames x output_size out (fewer frames if the stack
/// contains time-reducing convolution or pooling).
MatrixD nn_predict(const NetworkModel& model, const MatrixD& sequence);

}  // namespace mirkit::ml
