// Copyright 2026 The viewadj Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <Eigen/StdVector>

#include <cstdint>
#include <span>
#include <vector>

#include "viewadj/image.hpp"

namespace viewadj {

/// Parameter and gradient storage. Eigen picks its vectorized loop peeling
/// from the runtime alignment, so aligned buffers keep results bit-identical
/// across instances.
using ParamVector = std::vector<double, Eigen::aligned_allocator<double>>;

/// Shape of the shared feature trunk: a square RGB input flattened into a
/// vector, followed by rectified dense layers.
struct TrunkDescriptor {
  int input_side = 32;
  int channels = 3;
  std::vector<int> hidden = {256, 64};

  int input_dim() const { return input_side * input_side * channels; }
  bool operator==(const TrunkDescriptor&) const = default;
};

/// Resizes (bilinear) and converts channels so the image fits the trunk.
ImageBuffer prepare_input(const ImageBuffer& image, const TrunkDescriptor& trunk);

/// Flattens an image into a trunk input column (values shifted to [-0.5, 0.5]).
/// Throws std::invalid_argument if the image does not match the trunk shape.
Eigen::VectorXd encode_input(const ImageBuffer& image, const TrunkDescriptor& trunk);

/// Columns are encoded inputs.
Eigen::MatrixXd encode_batch(std::span<const ImageBuffer> images, const TrunkDescriptor& trunk);

/// Multilayer perceptron: trunk layers with ReLU, then a linear output layer.
///
/// All parameters live in one contiguous vector; layer l stores its weight
/// matrix (column-major, out x in) followed by its bias.
class DenseNet {
 public:
  struct Cache {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> hidden;  // post-activation, one per trunk layer
  };

  DenseNet() = default;
  /// Zero-initialized parameters.
  DenseNet(TrunkDescriptor trunk, int out_dim);

  const TrunkDescriptor& trunk() const { return trunk_; }
  int out_dim() const { return out_dim_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  /// He-normal trunk weights, zero biases, output weights scaled by out_scale.
  void init_random(std::uint64_t seed, double out_scale = 0.1);

  /// 1 for weight entries, 0 for biases (weight decay applies to weights only).
  std::vector<std::uint8_t> weight_mask() const;

  /// x: input_dim x batch. Returns out_dim x batch pre-activations.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache = nullptr) const;

  /// Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Cache& cache, const Eigen::MatrixXd& d_out, std::span<double> grad) const;

 private:
  struct Layer {
    int in = 0;
    int out = 0;
    std::size_t offset = 0;  // weights at offset, bias at offset + in*out
  };

  Eigen::Map<const Eigen::MatrixXd> weights(const Layer& l) const;
  Eigen::Map<const Eigen::VectorXd> bias(const Layer& l) const;

  TrunkDescriptor trunk_;
  int out_dim_ = 0;
  std::vector<Layer> layers_;  // trunk layers then the output layer
  ParamVector params_;
};

}  // namespace viewadj
