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

#include "viewadj/dense_net.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "viewadj/rng.hpp"

namespace viewadj {

ImageBuffer prepare_input(const ImageBuffer& image, const TrunkDescriptor& trunk) {
  ImageBuffer out = resize(image, trunk.input_side, trunk.input_side);
  if (trunk.channels == 3) return to_rgb(out);
  if (out.channels() != trunk.channels) {
    throw std::invalid_argument("prepare_input: cannot convert RGB to a single channel");
  }
  return out;
}

Eigen::VectorXd encode_input(const ImageBuffer& image, const TrunkDescriptor& trunk) {
  if (image.width() != trunk.input_side || image.height() != trunk.input_side ||
      image.channels() != trunk.channels) {
    throw std::invalid_argument("encode_input: image is " + std::to_string(image.width()) +
                                "x" + std::to_string(image.height()) + "x" +
                                std::to_string(image.channels()) + ", trunk expects " +
                                std::to_string(trunk.input_side) + "x" +
                                std::to_string(trunk.input_side) + "x" +
                                std::to_string(trunk.channels));
  }
  const auto data = image.data();
  Eigen::VectorXd v(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) v[static_cast<Eigen::Index>(i)] = data[i] - 0.5;
  return v;
}

Eigen::MatrixXd encode_batch(std::span<const ImageBuffer> images, const TrunkDescriptor& trunk) {
  Eigen::MatrixXd x(trunk.input_dim(), static_cast<Eigen::Index>(images.size()));
  for (std::size_t i = 0; i < images.size(); ++i) {
    x.col(static_cast<Eigen::Index>(i)) = encode_input(images[i], trunk);
  }
  return x;
}

DenseNet::DenseNet(TrunkDescriptor trunk, int out_dim)
    : trunk_(std::move(trunk)), out_dim_(out_dim) {
  if (out_dim <= 0 || trunk_.input_side <= 0 ||
      (trunk_.channels != 1 && trunk_.channels != 3)) {
    throw std::invalid_argument("DenseNet: invalid shape");
  }
  std::size_t offset = 0;
  int in = trunk_.input_dim();
  auto add = [&](int out) {
    if (out <= 0) throw std::invalid_argument("DenseNet: layer width must be positive");
    layers_.push_back({in, out, offset});
    offset += static_cast<std::size_t>(in) * out + static_cast<std::size_t>(out);
    in = out;
  };
  for (int width : trunk_.hidden) add(width);
  add(out_dim);
  params_.assign(offset, 0.0);
}

Eigen::Map<const Eigen::MatrixXd> DenseNet::weights(const Layer& l) const {
  return {params_.data() + l.offset, l.out, l.in};
}

Eigen::Map<const Eigen::VectorXd> DenseNet::bias(const Layer& l) const {
  return {params_.data() + l.offset + static_cast<std::size_t>(l.in) * l.out, l.out};
}

void DenseNet::init_random(std::uint64_t seed, double out_scale) {
  Rng rng(seed);
  auto normal = [&rng] {
    // Box-Muller; the platform-independent uniform keeps init reproducible.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  std::fill(params_.begin(), params_.end(), 0.0);
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    double stddev = std::sqrt(2.0 / l.in);
    if (li + 1 == layers_.size()) stddev *= out_scale;
    const std::size_t n = static_cast<std::size_t>(l.in) * l.out;
    for (std::size_t i = 0; i < n; ++i) params_[l.offset + i] = stddev * normal();
  }
}

std::vector<std::uint8_t> DenseNet::weight_mask() const {
  std::vector<std::uint8_t> mask(params_.size(), 0);
  for (const Layer& l : layers_) {
    const std::size_t n = static_cast<std::size_t>(l.in) * l.out;
    std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(l.offset), n, 1);
  }
  return mask;
}

Eigen::MatrixXd DenseNet::forward(const Eigen::MatrixXd& x, Cache* cache) const {
  if (x.rows() != trunk_.input_dim()) {
    throw std::invalid_argument("DenseNet::forward: input dimension mismatch");
  }
  if (cache) {
    cache->input = x;
    cache->hidden.clear();
  }
  Eigen::MatrixXd a = x;
  for (std::size_t li = 0; li + 1 < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    Eigen::MatrixXd z = weights(l) * a;
    z.colwise() += bias(l);
    a = z.cwiseMax(0.0);
    if (cache) cache->hidden.push_back(a);
  }
  const Layer& head = layers_.back();
  Eigen::MatrixXd out = weights(head) * a;
  out.colwise() += bias(head);
  return out;
}

void DenseNet::backward(const Cache& cache, const Eigen::MatrixXd& d_out,
                        std::span<double> grad) const {
  if (grad.size() != params_.size()) {
    throw std::invalid_argument("DenseNet::backward: gradient size mismatch");
  }
  Eigen::MatrixXd delta = d_out;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const Layer& l = layers_[li];
    const Eigen::MatrixXd& below = li == 0 ? cache.input : cache.hidden[li - 1];
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + l.offset, l.out, l.in);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + l.offset + static_cast<std::size_t>(l.in) * l.out,
                                   l.out);
    gw.noalias() += delta * below.transpose();
    gb += delta.rowwise().sum();
    if (li == 0) break;
    Eigen::MatrixXd up = weights(l).transpose() * delta;
    // ReLU derivative: pass gradient only where the activation was positive.
    delta = (below.array() > 0.0).select(up, 0.0);
  }
}

}  // namespace viewadj
