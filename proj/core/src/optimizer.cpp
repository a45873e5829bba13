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

#include "viewadj/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace viewadj {

Adam::Adam(std::size_t n, AdamConfig cfg, std::vector<std::uint8_t> decay_mask)
    : cfg_(cfg), decay_mask_(std::move(decay_mask)), m_(n, 0.0), v_(n, 0.0) {
  if (!decay_mask_.empty() && decay_mask_.size() != n) {
    throw std::invalid_argument("Adam: decay mask size mismatch");
  }
}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam::step: size mismatch");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  const bool all_decay = decay_mask_.empty();
  for (std::size_t i = 0; i < m_.size(); ++i) {
    double g = grad[i];
    if (all_decay || decay_mask_[i]) g += cfg_.weight_decay * params[i];
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g * g;
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
  }
}

}  // namespace viewadj
