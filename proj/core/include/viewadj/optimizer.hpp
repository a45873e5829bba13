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

#include <cstdint>
#include <span>
#include <vector>

namespace viewadj {

struct AdamConfig {
  double learning_rate = 2e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// L2 coefficient added to the gradient of masked (weight) entries.
  double weight_decay = 5e-4;
};

class Adam {
 public:
  Adam(std::size_t n, AdamConfig cfg, std::vector<std::uint8_t> decay_mask = {});

  void step(std::span<double> params, std::span<const double> grad);
  std::uint64_t steps() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<std::uint8_t> decay_mask_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

}  // namespace viewadj
