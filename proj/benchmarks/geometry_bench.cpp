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


#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "viewadj/evaluation.hpp"
#include "viewadj/geometry.hpp"
#include "viewadj/rng.hpp"

namespace viewadj {
namespace {

std::vector<ViewBox> random_boxes(std::size_t n) {
  Rng rng(1);
  std::vector<ViewBox> out(n);
  for (auto& b : out) {
    b = {rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8), rng.uniform(0.1, 0.6),
         rng.uniform(0.1, 0.6), rng.uniform(-std::numbers::pi / 4, std::numbers::pi / 4)};
  }
  return out;
}

void BM_RotatedIou(benchmark::State& state) {
  const auto boxes = random_boxes(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rotated_iou(boxes[i % 1024], boxes[(i + 1) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_RotatedIou);

void BM_PerturbationRoundTrip(benchmark::State& state) {
  const auto boxes = random_boxes(1024);
  const Perturbation p{0.0, 0.0, -0.3, 0.0};
  const Perturbation inv = invert_single_axis(p);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_perturbation(apply_perturbation(boxes[i++ % 1024], p), inv));
  }
}
BENCHMARK(BM_PerturbationRoundTrip);

void BM_RocAuc(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> pos(static_cast<std::size_t>(state.range(0)));
  std::vector<double> neg(pos.size());
  for (double& v : pos) v = rng.uniform();
  for (double& v : neg) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(pos, neg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RocAuc)->Range(64, 1 << 14)->Complexity();

}  // namespace
}  // namespace viewadj

BENCHMARK_MAIN();
