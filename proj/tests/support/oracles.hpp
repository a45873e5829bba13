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

// Independent reference implementations used as test oracles. None of these
// call the library routine they check.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "viewadj/adjuster.hpp"
#include "viewadj/geometry.hpp"
#include "viewadj/image.hpp"
#include "viewadj/rng.hpp"
#include "viewadj/scorer.hpp"

namespace viewadj::testing {

/// Corners via an explicit rotation matrix times half-extent offsets.
std::array<Point, 4> corners_by_matrix(const ViewBox& b);

/// IoU by uniform sampling of the joint bounding rectangle.
double monte_carlo_iou(const ViewBox& a, const ViewBox& b, int samples, Rng& rng);

/// Counts every (pos, neg) pair.
double exhaustive_auc(std::span<const double> pos, std::span<const double> neg);

/// Scores the original and each of the 72 candidates one at a time in the
/// canonical order, building candidates from first principles.
Suggestion brute_force_pseudo_label(const CompositionScorer& scorer, const ImageBuffer& image,
                                    double margin);

/// Returns the same score for every view.
class ConstantScorer : public CompositionScorer {
 public:
  explicit ConstantScorer(double v) : v_(v) {}
  std::vector<double> score_views(std::span<const ImageBuffer> views) const override {
    return std::vector<double>(views.size(), v_);
  }

 private:
  double v_;
};

/// Logistic score of "bright mass near the center" minus a zero-pixel
/// penalty. Optional quantization makes ties common.
class BrightCenterScorer : public CompositionScorer {
 public:
  struct Params {
    double center_weight = 8.0;
    double zero_penalty = 6.0;
    double bias = -2.0;
    double sigma = 0.25;  // Gaussian window, fraction of view size
    double quantum = 0.0;
  };
  BrightCenterScorer() = default;
  explicit BrightCenterScorer(Params p) : p_(p) {}
  static BrightCenterScorer random(Rng& rng);
  /// Steeper random scorers that often clear a 0.2 improvement margin.
  static BrightCenterScorer decisive(Rng& rng);

  double score_one(const ImageBuffer& view) const;
  std::vector<double> score_views(std::span<const ImageBuffer> views) const override;

 private:
  Params p_;
};

/// Hinge mean with each view scored one at a time.
double direct_ranking_term(const ScorerModel& m, const std::vector<RankPair>& pairs,
                           double delta);

/// Weighted adjuster loss from 17 raw outputs: -log p(y), -log softmax(kind)
/// and |unit prediction - unit label| for the labeled kind.
double reference_adjuster_loss(std::span<const double> z, const Suggestion& label, double w);

/// Loss value plus a signature of every piecewise branch taken (ReLU masks,
/// hinge activity, absolute-value signs).
struct Probe {
  double loss = 0.0;
  std::vector<std::uint8_t> pattern;
};

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // a branch flipped between the two evaluations
};

/// Central differences at the given coordinates compared to `analytic`.
/// Relative error is |a - n| / max(|a|, |n|, 1e-6).
GradCheck finite_difference_check(const std::function<Probe()>& f, std::span<double> params,
                                  std::span<const double> analytic,
                                  std::span<const std::size_t> coords, double h = 1e-4);

/// ReLU activity bits of every hidden unit in a forward cache.
void append_relu_pattern(const DenseNet::Cache& cache, std::vector<std::uint8_t>& out);

/// `n_random` distinct random coordinates plus every coordinate from
/// `tail_from` on (the output layer), sorted.
std::vector<std::size_t> gradcheck_coords(std::size_t total, std::size_t tail_from,
                                          std::size_t n_random, Rng& rng);

}  // namespace viewadj::testing
