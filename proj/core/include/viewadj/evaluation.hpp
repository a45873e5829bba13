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

#include <array>
#include <span>
#include <vector>

#include "viewadj/adjuster.hpp"
#include "viewadj/geometry.hpp"
#include "viewadj/synthesis.hpp"

namespace viewadj {

/// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
/// Throws std::invalid_argument unless both classes are present.
double roc_auc(std::span<const double> positive_scores, std::span<const double> negative_scores);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// ROC points from (0,0) to (1,1), one per distinct score (descending).
std::vector<RocPoint> roc_curve(std::span<const double> positive_scores,
                                std::span<const double> negative_scores);

/// Trapezoidal area under a ROC curve.
double trapezoid_auc(std::span<const RocPoint> curve);

/// Threshold t such that "score > t" admits at most floor(target * n) of the
/// n negative scores (exactly that many when they are tie-free).
double threshold_at_fpr(std::span<const double> negative_scores, double target_fpr = 0.3);

inline constexpr std::size_t kNumClasses = kNumKinds + 1;  // 8 kinds + none

struct MetricsReport {
  std::size_t sample_count = 0;
  std::size_t positive_count = 0;
  double auc = 0.0;
  double fpr_target = 0.3;
  double fpr_actual = 0.0;
  double threshold = 0.0;
  double tpr = 0.0;
  std::array<double, kNumKinds> f1_per_kind{};
  /// False when a kind appears neither in labels nor in predictions.
  std::array<bool, kNumKinds> kind_present{};
  double mean_iou = 0.0;
  /// Over adjust-labeled samples: argmax kind equals the label kind.
  double kind_accuracy = 0.0;
  /// Rows: predicted class; columns: ground truth; rows normalized.
  std::array<std::array<double, kNumClasses>, kNumClasses> confusion{};
  KindCounts label_counts{};

  bool operator==(const MetricsReport&) const = default;
};

struct EvalItem {
  Suggestion label;
  ViewBox sample_box;
  ViewBox best_crop;
};

struct ModelOutput {
  double probability = 0.0;
  /// Top kind and its magnitude, irrespective of the threshold.
  Adjustment adjustment;
};

/// Metrics at the threshold that meets target_fpr on these outputs. Throws
/// std::invalid_argument if sizes differ or a label class is missing.
MetricsReport evaluate_predictions(std::span<const ModelOutput> outputs,
                                   std::span<const EvalItem> items, double target_fpr = 0.3);

ModelOutput model_output(const RawHeads& heads);

/// Runs the model on each sample view, then evaluate_predictions.
MetricsReport evaluate(const AdjusterModel& model, const std::vector<LabeledSample>& dataset,
                       double target_fpr = 0.3);

std::vector<EvalItem> eval_items(const std::vector<LabeledSample>& dataset);

}  // namespace viewadj
