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
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "viewadj/dense_net.hpp"
#include "viewadj/optimizer.hpp"
#include "viewadj/synthesis.hpp"

namespace viewadj {

/// Output rows of the adjuster network.
inline constexpr int kSuggestionRow = 0;
inline constexpr int kAdjustmentRow = 1;                       // 8 logits
inline constexpr int kMagnitudeRow = 1 + static_cast<int>(kNumKinds);  // 8 regressors
inline constexpr int kAdjusterOutputs = 1 + 2 * static_cast<int>(kNumKinds);

struct RawHeads {
  double suggestion_logit = 0.0;
  double suggestion_probability = 0.5;
  std::array<double, kNumKinds> adjustment_logits{};
  std::array<double, kNumKinds> distribution{};
  /// Magnitude pre-activations, unit-scale outputs and mapped magnitudes.
  std::array<double, kNumKinds> magnitude_logits{};
  std::array<double, kNumKinds> magnitude_unit{};
  std::array<double, kNumKinds> magnitudes{};
};

/// Unit-scale value u in [0,1] maps to lo + (hi - lo) * u of the kind's range.
double magnitude_from_unit(AdjustmentKind kind, double u);
double magnitude_to_unit(AdjustmentKind kind, double magnitude);

/// Converts one column of network outputs into head values.
RawHeads heads_from_logits(std::span<const double> logits);

/// Shared trunk with suggestion, adjustment and magnitude heads.
class AdjusterModel {
 public:
  explicit AdjusterModel(TrunkDescriptor trunk = {});
  explicit AdjusterModel(DenseNet net);

  const DenseNet& net() const { return net_; }
  DenseNet& net() { return net_; }
  const TrunkDescriptor& trunk() const { return net_.trunk(); }

  /// Requires an image of exactly the trunk input shape.
  RawHeads predict(const ImageBuffer& image) const;
  std::vector<RawHeads> predict_batch(std::span<const ImageBuffer> images) const;

 private:
  DenseNet net_;
};

struct AdjusterLoss {
  double suggestion = 0.0;
  double adjustment = 0.0;
  double magnitude = 0.0;
  double total = 0.0;
  /// Mask report.
  bool adjustment_head_active = false;
  int magnitude_output = -1;  // kind index receiving magnitude gradient, -1 if none
};

/// w * (BCE(suggestion) + [adjust] CE(adjustment, kind) + [adjust] |u_kind - u_label|)
/// where u is the magnitude on the unit scale. d_logits (size 17), when
/// non-empty, receives d(loss)/d(logits); masked entries are exact zeros.
AdjusterLoss adjuster_loss(std::span<const double> logits, const Suggestion& label,
                           double class_weight, std::span<double> d_logits = {});

/// Inverse-frequency weights over 8 kinds + none (slot 8), normalized to
/// mean 1 over present classes; absent classes get 0 and a warning.
std::array<double, kNumKinds + 1> class_weights(std::span<const Suggestion> labels);

enum class ClassWeighting { InverseFrequency, Uniform };

struct AdjusterTrainConfig {
  int labeled_batch = 64;
  int pseudo_batch = 64;
  AdamConfig adam{};
  int steps = 5000;
  std::uint64_t seed = 0;
  ClassWeighting weighting = ClassWeighting::InverseFrequency;
  /// Scale of the pseudo-labeled term; 0 reproduces labeled-only training.
  double pseudo_weight = 1.0;
};

struct AdjusterStepLoss {
  double labeled = 0.0;
  double pseudo = 0.0;
};

struct AdjusterTrainResult {
  AdjusterModel model;
  std::vector<AdjusterStepLoss> trace;
};

/// Samples need materialized views (any size; resized to the trunk). Class
/// weights are computed per source. Throws TrainingDiverged on a non-finite
/// loss and std::invalid_argument if labeled is empty.
AdjusterTrainResult train_adjuster(const std::vector<LabeledSample>& labeled,
                                   const std::vector<LabeledSample>& pseudo,
                                   const AdjusterTrainConfig& cfg,
                                   const TrunkDescriptor& trunk = {});

/// Batch objective used by training: mean weighted loss over samples whose
/// encoded inputs are the columns of x. Accumulates the gradient if requested.
double adjuster_objective(const AdjusterModel& model, const Eigen::MatrixXd& x,
                          std::span<const Suggestion> labels, std::span<const double> weights,
                          std::span<double> grad = {}, double scale = 1.0);

/// Suggests only if the probability strictly exceeds the threshold; the kind
/// is the adjustment argmax (first on ties), the magnitude that kind's output.
Suggestion suggestion_from_heads(const RawHeads& heads, double threshold);

/// Resizes the image to the trunk and applies suggestion_from_heads.
Suggestion infer_suggestion(const AdjusterModel& model, const ImageBuffer& image,
                            double threshold);

struct TrajectoryStep {
  ViewBox viewport;
  Suggestion suggestion;  // produced at this viewport
};

using SuggestionFn = std::function<Suggestion(const ImageBuffer& view)>;

/// Extracts the viewport, asks for a suggestion, applies it, and repeats
/// until no adjustment or max_steps applied moves. The trajectory holds the
/// start plus every reached viewport (at most max_steps + 1 entries).
std::vector<TrajectoryStep> refine_iteratively(const SuggestionFn& suggest,
                                               const ImageBuffer& source, ViewBox viewport,
                                               int max_steps = 3, int view_size = 64);

std::vector<TrajectoryStep> refine_iteratively(const AdjusterModel& model,
                                               const ImageBuffer& source, ViewBox viewport,
                                               int max_steps, double threshold,
                                               int view_size = 64);

}  // namespace viewadj
