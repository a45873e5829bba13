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

#include "viewadj/dense_net.hpp"
#include "viewadj/optimizer.hpp"
#include "viewadj/synthesis.hpp"

namespace viewadj {

/// Anything that rates the composition of candidate views in (0, 1).
class CompositionScorer {
 public:
  virtual ~CompositionScorer() = default;
  /// Views may have any size; implementations resize as needed.
  virtual std::vector<double> score_views(std::span<const ImageBuffer> views) const = 0;
};

/// Composition scoring model: dense trunk with a single logistic output.
class ScorerModel : public CompositionScorer {
 public:
  explicit ScorerModel(TrunkDescriptor trunk = {});
  explicit ScorerModel(DenseNet net);

  const DenseNet& net() const { return net_; }
  DenseNet& net() { return net_; }
  const TrunkDescriptor& trunk() const { return net_.trunk(); }

  /// Requires an image of exactly the trunk input shape.
  double score(const ImageBuffer& image) const;
  std::vector<double> score_batch(std::span<const ImageBuffer> images) const;

  std::vector<double> score_views(std::span<const ImageBuffer> views) const override;

 private:
  DenseNet net_;
};

/// max(0, delta + s_n - s_p).
double ranking_loss(double s_p, double s_n, double delta);

struct ScorerTrainConfig {
  double delta = 0.1;
  int n_scored = 16;
  int k_bestcrop = 16;
  int p_unlabeled = 16;
  AdamConfig adam{};
  int steps = 1000;
  std::uint64_t seed = 0;
  int view_size = 64;
  bool augment = true;
  AugmentConfig augment_cfg{};
  /// Mini-batch size for the regression baseline.
  int regression_batch = 32;
};

struct ScoredSource {
  ImageBuffer image;
  CropAnnotation annotation;  // scored_crops must hold >= 2 entries
};

struct BestCropSource {
  ImageBuffer image;
  ViewBox best_crop;
};

struct ScorerData {
  std::vector<ScoredSource> scored;
  std::vector<BestCropSource> bestcrop;
  std::vector<ImageBuffer> unlabeled;  // well-composed images
};

struct LossTerms {
  double scored = 0.0;
  double bestcrop = 0.0;
  double unlabeled = 0.0;
  double total() const { return scored + bestcrop + unlabeled; }
};

struct PairBatch {
  std::vector<RankPair> scored;
  std::vector<RankPair> bestcrop;
  std::vector<RankPair> unlabeled;
};

/// One training step's pairs: N(N-1)/2 scored pairs from one random image,
/// K best-crop pairs, P unlabeled pairs. With augmentation enabled, both
/// members of labeled pairs and the better member of unlabeled pairs get a
/// random zero-border augmentation.
PairBatch assemble_scorer_batch(const ScorerData& data, const ScorerTrainConfig& cfg, Rng& rng);

/// Mean ranking loss over a pair list; 0 for an empty list.
double ranking_term(const ScorerModel& model, const std::vector<RankPair>& pairs, double delta);

/// L = L_sc + L_bc + L_wc. When grad is non-empty, accumulates dL/dparams.
LossTerms ranking_objective(const ScorerModel& model, const PairBatch& batch, double delta,
                            std::span<double> grad = {});

struct ScorerTrainResult {
  ScorerModel model;
  std::vector<LossTerms> trace;
};

/// Throws TrainingDiverged on a non-finite loss and std::invalid_argument if
/// all data sources are empty.
ScorerTrainResult train_scorer(const ScorerData& data, const ScorerTrainConfig& cfg,
                               const TrunkDescriptor& trunk = {});

// Mean-opinion-score regression baseline.

struct MosSample {
  ImageBuffer image;
  double target = 0.0;  // normalized to [0, 1]
};

/// Mean squared error of the score against targets; accumulates the gradient
/// when grad is non-empty.
double regression_objective(const ScorerModel& model, std::span<const MosSample> samples,
                            std::span<double> grad = {});

struct RegressionTrainResult {
  ScorerModel model;
  std::vector<double> trace;
};

RegressionTrainResult train_scorer_regression(const std::vector<MosSample>& data,
                                              const ScorerTrainConfig& cfg,
                                              const TrunkDescriptor& trunk = {});

}  // namespace viewadj
