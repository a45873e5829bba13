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

#include "viewadj/adjuster.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "viewadj/errors.hpp"

namespace viewadj {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::MatrixXd encode_samples(const std::vector<LabeledSample>& samples,
                               const TrunkDescriptor& trunk) {
  Eigen::MatrixXd x(trunk.input_dim(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].view.empty()) {
      throw std::invalid_argument("train_adjuster: sample without a materialized view");
    }
    x.col(static_cast<Eigen::Index>(i)) = encode_input(prepare_input(samples[i].view, trunk), trunk);
  }
  return x;
}

struct Source {
  Eigen::MatrixXd x;
  std::vector<Suggestion> labels;
  std::vector<double> weights;  // per sample
};

Source make_source(const std::vector<LabeledSample>& samples, const TrunkDescriptor& trunk,
                   ClassWeighting weighting) {
  Source s;
  if (samples.empty()) return s;
  s.x = encode_samples(samples, trunk);
  for (const auto& smp : samples) s.labels.push_back(smp.label);
  std::array<double, kNumKinds + 1> cw;
  cw.fill(1.0);
  if (weighting == ClassWeighting::InverseFrequency) cw = class_weights(s.labels);
  for (const auto& l : s.labels) s.weights.push_back(cw[label_index(l)]);
  return s;
}

// Draws a batch with replacement and returns the objective (scaled).
double source_step(const AdjusterModel& model, const Source& src, int batch, double scale,
                   Rng& rng, std::span<double> grad) {
  Eigen::MatrixXd x(src.x.rows(), batch);
  std::vector<Suggestion> labels(static_cast<std::size_t>(batch));
  std::vector<double> weights(static_cast<std::size_t>(batch));
  for (int b = 0; b < batch; ++b) {
    const std::size_t i = rng.index(src.labels.size());
    x.col(b) = src.x.col(static_cast<Eigen::Index>(i));
    labels[static_cast<std::size_t>(b)] = src.labels[i];
    weights[static_cast<std::size_t>(b)] = src.weights[i];
  }
  return adjuster_objective(model, x, labels, weights, grad, scale);
}

}  // namespace

double magnitude_from_unit(AdjustmentKind kind, double u) {
  const MagnitudeRange r = magnitude_range(kind);
  return std::clamp(r.lo + (r.hi - r.lo) * u, r.lo, r.hi);
}

double magnitude_to_unit(AdjustmentKind kind, double magnitude) {
  const MagnitudeRange r = magnitude_range(kind);
  return (magnitude - r.lo) / (r.hi - r.lo);
}

RawHeads heads_from_logits(std::span<const double> logits) {
  if (logits.size() != static_cast<std::size_t>(kAdjusterOutputs)) {
    throw std::invalid_argument("heads_from_logits: expected 17 outputs");
  }
  RawHeads h;
  h.suggestion_logit = logits[kSuggestionRow];
  h.suggestion_probability = sigmoid(h.suggestion_logit);
  double zmax = logits[kAdjustmentRow];
  for (std::size_t k = 0; k < kNumKinds; ++k) zmax = std::max(zmax, logits[kAdjustmentRow + k]);
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    h.adjustment_logits[k] = logits[kAdjustmentRow + k];
    h.distribution[k] = std::exp(h.adjustment_logits[k] - zmax);
    sum += h.distribution[k];
  }
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    h.distribution[k] /= sum;
    h.magnitude_logits[k] = logits[kMagnitudeRow + k];
    h.magnitude_unit[k] = sigmoid(h.magnitude_logits[k]);
    h.magnitudes[k] = magnitude_from_unit(kAllKinds[k], h.magnitude_unit[k]);
  }
  return h;
}

AdjusterModel::AdjusterModel(TrunkDescriptor trunk) : net_(std::move(trunk), kAdjusterOutputs) {}

AdjusterModel::AdjusterModel(DenseNet net) : net_(std::move(net)) {
  if (net_.out_dim() != kAdjusterOutputs) {
    throw std::invalid_argument("AdjusterModel: network must have 17 outputs");
  }
}

RawHeads AdjusterModel::predict(const ImageBuffer& image) const {
  const Eigen::MatrixXd z = net_.forward(encode_input(image, trunk()));
  return heads_from_logits({z.data(), static_cast<std::size_t>(z.rows())});
}

std::vector<RawHeads> AdjusterModel::predict_batch(std::span<const ImageBuffer> images) const {
  std::vector<RawHeads> out;
  if (images.empty()) return out;
  const Eigen::MatrixXd z = net_.forward(encode_batch(images, trunk()));
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    out.push_back(heads_from_logits({z.col(c).data(), static_cast<std::size_t>(z.rows())}));
  }
  return out;
}

AdjusterLoss adjuster_loss(std::span<const double> logits, const Suggestion& label,
                           double class_weight, std::span<double> d_logits) {
  if (logits.size() != static_cast<std::size_t>(kAdjusterOutputs) ||
      (!d_logits.empty() && d_logits.size() != logits.size())) {
    throw std::invalid_argument("adjuster_loss: expected 17 outputs");
  }
  const bool want_grad = !d_logits.empty();
  if (want_grad) std::fill(d_logits.begin(), d_logits.end(), 0.0);
  const double y = label.adjust() ? 1.0 : 0.0;
  const double w = class_weight;
  AdjusterLoss L;

  const double z0 = logits[kSuggestionRow];
  L.suggestion = softplus(z0) - y * z0;
  if (want_grad) d_logits[kSuggestionRow] = w * (sigmoid(z0) - y);

  if (label.adjust()) {
    const std::size_t k = kind_index(label.adjustment->kind);
    L.adjustment_head_active = true;
    L.magnitude_output = static_cast<int>(k);

    double zmax = logits[kAdjustmentRow];
    for (std::size_t j = 0; j < kNumKinds; ++j) zmax = std::max(zmax, logits[kAdjustmentRow + j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < kNumKinds; ++j) sum += std::exp(logits[kAdjustmentRow + j] - zmax);
    L.adjustment = zmax + std::log(sum) - logits[kAdjustmentRow + k];
    if (want_grad) {
      for (std::size_t j = 0; j < kNumKinds; ++j) {
        const double q = std::exp(logits[kAdjustmentRow + j] - zmax) / sum;
        d_logits[kAdjustmentRow + j] = w * (q - (j == k ? 1.0 : 0.0));
      }
    }

    const double u_pred = sigmoid(logits[kMagnitudeRow + k]);
    const double u_true = magnitude_to_unit(label.adjustment->kind, label.adjustment->magnitude);
    const double r = u_pred - u_true;
    L.magnitude = std::abs(r);
    if (want_grad) {
      const double sign = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
      d_logits[kMagnitudeRow + k] = w * sign * u_pred * (1.0 - u_pred);
    }
  }
  L.total = w * (L.suggestion + L.adjustment + L.magnitude);
  return L;
}

std::array<double, kNumKinds + 1> class_weights(std::span<const Suggestion> labels) {
  std::array<double, kNumKinds + 1> w{};
  if (labels.empty()) throw std::invalid_argument("class_weights: no labels");
  std::array<std::size_t, kNumKinds + 1> counts{};
  for (const auto& l : labels) ++counts[label_index(l)];
  double sum = 0.0;
  int present = 0;
  for (std::size_t c = 0; c < w.size(); ++c) {
    if (counts[c] == 0) continue;
    w[c] = 1.0 / static_cast<double>(counts[c]);
    sum += w[c];
    ++present;
  }
  for (std::size_t c = 0; c < w.size(); ++c) {
    if (counts[c] == 0) {
      spdlog::warn("class_weights: class {} absent; weight 0",
                   c == kNoneIndex ? std::string_view("none") : kind_name(kAllKinds[c]));
      continue;
    }
    w[c] *= present / sum;
  }
  return w;
}

double adjuster_objective(const AdjusterModel& model, const Eigen::MatrixXd& x,
                          std::span<const Suggestion> labels, std::span<const double> weights,
                          std::span<double> grad, double scale) {
  const auto n = x.cols();
  if (labels.size() != static_cast<std::size_t>(n) || weights.size() != labels.size()) {
    throw std::invalid_argument("adjuster_objective: batch size mismatch");
  }
  if (n == 0) return 0.0;
  DenseNet::Cache cache;
  const bool want_grad = !grad.empty();
  const Eigen::MatrixXd z = model.net().forward(x, want_grad ? &cache : nullptr);
  Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(kAdjusterOutputs, n);
  const double norm = scale / static_cast<double>(n);
  double acc = 0.0;
  std::array<double, kAdjusterOutputs> d{};
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto i = static_cast<std::size_t>(c);
    const AdjusterLoss L = adjuster_loss({z.col(c).data(), static_cast<std::size_t>(z.rows())},
                                         labels[i], weights[i],
                                         want_grad ? std::span<double>(d) : std::span<double>());
    acc += L.total;
    if (want_grad) {
      for (int r = 0; r < kAdjusterOutputs; ++r) d_out(r, c) = norm * d[static_cast<std::size_t>(r)];
    }
  }
  if (want_grad) model.net().backward(cache, d_out, grad);
  return norm * acc;
}

AdjusterTrainResult train_adjuster(const std::vector<LabeledSample>& labeled,
                                   const std::vector<LabeledSample>& pseudo,
                                   const AdjusterTrainConfig& cfg, const TrunkDescriptor& trunk) {
  if (labeled.empty()) throw std::invalid_argument("train_adjuster: labeled set is empty");
  if (cfg.labeled_batch < 1 || cfg.pseudo_batch < 1 || cfg.pseudo_weight < 0.0) {
    throw std::invalid_argument("train_adjuster: invalid configuration");
  }
  const Source lab = make_source(labeled, trunk, cfg.weighting);
  const Source pse = make_source(pseudo, trunk, cfg.weighting);

  AdjusterTrainResult result{AdjusterModel(trunk), {}};
  DenseNet& net = result.model.net();
  Rng rng(cfg.seed);
  net.init_random(rng.next_u64());
  Rng lab_rng = rng.fork();
  Rng pse_rng = rng.fork();
  Adam adam(net.parameter_count(), cfg.adam, net.weight_mask());
  ParamVector grad(net.parameter_count());

  result.trace.reserve(static_cast<std::size_t>(cfg.steps));
  for (int step = 0; step < cfg.steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    AdjusterStepLoss loss;
    loss.labeled = source_step(result.model, lab, cfg.labeled_batch, 1.0, lab_rng, grad);
    if (!pse.labels.empty()) {
      loss.pseudo =
          source_step(result.model, pse, cfg.pseudo_batch, cfg.pseudo_weight, pse_rng, grad);
    }
    if (!std::isfinite(loss.labeled) || !std::isfinite(loss.pseudo)) {
      throw TrainingDiverged(fmt::format("adjuster training diverged at step {}: labeled={} "
                                         "pseudo={}",
                                         step, loss.labeled, loss.pseudo));
    }
    adam.step(net.parameters(), grad);
    result.trace.push_back(loss);
    if ((step + 1) % 500 == 0) {
      spdlog::debug("adjuster step {}: labeled={:.5f} pseudo={:.5f}", step + 1, loss.labeled,
                    loss.pseudo);
    }
  }
  return result;
}

Suggestion suggestion_from_heads(const RawHeads& heads, double threshold) {
  if (!(heads.suggestion_probability > threshold)) return Suggestion::none();
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumKinds; ++k) {
    if (heads.distribution[k] > heads.distribution[best]) best = k;
  }
  return Suggestion::make(kAllKinds[best], heads.magnitudes[best]);
}

Suggestion infer_suggestion(const AdjusterModel& model, const ImageBuffer& image,
                            double threshold) {
  return suggestion_from_heads(model.predict(prepare_input(image, model.trunk())), threshold);
}

std::vector<TrajectoryStep> refine_iteratively(const SuggestionFn& suggest,
                                               const ImageBuffer& source, ViewBox viewport,
                                               int max_steps, int view_size) {
  if (max_steps < 0) throw std::invalid_argument("refine_iteratively: max_steps must be >= 0");
  std::vector<TrajectoryStep> trajectory;
  for (int step = 0;; ++step) {
    const Suggestion s = suggest(extract_view(source, viewport, view_size, view_size));
    trajectory.push_back({viewport, s});
    if (!s.adjust() || step == max_steps) break;
    viewport = apply_suggestion(viewport, s);
  }
  return trajectory;
}

std::vector<TrajectoryStep> refine_iteratively(const AdjusterModel& model,
                                               const ImageBuffer& source, ViewBox viewport,
                                               int max_steps, double threshold, int view_size) {
  return refine_iteratively(
      [&](const ImageBuffer& view) { return infer_suggestion(model, view, threshold); }, source,
      viewport, max_steps, view_size);
}

}  // namespace viewadj
