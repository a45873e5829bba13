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

#include "viewadj/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace viewadj {

namespace {

void check_binary(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("roc: need at least one positive and one negative");
  }
}

}  // namespace

double roc_auc(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  check_binary(positive_scores, negative_scores);
  // Mann-Whitney U via average ranks.
  std::vector<std::pair<double, bool>> all;
  all.reserve(positive_scores.size() + negative_scores.size());
  for (double s : positive_scores) all.emplace_back(s, true);
  for (double s : negative_scores) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second) rank_sum += avg_rank;
    }
    i = j;
  }
  const auto npos = static_cast<double>(positive_scores.size());
  const auto nneg = static_cast<double>(negative_scores.size());
  return (rank_sum - npos * (npos + 1.0) / 2.0) / (npos * nneg);
}

std::vector<RocPoint> roc_curve(std::span<const double> positive_scores,
                                std::span<const double> negative_scores) {
  check_binary(positive_scores, negative_scores);
  std::vector<double> pos(positive_scores.begin(), positive_scores.end());
  std::vector<double> neg(negative_scores.begin(), negative_scores.end());
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  const auto npos = static_cast<double>(pos.size());
  const auto nneg = static_cast<double>(neg.size());
  std::vector<RocPoint> curve{{0.0, 0.0}};
  std::size_t ip = 0, in = 0;
  while (ip < pos.size() || in < neg.size()) {
    const double s = std::max(ip < pos.size() ? pos[ip] : std::numeric_limits<double>::lowest(),
                              in < neg.size() ? neg[in] : std::numeric_limits<double>::lowest());
    while (ip < pos.size() && pos[ip] == s) ++ip;
    while (in < neg.size() && neg[in] == s) ++in;
    curve.push_back({static_cast<double>(in) / nneg, static_cast<double>(ip) / npos});
  }
  return curve;
}

double trapezoid_auc(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

double threshold_at_fpr(std::span<const double> negative_scores, double target_fpr) {
  if (negative_scores.empty()) throw std::invalid_argument("threshold_at_fpr: no negatives");
  if (!(target_fpr >= 0.0 && target_fpr <= 1.0)) {
    throw std::invalid_argument("threshold_at_fpr: target must lie in [0, 1]");
  }
  std::vector<double> neg(negative_scores.begin(), negative_scores.end());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  const auto k = static_cast<std::size_t>(
      std::floor(target_fpr * static_cast<double>(neg.size()) + 1e-9));
  if (k >= neg.size()) return std::numeric_limits<double>::lowest();
  return neg[k];
}

ModelOutput model_output(const RawHeads& heads) {
  const Suggestion s = suggestion_from_heads(heads, -1.0);
  return {heads.suggestion_probability, *s.adjustment};
}

MetricsReport evaluate_predictions(std::span<const ModelOutput> outputs,
                                   std::span<const EvalItem> items, double target_fpr) {
  if (outputs.size() != items.size()) {
    throw std::invalid_argument("evaluate: outputs and items differ in size");
  }
  MetricsReport r;
  r.sample_count = items.size();
  r.fpr_target = target_fpr;

  std::vector<double> positives, negatives;
  for (std::size_t i = 0; i < items.size(); ++i) {
    (items[i].label.adjust() ? positives : negatives).push_back(outputs[i].probability);
    ++r.label_counts[label_index(items[i].label)];
  }
  r.positive_count = positives.size();
  r.auc = roc_auc(positives, negatives);
  r.threshold = threshold_at_fpr(negatives, target_fpr);

  std::array<std::array<double, kNumClasses>, kNumClasses> counts{};
  std::array<double, kNumKinds> tp{}, fp{}, fn{};
  double tp_all = 0.0, fp_all = 0.0, correct_kind = 0.0, iou_sum = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const EvalItem& it = items[i];
    const bool suggest = outputs[i].probability > r.threshold;
    const Suggestion pred = suggest ? Suggestion{outputs[i].adjustment} : Suggestion::none();
    const std::size_t truth = label_index(it.label);
    const std::size_t predicted = label_index(pred);
    counts[predicted][truth] += 1.0;

    if (it.label.adjust()) {
      if (suggest) tp_all += 1.0;
      if (outputs[i].adjustment.kind == it.label.adjustment->kind) correct_kind += 1.0;
    } else if (suggest) {
      fp_all += 1.0;
    }
    if (suggest) {
      if (predicted == truth) {
        tp[predicted] += 1.0;
      } else {
        fp[predicted] += 1.0;
        if (truth != kNoneIndex) fn[truth] += 1.0;
      }
    }
    iou_sum += rotated_iou(apply_suggestion(it.sample_box, pred), it.best_crop);
  }

  r.tpr = tp_all / static_cast<double>(r.positive_count);
  r.fpr_actual = fp_all / static_cast<double>(negatives.size());
  r.kind_accuracy = correct_kind / static_cast<double>(r.positive_count);
  r.mean_iou = iou_sum / static_cast<double>(items.size());
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    const double denom = 2.0 * tp[k] + fp[k] + fn[k];
    r.kind_present[k] = r.label_counts[k] > 0 || tp[k] + fp[k] > 0.0;
    r.f1_per_kind[k] = denom > 0.0 ? 2.0 * tp[k] / denom : 0.0;
  }
  for (std::size_t p = 0; p < kNumClasses; ++p) {
    double row = 0.0;
    for (double v : counts[p]) row += v;
    if (row == 0.0) continue;
    for (std::size_t t = 0; t < kNumClasses; ++t) r.confusion[p][t] = counts[p][t] / row;
  }
  return r;
}

std::vector<EvalItem> eval_items(const std::vector<LabeledSample>& dataset) {
  std::vector<EvalItem> items;
  items.reserve(dataset.size());
  for (const auto& s : dataset) items.push_back({s.label, s.meta.sample_box, s.meta.best_crop});
  return items;
}

MetricsReport evaluate(const AdjusterModel& model, const std::vector<LabeledSample>& dataset,
                       double target_fpr) {
  std::vector<ModelOutput> outputs;
  outputs.reserve(dataset.size());
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < dataset.size(); start += kChunk) {
    std::vector<ImageBuffer> batch;
    for (std::size_t i = start; i < std::min(dataset.size(), start + kChunk); ++i) {
      batch.push_back(prepare_input(dataset[i].view, model.trunk()));
    }
    for (const auto& h : model.predict_batch(batch)) outputs.push_back(model_output(h));
  }
  const auto items = eval_items(dataset);
  return evaluate_predictions(outputs, items, target_fpr);
}

}  // namespace viewadj
