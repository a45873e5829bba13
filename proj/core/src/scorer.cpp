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

#include "viewadj/scorer.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "viewadj/errors.hpp"

namespace viewadj {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Encodes better members first, then worse members.
Eigen::MatrixXd encode_pairs(const std::vector<const RankPair*>& pairs,
                             const TrunkDescriptor& trunk) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd x(trunk.input_dim(), 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.col(i) = encode_input(prepare_input(pairs[i]->better, trunk), trunk);
    x.col(n + i) = encode_input(prepare_input(pairs[i]->worse, trunk), trunk);
  }
  return x;
}

}  // namespace

ScorerModel::ScorerModel(TrunkDescriptor trunk) : net_(std::move(trunk), 1) {}

ScorerModel::ScorerModel(DenseNet net) : net_(std::move(net)) {
  if (net_.out_dim() != 1) throw std::invalid_argument("ScorerModel: network must have 1 output");
}

double ScorerModel::score(const ImageBuffer& image) const {
  Eigen::MatrixXd x = encode_input(image, trunk());
  return sigmoid(net_.forward(x)(0, 0));
}

std::vector<double> ScorerModel::score_batch(std::span<const ImageBuffer> images) const {
  if (images.empty()) return {};
  const Eigen::MatrixXd z = net_.forward(encode_batch(images, trunk()));
  std::vector<double> out(images.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid(z(0, static_cast<Eigen::Index>(i)));
  return out;
}

std::vector<double> ScorerModel::score_views(std::span<const ImageBuffer> views) const {
  std::vector<ImageBuffer> prepared;
  prepared.reserve(views.size());
  for (const auto& v : views) prepared.push_back(prepare_input(v, trunk()));
  return score_batch(prepared);
}

double ranking_loss(double s_p, double s_n, double delta) {
  return std::max(0.0, delta + s_n - s_p);
}

PairBatch assemble_scorer_batch(const ScorerData& data, const ScorerTrainConfig& cfg, Rng& rng) {
  PairBatch batch;
  const int vs = cfg.view_size;
  if (!data.scored.empty()) {
    const auto& src = data.scored[rng.index(data.scored.size())];
    batch.scored = pair_from_scored(src.image, src.annotation, cfg.n_scored, rng, vs);
  }
  if (!data.bestcrop.empty()) {
    for (int k = 0; k < cfg.k_bestcrop; ++k) {
      const auto& src = data.bestcrop[rng.index(data.bestcrop.size())];
      if (auto p = pair_from_bestcrop(src.image, src.best_crop, rng, vs)) {
        batch.bestcrop.push_back(std::move(*p));
      }
    }
  }
  if (!data.unlabeled.empty()) {
    for (int k = 0; k < cfg.p_unlabeled; ++k) {
      batch.unlabeled.push_back(
          pair_from_unlabeled(data.unlabeled[rng.index(data.unlabeled.size())], rng, vs));
    }
  }
  if (cfg.augment) {
    for (auto* list : {&batch.scored, &batch.bestcrop}) {
      for (auto& p : *list) {
        p.better = augment_random(p.better, rng, cfg.augment_cfg);
        p.worse = augment_random(p.worse, rng, cfg.augment_cfg);
      }
    }
    for (auto& p : batch.unlabeled) p.better = augment_random(p.better, rng, cfg.augment_cfg);
  }
  return batch;
}

double ranking_term(const ScorerModel& model, const std::vector<RankPair>& pairs, double delta) {
  if (pairs.empty()) return 0.0;
  std::vector<const RankPair*> ptrs;
  for (const auto& p : pairs) ptrs.push_back(&p);
  const Eigen::MatrixXd z = model.net().forward(encode_pairs(ptrs, model.trunk()));
  const auto n = static_cast<Eigen::Index>(pairs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += ranking_loss(sigmoid(z(0, i)), sigmoid(z(0, n + i)), delta);
  }
  return acc / static_cast<double>(n);
}

LossTerms ranking_objective(const ScorerModel& model, const PairBatch& batch, double delta,
                            std::span<double> grad) {
  std::vector<const RankPair*> ptrs;
  std::vector<double> weight;  // 1 / |term| per pair
  std::vector<int> term;
  const std::vector<RankPair>* lists[3] = {&batch.scored, &batch.bestcrop, &batch.unlabeled};
  for (int t = 0; t < 3; ++t) {
    for (const auto& p : *lists[t]) {
      ptrs.push_back(&p);
      weight.push_back(1.0 / static_cast<double>(lists[t]->size()));
      term.push_back(t);
    }
  }
  LossTerms terms;
  if (ptrs.empty()) return terms;

  DenseNet::Cache cache;
  const bool want_grad = !grad.empty();
  const Eigen::MatrixXd z =
      model.net().forward(encode_pairs(ptrs, model.trunk()), want_grad ? &cache : nullptr);
  const auto n = static_cast<Eigen::Index>(ptrs.size());
  Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(1, 2 * n);
  double acc[3] = {0.0, 0.0, 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sp = sigmoid(z(0, i));
    const double sn = sigmoid(z(0, n + i));
    const double margin = delta + sn - sp;
    const std::size_t k = static_cast<std::size_t>(i);
    if (std::isnan(margin)) {
      acc[term[k]] += margin;  // surfaces as a non-finite loss
    } else if (margin > 0.0) {
      acc[term[k]] += weight[k] * margin;
      d_out(0, i) = -weight[k] * sp * (1.0 - sp);
      d_out(0, n + i) = weight[k] * sn * (1.0 - sn);
    }
  }
  terms.scored = acc[0];
  terms.bestcrop = acc[1];
  terms.unlabeled = acc[2];
  if (want_grad) model.net().backward(cache, d_out, grad);
  return terms;
}

ScorerTrainResult train_scorer(const ScorerData& data, const ScorerTrainConfig& cfg,
                               const TrunkDescriptor& trunk) {
  if (data.scored.empty() && data.bestcrop.empty() && data.unlabeled.empty()) {
    throw std::invalid_argument("train_scorer: all data sources are empty");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0) || cfg.n_scored < 2 || cfg.k_bestcrop < 1 ||
      cfg.p_unlabeled < 1) {
    throw std::invalid_argument("train_scorer: invalid configuration");
  }
  ScorerTrainResult result{ScorerModel(trunk), {}};
  DenseNet& net = result.model.net();
  Rng rng(cfg.seed);
  net.init_random(rng.next_u64());
  Adam adam(net.parameter_count(), cfg.adam, net.weight_mask());
  ParamVector grad(net.parameter_count());

  result.trace.reserve(static_cast<std::size_t>(cfg.steps));
  for (int step = 0; step < cfg.steps; ++step) {
    const PairBatch batch = assemble_scorer_batch(data, cfg, rng);
    std::fill(grad.begin(), grad.end(), 0.0);
    const LossTerms terms = ranking_objective(result.model, batch, cfg.delta, grad);
    if (!std::isfinite(terms.total())) {
      throw TrainingDiverged(fmt::format(
          "scorer training diverged at step {}: L_sc={} L_bc={} L_wc={}", step, terms.scored,
          terms.bestcrop, terms.unlabeled));
    }
    adam.step(net.parameters(), grad);
    if (!all_finite(net.parameters())) {
      throw TrainingDiverged(fmt::format("scorer training diverged at step {}: non-finite "
                                         "parameters", step));
    }
    result.trace.push_back(terms);
    if ((step + 1) % 500 == 0) {
      spdlog::debug("scorer step {}: L={:.5f}", step + 1, terms.total());
    }
  }
  return result;
}

double regression_objective(const ScorerModel& model, std::span<const MosSample> samples,
                            std::span<double> grad) {
  if (samples.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd x(model.trunk().input_dim(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.col(i) = encode_input(prepare_input(samples[static_cast<std::size_t>(i)].image,
                                          model.trunk()),
                            model.trunk());
  }
  DenseNet::Cache cache;
  const bool want_grad = !grad.empty();
  const Eigen::MatrixXd z = model.net().forward(x, want_grad ? &cache : nullptr);
  Eigen::MatrixXd d_out(1, n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = sigmoid(z(0, i));
    const double r = s - samples[static_cast<std::size_t>(i)].target;
    acc += r * r;
    d_out(0, i) = 2.0 * r * s * (1.0 - s) / static_cast<double>(n);
  }
  if (want_grad) model.net().backward(cache, d_out, grad);
  return acc / static_cast<double>(n);
}

RegressionTrainResult train_scorer_regression(const std::vector<MosSample>& data,
                                              const ScorerTrainConfig& cfg,
                                              const TrunkDescriptor& trunk) {
  if (data.empty()) throw std::invalid_argument("train_scorer_regression: no data");
  if (cfg.regression_batch < 1) {
    throw std::invalid_argument("train_scorer_regression: batch must be >= 1");
  }
  RegressionTrainResult result{ScorerModel(trunk), {}};
  DenseNet& net = result.model.net();
  Rng rng(cfg.seed);
  net.init_random(rng.next_u64());
  Adam adam(net.parameter_count(), cfg.adam, net.weight_mask());
  ParamVector grad(net.parameter_count());
  std::vector<MosSample> batch(static_cast<std::size_t>(cfg.regression_batch));
  for (int step = 0; step < cfg.steps; ++step) {
    for (auto& b : batch) b = data[rng.index(data.size())];
    std::fill(grad.begin(), grad.end(), 0.0);
    const double loss = regression_objective(result.model, batch, grad);
    if (!std::isfinite(loss)) {
      throw TrainingDiverged(fmt::format("regression training diverged at step {}", step));
    }
    adam.step(net.parameters(), grad);
    if (!all_finite(net.parameters())) {
      throw TrainingDiverged(fmt::format("regression training diverged at step {}", step));
    }
    result.trace.push_back(loss);
  }
  return result;
}

}  // namespace viewadj
