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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "synthetic_scenes.hpp"
#include "viewadj/errors.hpp"
#include "viewadj/scorer.hpp"

namespace viewadj {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

ScorerTrainConfig small_config() {
  ScorerTrainConfig cfg;
  cfg.n_scored = 4;
  cfg.k_bestcrop = 4;
  cfg.p_unlabeled = 4;
  cfg.view_size = 32;
  return cfg;
}

TEST(RankingLoss, UnitValues) {
  EXPECT_DOUBLE_EQ(ranking_loss(0.5, 0.5, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(ranking_loss(0.9, 0.1, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(ranking_loss(0.3, 0.6, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(ranking_loss(0.9, 0.2, 0.1), 0.0);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double sp = rng.uniform(), sn = rng.uniform(), d = rng.uniform(0.01, 0.99);
    const double l = ranking_loss(sp, sn, d);
    EXPECT_GE(l, 0.0);
    EXPECT_EQ(l == 0.0, sp >= sn + d);
  }
}

TEST(ScorerModel, ZeroParamsScoreHalf) {
  const ScorerModel m;
  EXPECT_DOUBLE_EQ(m.score(ImageBuffer(32, 32, 3, 0.3f)), 0.5);
  const std::vector<ImageBuffer> views = {ImageBuffer(50, 40, 3, 0.1f)};
  EXPECT_DOUBLE_EQ(m.score_views(views)[0], 0.5);
  EXPECT_THROW(m.score(ImageBuffer(30, 32, 3)), std::invalid_argument);
}

class ScorerObjective : public ::testing::Test {
 protected:
  void SetUp() override {
    task_ = testing::make_task(11, 6, 64, 10);
    data_ = testing::scorer_data(task_, 12, 10, 48);
    model_.net().init_random(13, 1.0);
  }
  testing::ToyTask task_;
  ScorerData data_;
  ScorerModel model_;
};

TEST_F(ScorerObjective, DecomposesIntoTerms) {
  Rng rng(14);
  const ScorerTrainConfig cfg = small_config();
  for (int b = 0; b < 3; ++b) {
    const PairBatch batch = assemble_scorer_batch(data_, cfg, rng);
    EXPECT_EQ(batch.scored.size(), 6u);
    EXPECT_EQ(batch.unlabeled.size(), 4u);
    const LossTerms t = ranking_objective(model_, batch, 0.1);
    EXPECT_NEAR(t.scored, testing::direct_ranking_term(model_, batch.scored, 0.1), 1e-12);
    EXPECT_NEAR(t.bestcrop, testing::direct_ranking_term(model_, batch.bestcrop, 0.1), 1e-12);
    EXPECT_NEAR(t.unlabeled, testing::direct_ranking_term(model_, batch.unlabeled, 0.1), 1e-12);
    EXPECT_NEAR(t.total(), t.scored + t.bestcrop + t.unlabeled, 1e-12);
    EXPECT_NEAR(ranking_term(model_, batch.bestcrop, 0.1), t.bestcrop, 1e-12);
  }
}

TEST_F(ScorerObjective, GradientMatchesFiniteDifferences) {
  Rng rng(15);
  const PairBatch batch = assemble_scorer_batch(data_, small_config(), rng);
  std::vector<double> grad(model_.net().parameter_count(), 0.0);
  ranking_objective(model_, batch, 0.1, grad);

  std::vector<ImageBuffer> inputs;
  for (const auto* list : {&batch.scored, &batch.bestcrop, &batch.unlabeled}) {
    for (const auto& p : *list) {
      inputs.push_back(prepare_input(p.better, model_.trunk()));
      inputs.push_back(prepare_input(p.worse, model_.trunk()));
    }
  }
  const Eigen::MatrixXd x = encode_batch(inputs, model_.trunk());
  auto probe = [&] {
    testing::Probe pr;
    pr.loss = ranking_objective(model_, batch, 0.1).total();
    DenseNet::Cache c;
    const Eigen::MatrixXd z = model_.net().forward(x, &c);
    testing::append_relu_pattern(c, pr.pattern);
    for (Eigen::Index i = 0; i + 1 < z.cols(); i += 2) {
      pr.pattern.push_back(0.1 + sigmoid(z(0, i + 1)) - sigmoid(z(0, i)) > 0.0);
    }
    return pr;
  };
  const std::size_t n = model_.net().parameter_count();
  const auto coords = testing::gradcheck_coords(n, n - 65, 150, rng);
  const auto r = testing::finite_difference_check(probe, model_.net().parameters(), grad, coords);
  EXPECT_LT(r.max_rel_error, 1e-4);
  EXPECT_GT(r.checked, coords.size() * 9 / 10);
}

TEST_F(ScorerObjective, TrainingReducesLossAndIsDeterministic) {
  ScorerTrainConfig cfg = small_config();
  cfg.steps = 60;
  cfg.adam.learning_rate = 1e-3;
  cfg.seed = 3;
  const auto a = train_scorer(data_, cfg);
  const auto b = train_scorer(data_, cfg);
  ASSERT_EQ(a.trace.size(), 60u);
  EXPECT_TRUE(std::equal(a.model.net().parameters().begin(), a.model.net().parameters().end(),
                         b.model.net().parameters().begin()));
  double early = 0.0, late = 0.0;
  for (int i = 0; i < 15; ++i) early += a.trace[i].total();
  for (int i = 45; i < 60; ++i) late += a.trace[i].total();
  EXPECT_LT(late, early);
}

TEST_F(ScorerObjective, DivergenceIsReported) {
  ScorerTrainConfig cfg = small_config();
  cfg.steps = 20;
  ScorerData poisoned = data_;
  for (auto& img : poisoned.unlabeled) img.data()[0] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(train_scorer(poisoned, cfg), TrainingDiverged);
}

TEST(TrainScorer, LearnsCenteredDiskTask) {
  const auto task = testing::make_task(41, 40, 64, 12);
  const ScorerData data = testing::scorer_data(task, 42, 60, 48);
  ScorerTrainConfig cfg;
  cfg.n_scored = 6;
  cfg.k_bestcrop = 8;
  cfg.p_unlabeled = 8;
  cfg.steps = 2000;
  cfg.view_size = 32;
  cfg.adam.learning_rate = 1e-3;
  cfg.seed = 43;
  const TrunkDescriptor trunk{16, 3, {64, 32}};
  const auto r = train_scorer(data, cfg, trunk);

  // Held-out best crop vs. perturbed crop pairs.
  const auto held = testing::make_task(44, 60, 64);
  Rng rng(45);
  int correct = 0, total = 0;
  for (std::size_t i = 0; i < held.scenes.size(); ++i) {
    for (int k = 0; k < 4; ++k) {
      auto p = pair_from_bestcrop(held.sources[i], held.annotations[i].best_crop, rng, 32);
      if (!p) continue;
      const std::vector<ImageBuffer> views = {p->better, p->worse};
      const auto sc = r.model.score_views(views);
      correct += sc[0] > sc[1];
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(correct) / total, 0.9) << correct << "/" << total;

  // 100-step block means of the loss trace do not increase.
  std::vector<double> blocks;
  for (std::size_t b = 0; b + 100 <= r.trace.size(); b += 100) {
    double m = 0.0;
    for (std::size_t i = b; i < b + 100; ++i) m += r.trace[i].total();
    blocks.push_back(m / 100);
  }
  EXPECT_LT(blocks.back(), 0.5 * blocks.front());
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    EXPECT_LE(blocks[i], blocks[i - 1] + 0.02) << i;
  }
}

TEST(TrainScorer, EmptyUnlabeledSourceContributesNothing) {
  auto task = testing::make_task(46, 6, 48, 6);
  ScorerData data = testing::scorer_data(task, 47, 0, 32);
  ScorerTrainConfig cfg;
  cfg.n_scored = 4;
  cfg.k_bestcrop = 4;
  cfg.p_unlabeled = 4;
  cfg.steps = 20;
  cfg.view_size = 16;
  const auto r = train_scorer(data, cfg, TrunkDescriptor{8, 3, {8}});
  for (const auto& t : r.trace) EXPECT_EQ(t.unlabeled, 0.0);
}

TEST(TrainScorer, RejectsEmptyData) {
  EXPECT_THROW(train_scorer({}, {}), std::invalid_argument);
}

TEST(Regression, ObjectiveAndGradient) {
  ScorerModel m({8, 3, {6}});
  m.net().init_random(2, 1.0);
  Rng rng(3);
  std::vector<MosSample> data;
  for (int i = 0; i < 5; ++i) {
    ImageBuffer img(8, 8, 3);
    for (float& v : img.data()) v = static_cast<float>(rng.uniform());
    data.push_back({img, rng.uniform()});
  }
  double direct = 0.0;
  for (const auto& s : data) direct += std::pow(m.score(s.image) - s.target, 2);
  EXPECT_NEAR(regression_objective(m, data), direct / 5, 1e-12);

  std::vector<double> grad(m.net().parameter_count(), 0.0);
  regression_objective(m, data, grad);
  auto probe = [&] {
    testing::Probe pr;
    pr.loss = regression_objective(m, data);
    DenseNet::Cache c;
    m.net().forward(encode_batch(std::vector<ImageBuffer>{data[0].image, data[1].image,
                                                          data[2].image, data[3].image,
                                                          data[4].image},
                                 m.trunk()),
                    &c);
    testing::append_relu_pattern(c, pr.pattern);
    return pr;
  };
  std::vector<std::size_t> all(grad.size());
  std::iota(all.begin(), all.end(), 0);
  EXPECT_LT(testing::finite_difference_check(probe, m.net().parameters(), grad, all).max_rel_error,
            1e-4);

  ScorerTrainConfig cfg;
  cfg.steps = 200;
  cfg.adam.learning_rate = 1e-2;
  cfg.regression_batch = 5;
  const auto res = train_scorer_regression(data, cfg, m.trunk());
  EXPECT_LT(res.trace.back(), res.trace.front());
}

std::vector<MosSample> mos_data(Rng& rng, int n, bool two_clusters) {
  std::vector<MosSample> data;
  for (int i = 0; i < n; ++i) {
    const bool bright = rng.coin();
    ImageBuffer img(8, 8, 3);
    for (float& v : img.data()) {
      v = static_cast<float>((bright ? 0.6 : 0.1) + 0.3 * rng.uniform());
    }
    data.push_back({img, two_clusters ? (bright ? 0.8 : 0.2) : 0.7});
  }
  return data;
}

TEST(Regression, ConstantTargetConverges) {
  Rng rng(5);
  const auto data = mos_data(rng, 40, false);
  ScorerTrainConfig cfg;
  cfg.steps = 600;
  cfg.adam.learning_rate = 1e-2;
  cfg.regression_batch = 8;
  const auto r = train_scorer_regression(data, cfg, TrunkDescriptor{8, 3, {16}});
  for (const auto& s : data) EXPECT_NEAR(r.model.score(s.image), 0.7, 0.02);
}

TEST(Regression, TwoClustersBeatVarianceBaseline) {
  Rng rng(6);
  const auto data = mos_data(rng, 60, true);
  double mean = 0.0, var = 0.0;
  for (const auto& s : data) mean += s.target / data.size();
  for (const auto& s : data) var += (s.target - mean) * (s.target - mean) / data.size();
  ScorerTrainConfig cfg;
  cfg.steps = 600;
  cfg.adam.learning_rate = 1e-2;
  cfg.regression_batch = 8;
  const auto r = train_scorer_regression(data, cfg, TrunkDescriptor{8, 3, {16}});
  EXPECT_LT(regression_objective(r.model, data), 0.1 * var);
}

}  // namespace
}  // namespace viewadj
