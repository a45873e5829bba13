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
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "viewadj/geometry.hpp"
#include "viewadj/serialization.hpp"

namespace viewadj {
namespace {

constexpr double kPi = std::numbers::pi;

ViewBox random_box(Rng& rng) {
  const double w = rng.uniform(0.05, 0.9);
  return {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), w, rng.uniform(0.05, 0.9),
          rng.uniform(-kPi / 3, kPi / 3)};
}

Perturbation random_single_axis(Rng& rng) {
  Perturbation p;
  switch (rng.index(4)) {
    case 0: p.ox = rng.uniform(-0.45, 0.45); break;
    case 1: p.oy = rng.uniform(-0.45, 0.45); break;
    case 2: p.oz = rng.uniform(-0.45, 0.818); break;
    default: p.oalpha = rng.uniform(-kPi / 4, kPi / 4); break;
  }
  return p;
}

void expect_box_near(const ViewBox& a, const ViewBox& b, double tol) {
  EXPECT_NEAR(a.cx, b.cx, tol);
  EXPECT_NEAR(a.cy, b.cy, tol);
  EXPECT_NEAR(a.w, b.w, tol);
  EXPECT_NEAR(a.h, b.h, tol);
  EXPECT_NEAR(a.alpha, b.alpha, tol);
}

TEST(BoxCorners, MatchesRotationMatrixOracle) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const ViewBox b = random_box(rng);
    const auto got = box_corners(b);
    const auto want = testing::corners_by_matrix(b);
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(got[k].x, want[k].x, 1e-15);
      EXPECT_NEAR(got[k].y, want[k].y, 1e-15);
    }
  }
}

TEST(BoxCorners, UnrotatedOrder) {
  const auto c = box_corners({0.5, 0.5, 0.4, 0.2, 0.0});
  EXPECT_DOUBLE_EQ(c[0].x, 0.3);
  EXPECT_DOUBLE_EQ(c[0].y, 0.4);
  EXPECT_DOUBLE_EQ(c[2].x, 0.7);
  EXPECT_DOUBLE_EQ(c[2].y, 0.6);
}

TEST(ApplyPerturbation, Semantics) {
  const ViewBox b{0.5, 0.4, 0.4, 0.2, 0.1};
  const ViewBox r = apply_suggestion(b, Suggestion::make(AdjustmentKind::Right, 20));
  EXPECT_DOUBLE_EQ(r.cx, 0.5 + 0.2 * 0.4);
  EXPECT_DOUBLE_EQ(r.cy, 0.4);
  const ViewBox up = apply_suggestion(b, Suggestion::make(AdjustmentKind::Up, 10));
  EXPECT_DOUBLE_EQ(up.cy, 0.4 - 0.1 * 0.2);
  const ViewBox zin = apply_suggestion(b, Suggestion::make(AdjustmentKind::ZoomIn, 25));
  EXPECT_DOUBLE_EQ(zin.w, 0.3);
  EXPECT_DOUBLE_EQ(zin.h, 0.15);
  const ViewBox cw = apply_suggestion(b, Suggestion::make(AdjustmentKind::Clockwise, 0.2));
  EXPECT_DOUBLE_EQ(cw.alpha, 0.1 - 0.2);
  EXPECT_EQ(apply_suggestion(b, Suggestion::none()), b);
}

TEST(InvertSingleAxis, RoundTripProperty) {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const ViewBox b = random_box(rng);
    const Perturbation p = random_single_axis(rng);
    const ViewBox back = apply_perturbation(apply_perturbation(b, p), invert_single_axis(p));
    expect_box_near(back, b, 1e-12);
  }
}

TEST(InvertSingleAxis, ZoomEndpoints) {
  EXPECT_NEAR(invert_single_axis({0, 0, 0.053, 0}).oz, -0.05, 1e-3);
  EXPECT_NEAR(invert_single_axis({0, 0, 0.818, 0}).oz, -0.45, 1e-3);
  EXPECT_NEAR(invert_single_axis({0, 0, -0.05, 0}).oz, 0.0526, 1e-3);
  EXPECT_NEAR(invert_single_axis({0, 0, -0.45, 0}).oz, 0.818, 1e-3);
}

TEST(InvertSingleAxis, RejectsComposite) {
  EXPECT_THROW(invert_single_axis({0.1, 0.1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(invert_single_axis({0, 0, -1.0, 0}), std::invalid_argument);
}

TEST(SuggestionFromInverse, KindsAndMagnitudes) {
  EXPECT_EQ(suggestion_from_inverse({-0.2, 0, 0, 0}), Suggestion::make(AdjustmentKind::Left, 20));
  EXPECT_EQ(suggestion_from_inverse({0, 0.3, 0, 0}), Suggestion::make(AdjustmentKind::Down, 30));
  const Suggestion zin = suggestion_from_inverse({0, 0, -0.25, 0});
  EXPECT_EQ(zin.adjustment->kind, AdjustmentKind::ZoomIn);
  EXPECT_NEAR(zin.adjustment->magnitude, 25.0, 1e-12);
  const Suggestion ccw = suggestion_from_inverse({0, 0, 0, 0.3});
  EXPECT_EQ(ccw.adjustment->kind, AdjustmentKind::CounterClockwise);
  EXPECT_EQ(suggestion_from_inverse({}), Suggestion::none());
  EXPECT_THROW(suggestion_from_inverse({0.6, 0, 0, 0}), std::domain_error);
  EXPECT_THROW(suggestion_from_inverse({0, 0, 0, 0.01}), std::domain_error);
}

TEST(SuggestionFromInverse, PerturbationForIsInverse) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const AdjustmentKind k = kAllKinds[rng.index(kNumKinds)];
    const MagnitudeRange r = magnitude_range(k);
    const Suggestion s = Suggestion::make(k, rng.uniform(r.lo, r.hi));
    const Suggestion back = suggestion_from_inverse(perturbation_for(s));
    ASSERT_EQ(back.adjustment->kind, k);
    EXPECT_NEAR(back.adjustment->magnitude, s.adjustment->magnitude, 1e-12);
  }
}

TEST(BoxWithinImage, Boundaries) {
  EXPECT_TRUE(box_within_image(ViewBox::full_frame()));
  EXPECT_FALSE(box_within_image({0.5, 0.5, 1.0, 1.0, 0.1}));
  EXPECT_FALSE(box_within_image({0.8, 0.5, 0.5, 0.5, 0.0}));
  EXPECT_TRUE(box_within_image({0.75, 0.5, 0.5, 0.5, 0.0}));
}

TEST(RotatedIou, FortyFiveDegreeSquare) {
  const ViewBox a{0.5, 0.5, 0.4, 0.4, 0.0};
  ViewBox b = a;
  b.alpha = kPi / 4;
  EXPECT_NEAR(rotated_iou(a, b), 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(RotatedIou, IdentityDisjointContained) {
  const ViewBox a{0.5, 0.5, 0.4, 0.3, 0.3};
  EXPECT_NEAR(rotated_iou(a, a), 1.0, 1e-12);
  EXPECT_EQ(rotated_iou(a, {3.0, 3.0, 0.1, 0.1, 0.0}), 0.0);
  const ViewBox inner{0.5, 0.5, 0.2, 0.15, 0.3};
  EXPECT_NEAR(rotated_iou(a, inner), 0.25, 1e-12);
}

TEST(RotatedIou, AgreesWithMonteCarlo) {
  Rng rng(4);
  Rng mc(5);
  for (int i = 0; i < 20; ++i) {
    const ViewBox a = random_box(rng);
    ViewBox b = a;
    b.cx += rng.uniform(-0.2, 0.2);
    b.cy += rng.uniform(-0.2, 0.2);
    b.w *= rng.uniform(0.6, 1.4);
    b.alpha += rng.uniform(-0.8, 0.8);
    EXPECT_NEAR(rotated_iou(a, b), testing::monte_carlo_iou(a, b, 200000, mc), 0.01);
  }
}

TEST(RotatedIou, SymmetricAndBounded) {
  Rng rng(6);
  for (int i = 0; i < 2000; ++i) {
    const ViewBox a = random_box(rng), b = random_box(rng);
    const double ab = rotated_iou(a, b);
    EXPECT_NEAR(ab, rotated_iou(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
  }
}

class GeometryFixture : public ::testing::Test {
 protected:
  static nlohmann::json load() {
    std::ifstream in(std::string(VIEWADJ_TESTDATA_DIR) + "/geometry_vectors.json");
    return nlohmann::json::parse(in);
  }
};

TEST_F(GeometryFixture, ApplyPerturbationVectors) {
  const auto doc = load();
  const double tol = doc["tolerance"].get<double>();
  ASSERT_FALSE(doc["apply_perturbation"].empty());
  for (const auto& c : doc["apply_perturbation"]) {
    const ViewBox got =
        apply_perturbation(c["box"].get<ViewBox>(), c["perturbation"].get<Perturbation>());
    expect_box_near(got, c["expected"].get<ViewBox>(), tol);
    const auto corners = box_corners(got);
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(corners[k].x, c["expected_corners"][k][0].get<double>(), tol);
      EXPECT_NEAR(corners[k].y, c["expected_corners"][k][1].get<double>(), tol);
    }
  }
}

TEST_F(GeometryFixture, ApplySuggestionVectors) {
  const auto doc = load();
  const double tol = doc["tolerance"].get<double>();
  for (const auto& c : doc["apply_suggestion"]) {
    const Suggestion s = c["suggestion"].get<Suggestion>();
    const Perturbation p = perturbation_for(s);
    const Perturbation want = c["perturbation"].get<Perturbation>();
    EXPECT_NEAR(p.ox, want.ox, tol);
    EXPECT_NEAR(p.oy, want.oy, tol);
    EXPECT_NEAR(p.oz, want.oz, tol);
    EXPECT_NEAR(p.oalpha, want.oalpha, tol);
    expect_box_near(apply_suggestion(c["box"].get<ViewBox>(), s), c["expected"].get<ViewBox>(),
                    tol);
  }
}

TEST_F(GeometryFixture, RotatedIouVectors) {
  const auto doc = load();
  for (const auto& c : doc["rotated_iou"]) {
    EXPECT_NEAR(rotated_iou(c["a"].get<ViewBox>(), c["b"].get<ViewBox>()),
                c["expected"].get<double>(), 1e-9);
  }
}

TEST(KindNames, RoundTrip) {
  for (AdjustmentKind k : kAllKinds) {
    EXPECT_EQ(parse_kind(kind_name(k)), k);
    EXPECT_EQ(parse_kind(kind_table_label(k)), k);
  }
  EXPECT_FALSE(parse_kind("Sideways").has_value());
}

}  // namespace
}  // namespace viewadj
