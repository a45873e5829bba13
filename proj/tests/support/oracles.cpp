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

#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace viewadj::testing {

std::array<Point, 4> corners_by_matrix(const ViewBox& b) {
  Eigen::Matrix2d R;
  R << std::cos(b.alpha), -std::sin(b.alpha), std::sin(b.alpha), std::cos(b.alpha);
  Eigen::Matrix<double, 2, 4> v;
  v << -b.w / 2, b.w / 2, b.w / 2, -b.w / 2,  //
      -b.h / 2, -b.h / 2, b.h / 2, b.h / 2;
  const Eigen::Matrix<double, 2, 4> u = (R * v).colwise() + Eigen::Vector2d(b.cx, b.cy);
  std::array<Point, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = {u(0, i), u(1, i)};
  return out;
}

namespace {

bool inside(const ViewBox& b, double x, double y) {
  // Rotate the point into the box frame.
  const double dx = x - b.cx, dy = y - b.cy;
  const double lx = std::cos(b.alpha) * dx + std::sin(b.alpha) * dy;
  const double ly = -std::sin(b.alpha) * dx + std::cos(b.alpha) * dy;
  return std::abs(lx) <= b.w / 2 && std::abs(ly) <= b.h / 2;
}

}  // namespace

double monte_carlo_iou(const ViewBox& a, const ViewBox& b, int samples, Rng& rng) {
  double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
  for (const ViewBox* box : {&a, &b}) {
    for (const Point& p : corners_by_matrix(*box)) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  }
  long in_a = 0, in_b = 0, in_both = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = rng.uniform(x0, x1), y = rng.uniform(y0, y1);
    const bool ia = inside(a, x, y), ib = inside(b, x, y);
    in_a += ia;
    in_b += ib;
    in_both += ia && ib;
  }
  const long uni = in_a + in_b - in_both;
  return uni == 0 ? 0.0 : static_cast<double>(in_both) / static_cast<double>(uni);
}

double exhaustive_auc(std::span<const double> pos, std::span<const double> neg) {
  double acc = 0.0;
  for (double p : pos) {
    for (double n : neg) acc += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return acc / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

Suggestion brute_force_pseudo_label(const CompositionScorer& scorer, const ImageBuffer& image,
                                    double margin) {
  const ImageBuffer original[] = {image};
  const double base = scorer.score_views(original)[0];
  const AdjustmentKind kinds[] = {AdjustmentKind::Left,      AdjustmentKind::Right,
                                  AdjustmentKind::Up,        AdjustmentKind::Down,
                                  AdjustmentKind::ZoomIn,    AdjustmentKind::ZoomOut,
                                  AdjustmentKind::Clockwise, AdjustmentKind::CounterClockwise};
  double best = -1.0;
  Suggestion best_s;
  for (AdjustmentKind kind : kinds) {
    for (int i = 0; i < 9; ++i) {
      const bool rot = kind == AdjustmentKind::Clockwise || kind == AdjustmentKind::CounterClockwise;
      const double lo = rot ? std::numbers::pi / 36 : 5.0;
      const double hi = rot ? std::numbers::pi / 4 : 45.0;
      const double m = lo + i * (hi - lo) / 8.0;
      // Box of the adjusted view, written out directly.
      ViewBox box = ViewBox::full_frame();
      const double f = m / 100.0;
      switch (kind) {
        case AdjustmentKind::Left: box.cx -= f; break;
        case AdjustmentKind::Right: box.cx += f; break;
        case AdjustmentKind::Up: box.cy -= f; break;
        case AdjustmentKind::Down: box.cy += f; break;
        case AdjustmentKind::ZoomIn: box.w = box.h = 1.0 - f; break;
        case AdjustmentKind::ZoomOut: box.w = box.h = 1.0 + f; break;
        case AdjustmentKind::Clockwise: box.alpha = -m; break;
        case AdjustmentKind::CounterClockwise: box.alpha = m; break;
      }
      const ImageBuffer view[] = {extract_view(image, box, image.width(), image.height())};
      const double s = scorer.score_views(view)[0];
      if (s > best) {
        best = s;
        best_s = Suggestion::make(kind, m);
      }
    }
  }
  return best > base + margin ? best_s : Suggestion::none();
}

BrightCenterScorer BrightCenterScorer::random(Rng& rng) {
  Params p;
  p.center_weight = rng.uniform(2.0, 12.0);
  p.zero_penalty = rng.uniform(0.0, 10.0);
  p.bias = rng.uniform(-4.0, 1.0);
  p.sigma = rng.uniform(0.1, 0.4);
  p.quantum = rng.coin() ? 0.0 : 0.05;
  return BrightCenterScorer(p);
}

BrightCenterScorer BrightCenterScorer::decisive(Rng& rng) {
  Params p;
  p.center_weight = rng.uniform(30.0, 45.0);
  p.zero_penalty = rng.uniform(0.0, 3.0);
  p.bias = -p.center_weight * rng.uniform(0.17, 0.23);
  p.sigma = rng.uniform(0.1, 0.3);
  p.quantum = rng.coin() ? 0.0 : 0.05;
  return BrightCenterScorer(p);
}

double BrightCenterScorer::score_one(const ImageBuffer& v) const {
  double wsum = 0.0, bright = 0.0, zeros = 0.0;
  for (int y = 0; y < v.height(); ++y) {
    for (int x = 0; x < v.width(); ++x) {
      const double dx = (x + 0.5) / v.width() - 0.5, dy = (y + 0.5) / v.height() - 0.5;
      const double w = std::exp(-(dx * dx + dy * dy) / (2 * p_.sigma * p_.sigma));
      double lum = 0.0;
      bool zero = true;
      for (int c = 0; c < v.channels(); ++c) {
        lum += v.at(x, y, c);
        zero = zero && v.at(x, y, c) == 0.0f;
      }
      lum /= v.channels();
      wsum += w;
      bright += w * lum;
      zeros += zero ? 1.0 : 0.0;
    }
  }
  const double z = p_.center_weight * bright / wsum -
                   p_.zero_penalty * zeros / (v.width() * v.height()) + p_.bias;
  double s = 1.0 / (1.0 + std::exp(-z));
  if (p_.quantum > 0.0) s = std::round(s / p_.quantum) * p_.quantum;
  return s;
}

std::vector<double> BrightCenterScorer::score_views(std::span<const ImageBuffer> views) const {
  std::vector<double> out;
  for (const auto& v : views) out.push_back(score_one(v));
  return out;
}

GradCheck finite_difference_check(const std::function<Probe()>& f, std::span<double> params,
                                  std::span<const double> analytic,
                                  std::span<const std::size_t> coords, double h) {
  GradCheck r;
  for (std::size_t c : coords) {
    const double saved = params[c];
    params[c] = saved + h;
    const Probe plus = f();
    params[c] = saved - h;
    const Probe minus = f();
    params[c] = saved;
    if (plus.pattern != minus.pattern) {
      ++r.skipped;
      continue;
    }
    const double num = (plus.loss - minus.loss) / (2 * h);
    const double a = analytic[c];
    const double rel = std::abs(a - num) / std::max({std::abs(a), std::abs(num), 1e-6});
    r.max_rel_error = std::max(r.max_rel_error, rel);
    ++r.checked;
  }
  return r;
}

void append_relu_pattern(const DenseNet::Cache& cache, std::vector<std::uint8_t>& out) {
  for (const auto& h : cache.hidden) {
    for (Eigen::Index i = 0; i < h.size(); ++i) out.push_back(h.data()[i] > 0.0);
  }
}

std::vector<std::size_t> gradcheck_coords(std::size_t total, std::size_t tail_from,
                                          std::size_t n_random, Rng& rng) {
  std::vector<std::size_t> coords;
  for (std::size_t i = tail_from; i < total; ++i) coords.push_back(i);
  while (coords.size() < total - tail_from + n_random) {
    const std::size_t c = rng.index(tail_from);
    if (std::find(coords.begin(), coords.end(), c) == coords.end()) coords.push_back(c);
  }
  std::sort(coords.begin(), coords.end());
  return coords;
}

double direct_ranking_term(const ScorerModel& m, const std::vector<RankPair>& pairs,
                           double delta) {
  if (pairs.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& p : pairs) {
    const double sp = m.score(prepare_input(p.better, m.trunk()));
    const double sn = m.score(prepare_input(p.worse, m.trunk()));
    acc += std::max(0.0, delta + sn - sp);
  }
  return acc / static_cast<double>(pairs.size());
}

double reference_adjuster_loss(std::span<const double> z, const Suggestion& label, double w) {
  const double p = 1.0 / (1.0 + std::exp(-z[0]));
  double loss = label.adjust() ? -std::log(p) : -std::log(1.0 - p);
  if (label.adjust()) {
    const std::size_t k = kind_index(label.adjustment->kind);
    double denom = 0.0;
    for (std::size_t j = 0; j < kNumKinds; ++j) denom += std::exp(z[1 + j]);
    loss += -std::log(std::exp(z[1 + k]) / denom);
    const MagnitudeRange r = magnitude_range(label.adjustment->kind);
    const double pred = r.lo + (r.hi - r.lo) / (1.0 + std::exp(-z[9 + k]));
    loss += std::abs(pred - label.adjustment->magnitude) / (r.hi - r.lo);
  }
  return w * loss;
}

}  // namespace viewadj::testing
