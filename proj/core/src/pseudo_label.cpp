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

#include "viewadj/pseudo_label.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace viewadj {

CandidateGrid candidate_grid() {
  CandidateGrid grid;
  grid.reserve(kNumKinds * kGridMagnitudes);
  for (AdjustmentKind kind : kAllKinds) {
    for (int k = 1; k <= kGridMagnitudes; ++k) {
      const double m = is_rotation(kind) ? k * std::numbers::pi / 36.0 : 5.0 * k;
      grid.push_back({kind, m});
    }
  }
  return grid;
}

ImageBuffer simulate_adjustment(const ImageBuffer& image, AdjustmentKind kind, double magnitude) {
  if (!magnitude_range(kind).contains(magnitude)) {
    throw std::invalid_argument("simulate_adjustment: magnitude " + std::to_string(magnitude) +
                                " out of range for " + std::string(kind_name(kind)));
  }
  const ViewBox box = apply_suggestion(ViewBox::full_frame(), Suggestion::make(kind, magnitude));
  return extract_view(image, box, image.width(), image.height());
}

PseudoLabelResult pseudo_label_detailed(const CompositionScorer& scorer, const ImageBuffer& image,
                                        const PseudoLabelConfig& cfg) {
  if (!(cfg.margin >= 0.0 && cfg.margin <= 1.0)) {
    throw std::invalid_argument("pseudo_label: margin must lie in [0, 1]");
  }
  if (cfg.grid.empty()) throw std::invalid_argument("pseudo_label: empty candidate grid");
  std::vector<ImageBuffer> views;
  views.reserve(cfg.grid.size() + 1);
  views.push_back(image);
  for (const auto& c : cfg.grid) views.push_back(simulate_adjustment(image, c.kind, c.magnitude));
  const std::vector<double> scores = scorer.score_views(views);
  if (scores.size() != views.size()) {
    throw std::runtime_error("pseudo_label: scorer returned the wrong number of scores");
  }

  PseudoLabelResult r;
  r.original_score = scores[0];
  r.best_index = 0;
  r.best_score = scores[1];
  for (std::size_t i = 1; i < cfg.grid.size(); ++i) {
    if (scores[i + 1] > r.best_score) {
      r.best_score = scores[i + 1];
      r.best_index = i;
    }
  }
  if (r.best_score > r.original_score + cfg.margin) {
    r.label = Suggestion{cfg.grid[r.best_index]};
  }
  return r;
}

Suggestion pseudo_label(const CompositionScorer& scorer, const ImageBuffer& image,
                        const PseudoLabelConfig& cfg) {
  return pseudo_label_detailed(scorer, image, cfg).label;
}

}  // namespace viewadj
