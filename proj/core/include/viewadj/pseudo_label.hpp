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

#include <vector>

#include "viewadj/geometry.hpp"
#include "viewadj/image.hpp"
#include "viewadj/scorer.hpp"

namespace viewadj {

using CandidateGrid = std::vector<Adjustment>;

inline constexpr int kGridMagnitudes = 9;

/// 8 kinds x 9 magnitudes: kinds in declaration order, magnitudes ascending.
/// Shift/zoom: 5, 10, ..., 45 percent. Rotation: k*pi/36 for k = 1..9.
CandidateGrid candidate_grid();

struct PseudoLabelConfig {
  double margin = 0.2;
  CandidateGrid grid = candidate_grid();
};

/// Treats the image as the full-frame view, applies the adjustment to that
/// box, and re-extracts at the image's resolution with zero fill. Throws
/// std::invalid_argument if the magnitude is outside the kind's range.
ImageBuffer simulate_adjustment(const ImageBuffer& image, AdjustmentKind kind, double magnitude);

struct PseudoLabelResult {
  Suggestion label;
  double original_score = 0.0;
  double best_score = 0.0;
  std::size_t best_index = 0;  // into the grid
};

/// Scores the original view and every grid candidate. Adjusts to the first
/// highest-scoring candidate only if its score exceeds the original by more
/// than the margin.
PseudoLabelResult pseudo_label_detailed(const CompositionScorer& scorer, const ImageBuffer& image,
                                        const PseudoLabelConfig& cfg = {});

Suggestion pseudo_label(const CompositionScorer& scorer, const ImageBuffer& image,
                        const PseudoLabelConfig& cfg = {});

}  // namespace viewadj
