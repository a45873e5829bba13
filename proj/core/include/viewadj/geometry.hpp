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

// Oriented view boxes in normalized source-image coordinates.
//
// Conventions used by every module:
//   * x grows to the right, y grows downward, both in [0,1] over the source.
//   * alpha is measured from the source y-axis; corners are c + R(alpha) v.
//   * Left/Right move the box along -x/+x, Up/Down along -y/+y.
//   * ZoomIn shrinks the box, ZoomOut enlarges it.
//   * Clockwise decreases alpha, CounterClockwise increases it.

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>

namespace viewadj {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct ViewBox {
  double cx = 0.5;
  double cy = 0.5;
  double w = 1.0;
  double h = 1.0;
  double alpha = 0.0;

  static constexpr ViewBox full_frame() { return {0.5, 0.5, 1.0, 1.0, 0.0}; }
  bool valid() const { return w > 0.0 && h > 0.0; }
  bool operator==(const ViewBox&) const = default;
};

struct Perturbation {
  double ox = 0.0;
  double oy = 0.0;
  double oz = 0.0;
  double oalpha = 0.0;

  int nonzero_count() const {
    return (ox != 0.0) + (oy != 0.0) + (oz != 0.0) + (oalpha != 0.0);
  }
  bool is_single_axis() const { return nonzero_count() <= 1; }
  bool is_identity() const { return nonzero_count() == 0; }
  bool operator==(const Perturbation&) const = default;
};

enum class AdjustmentKind : std::uint8_t {
  Left,
  Right,
  Up,
  Down,
  ZoomIn,
  ZoomOut,
  Clockwise,
  CounterClockwise,
};

inline constexpr std::size_t kNumKinds = 8;

inline constexpr std::array<AdjustmentKind, kNumKinds> kAllKinds = {
    AdjustmentKind::Left,   AdjustmentKind::Right,   AdjustmentKind::Up,
    AdjustmentKind::Down,   AdjustmentKind::ZoomIn,  AdjustmentKind::ZoomOut,
    AdjustmentKind::Clockwise, AdjustmentKind::CounterClockwise};

constexpr std::size_t kind_index(AdjustmentKind kind) {
  return static_cast<std::size_t>(kind);
}

constexpr bool is_rotation(AdjustmentKind kind) {
  return kind == AdjustmentKind::Clockwise ||
         kind == AdjustmentKind::CounterClockwise;
}

/// Canonical name ("Left", ..., "CounterClockwise"); used in JSON.
std::string_view kind_name(AdjustmentKind kind);

/// Short column label in benchmark tables ("Zoom-in", "Counter", ...).
std::string_view kind_table_label(AdjustmentKind kind);

std::optional<AdjustmentKind> parse_kind(std::string_view name);

struct MagnitudeRange {
  double lo;
  double hi;
  bool contains(double v, double tol = 1e-9) const {
    return v >= lo - tol && v <= hi + tol;
  }
};

// Shift and zoom magnitudes are percent of the current view's own size;
// rotation magnitudes are radians.
inline constexpr MagnitudeRange kPercentRange{5.0, 45.0};
inline constexpr MagnitudeRange kRotationRange{std::numbers::pi / 36.0,
                                               std::numbers::pi / 4.0};

constexpr MagnitudeRange magnitude_range(AdjustmentKind kind) {
  return is_rotation(kind) ? kRotationRange : kPercentRange;
}

struct Adjustment {
  AdjustmentKind kind = AdjustmentKind::Left;
  double magnitude = 0.0;
  bool operator==(const Adjustment&) const = default;
};

/// Either "no adjustment" or one adjustment kind with a magnitude.
struct Suggestion {
  std::optional<Adjustment> adjustment;

  static Suggestion none() { return {}; }
  static Suggestion make(AdjustmentKind kind, double magnitude) {
    return {Adjustment{kind, magnitude}};
  }
  bool adjust() const { return adjustment.has_value(); }
  bool operator==(const Suggestion&) const = default;
};

// ---------------------------------------------------------------------------

/// Corners in order top-left, top-right, bottom-right, bottom-left of the
/// unrotated box, each rotated by alpha about the center.
std::array<Point, 4> box_corners(const ViewBox& box);

ViewBox apply_perturbation(const ViewBox& box, const Perturbation& p);

/// Exact inverse of a single-axis perturbation. Throws std::invalid_argument
/// for composite perturbations or zoom offsets <= -1.
Perturbation invert_single_axis(const Perturbation& p);

/// Maps an inverse perturbation (the ground-truth adjustment) to a label.
/// Throws std::domain_error when the magnitude is outside the valid range.
Suggestion suggestion_from_inverse(const Perturbation& inverse);

/// The perturbation that carries out a suggestion; identity for none().
Perturbation perturbation_for(const Suggestion& suggestion);

/// Applies a suggested adjustment to a view box.
ViewBox apply_suggestion(const ViewBox& box, const Suggestion& suggestion);

/// True iff all four corners lie in [0,1]^2 (boundary counts as inside).
bool box_within_image(const ViewBox& box, double tol = 1e-12);

/// Area of the oriented rectangle (w * h).
inline double box_area(const ViewBox& b) { return b.w * b.h; }

/// True iff the normalized point lies inside the oriented box.
bool box_contains(const ViewBox& box, Point p);

/// Intersection-over-union of two oriented rectangles via convex clipping.
double rotated_iou(const ViewBox& a, const ViewBox& b);

/// Area of the intersection of two oriented rectangles.
double intersection_area(const ViewBox& a, const ViewBox& b);

}  // namespace viewadj
