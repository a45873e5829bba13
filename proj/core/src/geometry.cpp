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

#include "viewadj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace viewadj {

namespace {

constexpr double kClipEps = 1e-12;

using Polygon = std::vector<Point>;

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(const Polygon& poly) {
  double acc = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    acc += p.x * q.y - q.x * p.y;
  }
  return 0.5 * acc;
}

Polygon ccw_corners(const ViewBox& box) {
  auto c = box_corners(box);
  Polygon poly(c.begin(), c.end());
  if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
  return poly;
}

Point line_intersection(Point p, Point q, Point a, Point b) {
  const double a1 = cross(a, b, p);
  const double a2 = cross(a, b, q);
  const double t = a1 / (a1 - a2);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

// Sutherland-Hodgman against a convex counter-clockwise clip polygon.
Polygon clip(Polygon subject, const Polygon& clipper) {
  for (std::size_t e = 0, m = clipper.size(); e < m && !subject.empty(); ++e) {
    const Point a = clipper[e];
    const Point b = clipper[(e + 1) % m];
    Polygon out;
    out.reserve(subject.size() + 2);
    for (std::size_t i = 0, n = subject.size(); i < n; ++i) {
      const Point cur = subject[i];
      const Point prev = subject[(i + n - 1) % n];
      const bool cur_in = cross(a, b, cur) >= -kClipEps;
      const bool prev_in = cross(a, b, prev) >= -kClipEps;
      if (cur_in) {
        if (!prev_in) out.push_back(line_intersection(prev, cur, a, b));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(line_intersection(prev, cur, a, b));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

}  // namespace

std::string_view kind_name(AdjustmentKind kind) {
  switch (kind) {
    case AdjustmentKind::Left: return "Left";
    case AdjustmentKind::Right: return "Right";
    case AdjustmentKind::Up: return "Up";
    case AdjustmentKind::Down: return "Down";
    case AdjustmentKind::ZoomIn: return "ZoomIn";
    case AdjustmentKind::ZoomOut: return "ZoomOut";
    case AdjustmentKind::Clockwise: return "Clockwise";
    case AdjustmentKind::CounterClockwise: return "CounterClockwise";
  }
  return "?";
}

std::string_view kind_table_label(AdjustmentKind kind) {
  switch (kind) {
    case AdjustmentKind::ZoomIn: return "Zoom-in";
    case AdjustmentKind::ZoomOut: return "Zoom-out";
    case AdjustmentKind::CounterClockwise: return "Counter";
    default: return kind_name(kind);
  }
}

std::optional<AdjustmentKind> parse_kind(std::string_view name) {
  for (auto k : kAllKinds) {
    if (kind_name(k) == name || kind_table_label(k) == name) return k;
  }
  return std::nullopt;
}

std::array<Point, 4> box_corners(const ViewBox& box) {
  const double c = std::cos(box.alpha);
  const double s = std::sin(box.alpha);
  const double hw = 0.5 * box.w;
  const double hh = 0.5 * box.h;
  const std::array<Point, 4> local = {
      Point{-hw, -hh}, Point{hw, -hh}, Point{hw, hh}, Point{-hw, hh}};
  std::array<Point, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {box.cx + c * local[i].x - s * local[i].y,
              box.cy + s * local[i].x + c * local[i].y};
  }
  return out;
}

ViewBox apply_perturbation(const ViewBox& box, const Perturbation& p) {
  return {box.cx + box.w * p.ox, box.cy + box.h * p.oy, box.w * (1.0 + p.oz),
          box.h * (1.0 + p.oz), box.alpha + p.oalpha};
}

Perturbation invert_single_axis(const Perturbation& p) {
  if (!p.is_single_axis()) {
    throw std::invalid_argument(
        "invert_single_axis: perturbation has more than one nonzero component");
  }
  if (p.oz <= -1.0) {
    throw std::invalid_argument("invert_single_axis: zoom offset must be > -1");
  }
  Perturbation inv;
  inv.ox = -p.ox;
  inv.oy = -p.oy;
  inv.oz = p.oz == 0.0 ? 0.0 : 1.0 / (1.0 + p.oz) - 1.0;
  inv.oalpha = -p.oalpha;
  return inv;
}

Suggestion suggestion_from_inverse(const Perturbation& inv) {
  if (!inv.is_single_axis()) {
    throw std::invalid_argument(
        "suggestion_from_inverse: composite perturbation");
  }
  if (inv.is_identity()) return Suggestion::none();

  AdjustmentKind kind;
  double magnitude;
  if (inv.ox != 0.0) {
    kind = inv.ox < 0.0 ? AdjustmentKind::Left : AdjustmentKind::Right;
    magnitude = std::abs(inv.ox) * 100.0;
  } else if (inv.oy != 0.0) {
    kind = inv.oy < 0.0 ? AdjustmentKind::Up : AdjustmentKind::Down;
    magnitude = std::abs(inv.oy) * 100.0;
  } else if (inv.oz != 0.0) {
    kind = inv.oz < 0.0 ? AdjustmentKind::ZoomIn : AdjustmentKind::ZoomOut;
    magnitude = std::abs(inv.oz) * 100.0;
  } else {
    kind = inv.oalpha < 0.0 ? AdjustmentKind::Clockwise
                            : AdjustmentKind::CounterClockwise;
    magnitude = std::abs(inv.oalpha);
  }
  if (!magnitude_range(kind).contains(magnitude)) {
    std::ostringstream msg;
    msg << "suggestion_from_inverse: magnitude " << magnitude << " for "
        << kind_name(kind) << " is outside [" << magnitude_range(kind).lo
        << ", " << magnitude_range(kind).hi << "]";
    throw std::domain_error(msg.str());
  }
  return Suggestion::make(kind, magnitude);
}

Perturbation perturbation_for(const Suggestion& suggestion) {
  Perturbation p;
  if (!suggestion.adjust()) return p;
  const double m = suggestion.adjustment->magnitude;
  switch (suggestion.adjustment->kind) {
    case AdjustmentKind::Left: p.ox = -m / 100.0; break;
    case AdjustmentKind::Right: p.ox = m / 100.0; break;
    case AdjustmentKind::Up: p.oy = -m / 100.0; break;
    case AdjustmentKind::Down: p.oy = m / 100.0; break;
    case AdjustmentKind::ZoomIn: p.oz = -m / 100.0; break;
    case AdjustmentKind::ZoomOut: p.oz = m / 100.0; break;
    case AdjustmentKind::Clockwise: p.oalpha = -m; break;
    case AdjustmentKind::CounterClockwise: p.oalpha = m; break;
  }
  return p;
}

ViewBox apply_suggestion(const ViewBox& box, const Suggestion& suggestion) {
  return apply_perturbation(box, perturbation_for(suggestion));
}

bool box_within_image(const ViewBox& box, double tol) {
  for (const Point& p : box_corners(box)) {
    if (p.x < -tol || p.x > 1.0 + tol || p.y < -tol || p.y > 1.0 + tol) {
      return false;
    }
  }
  return true;
}

bool box_contains(const ViewBox& box, Point p) {
  const double c = std::cos(box.alpha);
  const double s = std::sin(box.alpha);
  const double dx = p.x - box.cx;
  const double dy = p.y - box.cy;
  // Inverse rotation into the box frame.
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  return std::abs(lx) <= 0.5 * box.w && std::abs(ly) <= 0.5 * box.h;
}

double intersection_area(const ViewBox& a, const ViewBox& b) {
  const Polygon inter = clip(ccw_corners(a), ccw_corners(b));
  if (inter.size() < 3) return 0.0;
  const double area = std::abs(signed_area(inter));
  return area < kClipEps ? 0.0 : area;
}

double rotated_iou(const ViewBox& a, const ViewBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = box_area(a) + box_area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace viewadj
