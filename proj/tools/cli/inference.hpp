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

#include <nlohmann/json.hpp>

#include <optional>
#include <vector>

#include "viewadj/adjuster.hpp"
#include "viewadj/image.hpp"

namespace viewadj::cli {

struct ViewSuggestion {
  Suggestion suggestion;
  RawHeads heads;
  double threshold = 0.5;
};

/// The view the model sees: the viewport extracted at view_size, or the
/// whole image when no viewport is given.
ImageBuffer view_of(const ImageBuffer& source, const std::optional<ViewBox>& viewport,
                    int view_size);

ViewSuggestion suggest_view(const AdjusterModel& model, const ImageBuffer& view,
                            double threshold);

/// {suggestion, suggestion_probability, adjustment_distribution, threshold}
nlohmann::json suggestion_json(const ViewSuggestion& s);

/// {trajectory: [{viewport, suggestion}, ...]}
nlohmann::json trajectory_json(const std::vector<TrajectoryStep>& trajectory);

/// Initial viewport of the viewfinder: centered, half size, unrotated.
inline constexpr ViewBox kDefaultViewport{0.5, 0.5, 0.5, 0.5, 0.0};

}  // namespace viewadj::cli
