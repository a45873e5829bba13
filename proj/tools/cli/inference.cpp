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

#include "inference.hpp"

#include "viewadj/serialization.hpp"

namespace viewadj::cli {

ImageBuffer view_of(const ImageBuffer& source, const std::optional<ViewBox>& viewport,
                    int view_size) {
  if (!viewport) return source;
  return extract_view(source, *viewport, view_size, view_size);
}

ViewSuggestion suggest_view(const AdjusterModel& model, const ImageBuffer& view,
                            double threshold) {
  ViewSuggestion out;
  out.threshold = threshold;
  out.heads = model.predict(prepare_input(view, model.trunk()));
  out.suggestion = suggestion_from_heads(out.heads, threshold);
  return out;
}

nlohmann::json suggestion_json(const ViewSuggestion& s) {
  nlohmann::json dist = nlohmann::json::object();
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    dist[std::string(kind_name(kAllKinds[k]))] = s.heads.distribution[k];
  }
  return {{"suggestion", s.suggestion},
          {"suggestion_probability", s.heads.suggestion_probability},
          {"adjustment_distribution", dist},
          {"threshold", s.threshold}};
}

nlohmann::json trajectory_json(const std::vector<TrajectoryStep>& trajectory) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& t : trajectory) {
    steps.push_back({{"viewport", t.viewport}, {"suggestion", t.suggestion}});
  }
  return {{"trajectory", steps}};
}

}  // namespace viewadj::cli
