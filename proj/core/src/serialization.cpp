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

#include "viewadj/serialization.hpp"

#include <string>

#include "viewadj/errors.hpp"

namespace viewadj {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw DataError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

void to_json(nlohmann::json& j, const ViewBox& b) {
  j = nlohmann::json{{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h}, {"alpha", b.alpha}};
}

void from_json(const nlohmann::json& j, ViewBox& b) {
  b.cx = require_number(j, "cx");
  b.cy = require_number(j, "cy");
  b.w = require_number(j, "w");
  b.h = require_number(j, "h");
  b.alpha = j.contains("alpha") ? require_number(j, "alpha") : 0.0;
  if (!b.valid()) throw DataError("view box must have w > 0 and h > 0");
}

void to_json(nlohmann::json& j, const Perturbation& p) {
  j = nlohmann::json{{"ox", p.ox}, {"oy", p.oy}, {"oz", p.oz}, {"oalpha", p.oalpha}};
}

void from_json(const nlohmann::json& j, Perturbation& p) {
  p.ox = require_number(j, "ox");
  p.oy = require_number(j, "oy");
  p.oz = require_number(j, "oz");
  p.oalpha = require_number(j, "oalpha");
  if (p.oz <= -1.0) throw DataError("perturbation oz must be > -1");
}

void to_json(nlohmann::json& j, const Suggestion& s) {
  if (!s.adjust()) {
    j = nlohmann::json{{"adjust", false}};
    return;
  }
  j = nlohmann::json{{"adjust", true},
                     {"kind", std::string(kind_name(s.adjustment->kind))},
                     {"magnitude", s.adjustment->magnitude}};
}

void from_json(const nlohmann::json& j, Suggestion& s) {
  if (!j.is_object() || !j.contains("adjust") || !j["adjust"].is_boolean()) {
    throw DataError("suggestion requires boolean field 'adjust'");
  }
  if (!j["adjust"].get<bool>()) {
    s = Suggestion::none();
    return;
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw DataError("suggestion with adjust=true requires string field 'kind'");
  }
  const auto kind = parse_kind(j["kind"].get<std::string>());
  if (!kind) throw DataError("unknown adjustment kind '" + j["kind"].get<std::string>() + "'");
  const double mag = require_number(j, "magnitude");
  if (!magnitude_range(*kind).contains(mag)) {
    throw DataError("magnitude out of range for " + std::string(kind_name(*kind)));
  }
  s = Suggestion::make(*kind, mag);
}

}  // namespace viewadj
