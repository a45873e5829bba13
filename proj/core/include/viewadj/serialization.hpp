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

// JSON schema for core value types. Field names are part of the wire format:
//   ViewBox       {cx, cy, w, h, alpha}
//   Perturbation  {ox, oy, oz, oalpha}
//   Suggestion    {adjust} or {adjust, kind, magnitude}

#include <nlohmann/json.hpp>

#include "viewadj/geometry.hpp"

namespace viewadj {

void to_json(nlohmann::json& j, const ViewBox& b);
/// Throws DataError on missing/mistyped fields or non-positive size.
void from_json(const nlohmann::json& j, ViewBox& b);

void to_json(nlohmann::json& j, const Perturbation& p);
void from_json(const nlohmann::json& j, Perturbation& p);

void to_json(nlohmann::json& j, const Suggestion& s);
/// Throws DataError on unknown kinds or out-of-range magnitudes.
void from_json(const nlohmann::json& j, Suggestion& s);

/// Field accessor that reports schema violations as DataError.
double require_number(const nlohmann::json& j, const char* key);

}  // namespace viewadj
