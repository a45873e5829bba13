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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "viewadj/evaluation.hpp"

namespace viewadj {

/// Published evaluation counts of the reference benchmark (FCDB + GAICD test
/// splits) in kind_index order. The none slot is one sample per source image.
inline constexpr KindCounts kReferenceEvalCounts = {258, 277, 370, 350, 268, 521, 255, 256, 521};
inline constexpr std::size_t kReferenceEvalTotal = 3076;

nlohmann::json report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const nlohmann::json& j);

/// One row per method: Method,AUC,TPR,<8 kind F1 columns>,IoU.
std::string report_csv(const std::vector<std::pair<std::string, MetricsReport>>& rows);

/// Summary table plus the confusion matrix; absent classes are flagged.
std::string report_markdown(const MetricsReport& r, const std::string& title = "Evaluation");

/// Family,Kind,Count[,Reference] for the eight kinds, a None row for
/// no-adjustment samples, then a Total row over all nine.
std::string counts_csv(const KindCounts& counts, bool with_reference = true);

enum class ReportFormat { Json, Csv, Markdown };

/// Writes <stem>.json, <stem>.csv or <stem>.md. Throws DataError on I/O failure.
std::filesystem::path emit_report(const MetricsReport& r, ReportFormat format,
                                  const std::filesystem::path& stem,
                                  const std::string& method = "model");

}  // namespace viewadj
