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

#include "viewadj/report.hpp"

#include <fmt/format.h>

#include "viewadj/dataset_io.hpp"
#include "viewadj/errors.hpp"

using nlohmann::json;

namespace viewadj {

namespace {

std::string class_label(std::size_t c) {
  return c == kNoneIndex ? "None" : std::string(kind_table_label(kAllKinds[c]));
}

std::string_view family_of(AdjustmentKind k) {
  switch (k) {
    case AdjustmentKind::Left:
    case AdjustmentKind::Right:
      return "Horizontal";
    case AdjustmentKind::Up:
    case AdjustmentKind::Down:
      return "Vertical";
    case AdjustmentKind::ZoomIn:
    case AdjustmentKind::ZoomOut:
      return "Zoom";
    default:
      return "Rotate";
  }
}

template <class T>
T get_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("report: missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string("report: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

json report_to_json(const MetricsReport& r) {
  json f1 = json::object(), present = json::object(), counts = json::object();
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    const std::string name(kind_name(kAllKinds[k]));
    f1[name] = r.f1_per_kind[k];
    present[name] = r.kind_present[k];
    counts[name] = r.label_counts[k];
  }
  counts["None"] = r.label_counts[kNoneIndex];
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  json labels = json::array();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    labels.push_back(c == kNoneIndex ? "None" : std::string(kind_name(kAllKinds[c])));
  }
  return {{"sample_count", r.sample_count},
          {"positive_count", r.positive_count},
          {"auc", r.auc},
          {"fpr_target", r.fpr_target},
          {"fpr_actual", r.fpr_actual},
          {"threshold", r.threshold},
          {"tpr", r.tpr},
          {"f1_per_kind", f1},
          {"kind_present", present},
          {"mean_iou", r.mean_iou},
          {"kind_accuracy", r.kind_accuracy},
          {"confusion", {{"rows", "predicted"}, {"cols", "ground_truth"}, {"labels", labels},
                         {"matrix", confusion}}},
          {"label_counts", counts}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport r;
  r.sample_count = get_field<std::size_t>(j, "sample_count");
  r.positive_count = get_field<std::size_t>(j, "positive_count");
  r.auc = get_field<double>(j, "auc");
  r.fpr_target = get_field<double>(j, "fpr_target");
  r.fpr_actual = get_field<double>(j, "fpr_actual");
  r.threshold = get_field<double>(j, "threshold");
  r.tpr = get_field<double>(j, "tpr");
  r.mean_iou = get_field<double>(j, "mean_iou");
  r.kind_accuracy = get_field<double>(j, "kind_accuracy");
  const json f1 = get_field<json>(j, "f1_per_kind");
  const json present = get_field<json>(j, "kind_present");
  const json counts = get_field<json>(j, "label_counts");
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    const std::string name(kind_name(kAllKinds[k]));
    r.f1_per_kind[k] = get_field<double>(f1, name.c_str());
    r.kind_present[k] = get_field<bool>(present, name.c_str());
    r.label_counts[k] = get_field<std::size_t>(counts, name.c_str());
  }
  r.label_counts[kNoneIndex] = get_field<std::size_t>(counts, "None");
  const json m = get_field<json>(get_field<json>(j, "confusion"), "matrix");
  if (!m.is_array() || m.size() != kNumClasses) throw DataError("report: confusion must be 9x9");
  for (std::size_t p = 0; p < kNumClasses; ++p) {
    if (!m[p].is_array() || m[p].size() != kNumClasses) {
      throw DataError("report: confusion must be 9x9");
    }
    for (std::size_t t = 0; t < kNumClasses; ++t) r.confusion[p][t] = m[p][t].get<double>();
  }
  return r;
}

std::string report_csv(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::string out = "Method,AUC,TPR";
  for (AdjustmentKind k : kAllKinds) out += fmt::format(",{}", kind_table_label(k));
  out += ",IoU\n";
  for (const auto& [method, r] : rows) {
    out += fmt::format("{},{:.3f},{:.3f}", method, r.auc, r.tpr);
    for (double f : r.f1_per_kind) out += fmt::format(",{:.3f}", f);
    out += fmt::format(",{:.3f}\n", r.mean_iou);
  }
  return out;
}

std::string report_markdown(const MetricsReport& r, const std::string& title) {
  std::string md = fmt::format("# {}\n\n", title);
  md += fmt::format("{} samples ({} adjust, {} no adjustment). Operating point: threshold "
                    "{:.6g} at target FPR {:.2f} (actual {:.3f}).\n\n",
                    r.sample_count, r.positive_count, r.sample_count - r.positive_count,
                    r.threshold, r.fpr_target, r.fpr_actual);
  md += "| AUC | TPR | IoU | Kind accuracy |\n|---|---|---|---|\n";
  md += fmt::format("| {:.3f} | {:.3f} | {:.3f} | {:.3f} |\n\n", r.auc, r.tpr, r.mean_iou,
                    r.kind_accuracy);

  bool any_absent = false;
  md += "| Kind | Count | F1 |\n|---|---|---|\n";
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    const bool absent = !r.kind_present[k];
    any_absent |= absent;
    md += fmt::format("| {}{} | {} | {:.3f} |\n", class_label(k), absent ? " *" : "",
                      r.label_counts[k], r.f1_per_kind[k]);
  }
  md += fmt::format("| None | {} | |\n\n", r.label_counts[kNoneIndex]);

  md += "Confusion matrix (rows: predicted, columns: ground truth; each cell is a precision)\n\n";
  md += "| |";
  for (std::size_t t = 0; t < kNumClasses; ++t) md += fmt::format(" {} |", class_label(t));
  md += "\n|---|";
  for (std::size_t t = 0; t < kNumClasses; ++t) md += "---|";
  md += "\n";
  for (std::size_t p = 0; p < kNumClasses; ++p) {
    double row = 0.0;
    for (double v : r.confusion[p]) row += v;
    const bool empty = row == 0.0;
    any_absent |= empty;
    md += fmt::format("| {}{} |", class_label(p), empty ? " *" : "");
    for (double v : r.confusion[p]) md += fmt::format(" {:.3f} |", v);
    md += "\n";
  }
  if (any_absent) md += "\n\\* class absent from this evaluation set; values shown as zeros.\n";
  return md;
}

std::string counts_csv(const KindCounts& counts, bool with_reference) {
  std::string out = with_reference ? "Family,Kind,Count,Reference\n" : "Family,Kind,Count\n";
  auto row = [&](std::string_view family, std::string_view kind, std::size_t n, std::size_t ref) {
    out += fmt::format("{},{},{}", family, kind, n);
    out += with_reference ? fmt::format(",{}\n", ref) : "\n";
  };
  std::size_t total = 0;
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    const AdjustmentKind kind = kAllKinds[k];
    total += counts[k];
    row(family_of(kind), kind_table_label(kind), counts[k], kReferenceEvalCounts[k]);
  }
  total += counts[kNoneIndex];
  row("None", "None", counts[kNoneIndex], kReferenceEvalCounts[kNoneIndex]);
  row("Total", "", total, kReferenceEvalTotal);
  return out;
}

std::filesystem::path emit_report(const MetricsReport& r, ReportFormat format,
                                  const std::filesystem::path& stem, const std::string& method) {
  std::filesystem::path path = stem;
  switch (format) {
    case ReportFormat::Json:
      path += ".json";
      write_text(path, report_to_json(r).dump(2) + "\n");
      break;
    case ReportFormat::Csv:
      path += ".csv";
      write_text(path, report_csv({{method, r}}));
      break;
    case ReportFormat::Markdown:
      path += ".md";
      write_text(path, report_markdown(r, method));
      break;
  }
  return path;
}

}  // namespace viewadj
