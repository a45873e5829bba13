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

// File formats.
//
// Annotations (JSON lines), one image per line:
//   {"image_id": "...", "image": "rel/path.jpg"?, "best_crop": ViewBox,
//    "scored_crops": [{"box": ViewBox, "score": s}, ...]?}
//
// Sample shards (JSON lines), one sample per line:
//   {"image_id": "...", "image": "rel/path.jpg", "box": ViewBox,
//    "best_crop": ViewBox | null, "label": Suggestion,
//    "origin": "synthetic" | "pseudo"}
//
// `image` paths are resolved against an image root supplied by the caller.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "viewadj/synthesis.hpp"

namespace viewadj {

nlohmann::json annotation_to_json(const CropAnnotation& a);
CropAnnotation annotation_from_json(const nlohmann::json& j);

std::vector<CropAnnotation> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path,
                       const std::vector<CropAnnotation>& annotations);

/// FCDB-style JSON array of {"url", "flickr_photo_id"?, "crop": [x, y, w, h]}
/// in pixels. The image file is the basename of `url`; `dims` reports
/// (width, height) for a file name relative to the image root.
using ImageDims = std::function<std::pair<int, int>(const std::string& image)>;

std::vector<CropAnnotation> convert_fcdb(const nlohmann::json& fcdb, const ImageDims& dims);

enum class GaicdColumns { X1Y1X2Y2, Y1X1Y2X2 };

/// GAICD-style directory of `<name>.txt` files, one candidate crop per line:
/// four pixel coordinates followed by a score. The image is `<name>.jpg`;
/// the best crop is the highest-scoring candidate.
std::vector<CropAnnotation> convert_gaicd(const std::filesystem::path& annotation_dir,
                                          const ImageDims& dims,
                                          GaicdColumns columns = GaicdColumns::X1Y1X2Y2,
                                          const std::string& image_ext = ".jpg");

struct SampleRecord {
  std::string image_id;
  std::string image;
  ViewBox box;
  std::optional<ViewBox> best_crop;
  Suggestion label;
  std::string origin = "synthetic";
};

nlohmann::json record_to_json(const SampleRecord& r);
SampleRecord record_from_json(const nlohmann::json& j);

std::vector<SampleRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, const std::vector<SampleRecord>& records);

SampleRecord to_record(const LabeledSample& s, const std::string& image,
                       std::string origin = "synthetic");

/// Loads each referenced image once and extracts the view for every record.
/// Records without a best crop get the sample box as best crop.
std::vector<LabeledSample> materialize(const std::vector<SampleRecord>& records,
                                       const std::filesystem::path& image_root, int view_size);

/// Read whole file; throws DataError with line numbers on malformed JSON.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace viewadj
