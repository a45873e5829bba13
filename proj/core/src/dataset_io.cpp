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

#include "viewadj/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "viewadj/errors.hpp"
#include "viewadj/image_io.hpp"
#include "viewadj/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace viewadj {

namespace {

std::string require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw DataError(std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

ViewBox pixel_box(double x, double y, double w, double h, int img_w, int img_h) {
  return {(x + 0.5 * w) / img_w, (y + 0.5 * h) / img_h, w / img_w, h / img_h, 0.0};
}

}  // namespace

json annotation_to_json(const CropAnnotation& a) {
  json j = {{"image_id", a.image_id}, {"best_crop", a.best_crop}};
  if (!a.image.empty()) j["image"] = a.image;
  if (!a.scored_crops.empty()) {
    json arr = json::array();
    for (const auto& sc : a.scored_crops) arr.push_back({{"box", sc.box}, {"score", sc.score}});
    j["scored_crops"] = std::move(arr);
  }
  return j;
}

CropAnnotation annotation_from_json(const json& j) {
  CropAnnotation a;
  a.image_id = require_string(j, "image_id");
  if (j.contains("image")) a.image = require_string(j, "image");
  if (!j.contains("best_crop")) throw DataError("missing field 'best_crop'");
  a.best_crop = j["best_crop"].get<ViewBox>();
  if (j.contains("scored_crops")) {
    if (!j["scored_crops"].is_array()) throw DataError("'scored_crops' must be an array");
    for (const auto& sc : j["scored_crops"]) {
      if (!sc.contains("box")) throw DataError("scored crop missing 'box'");
      a.scored_crops.push_back({sc["box"].get<ViewBox>(), require_number(sc, "score")});
    }
    if (a.scored_crops.empty()) throw DataError("'scored_crops' must be non-empty");
  }
  validate_annotation(a);
  return a;
}

std::vector<json> read_json_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<CropAnnotation> read_annotations(const fs::path& path) {
  std::vector<CropAnnotation> out;
  std::size_t n = 0;
  for (const auto& j : read_json_lines(path)) {
    ++n;
    try {
      out.push_back(annotation_from_json(j));
    } catch (const DataError& e) {
      throw DataError(path.string() + ": record " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_annotations(const fs::path& path, const std::vector<CropAnnotation>& annotations) {
  std::ostringstream os;
  for (const auto& a : annotations) os << annotation_to_json(a).dump() << '\n';
  write_text(path, os.str());
}

std::vector<CropAnnotation> convert_fcdb(const json& fcdb, const ImageDims& dims) {
  if (!fcdb.is_array()) throw DataError("FCDB annotations must be a JSON array");
  std::vector<CropAnnotation> out;
  for (const auto& item : fcdb) {
    const std::string url = require_string(item, "url");
    const std::string image = fs::path(url).filename().string();
    if (!item.contains("crop") || !item["crop"].is_array() || item["crop"].size() != 4) {
      throw DataError("FCDB record " + image + ": 'crop' must be [x, y, w, h]");
    }
    const auto [img_w, img_h] = dims(image);
    const auto& c = item["crop"];
    CropAnnotation a;
    a.image_id = item.contains("flickr_photo_id") ? item["flickr_photo_id"].dump()
                                                  : fs::path(image).stem().string();
    if (!a.image_id.empty() && a.image_id.front() == '"') {
      a.image_id = a.image_id.substr(1, a.image_id.size() - 2);
    }
    a.image = image;
    a.best_crop = pixel_box(c[0].get<double>(), c[1].get<double>(), c[2].get<double>(),
                            c[3].get<double>(), img_w, img_h);
    validate_annotation(a);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<CropAnnotation> convert_gaicd(const fs::path& annotation_dir, const ImageDims& dims,
                                          GaicdColumns columns, const std::string& image_ext) {
  if (!fs::is_directory(annotation_dir)) {
    throw DataError("not a directory: " + annotation_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(annotation_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<CropAnnotation> out;
  for (const auto& file : files) {
    CropAnnotation a;
    a.image_id = file.stem().string();
    a.image = a.image_id + image_ext;
    const auto [img_w, img_h] = dims(a.image);
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      double v[5];
      if (!(ls >> v[0] >> v[1] >> v[2] >> v[3] >> v[4])) continue;
      double x1 = v[0], y1 = v[1], x2 = v[2], y2 = v[3];
      if (columns == GaicdColumns::Y1X1Y2X2) {
        std::swap(x1, y1);
        std::swap(x2, y2);
      }
      a.scored_crops.push_back({pixel_box(x1, y1, x2 - x1, y2 - y1, img_w, img_h), v[4]});
    }
    if (a.scored_crops.empty()) throw DataError(file.string() + ": no candidate crops");
    a.best_crop = std::max_element(a.scored_crops.begin(), a.scored_crops.end(),
                                   [](const ScoredCrop& l, const ScoredCrop& r) {
                                     return l.score < r.score;
                                   })
                      ->box;
    validate_annotation(a);
    out.push_back(std::move(a));
  }
  return out;
}

json record_to_json(const SampleRecord& r) {
  json j = {{"image_id", r.image_id}, {"image", r.image}, {"box", r.box},
            {"best_crop", nullptr},   {"label", r.label}, {"origin", r.origin}};
  if (r.best_crop) j["best_crop"] = *r.best_crop;
  return j;
}

SampleRecord record_from_json(const json& j) {
  SampleRecord r;
  r.image_id = require_string(j, "image_id");
  r.image = require_string(j, "image");
  if (!j.contains("box")) throw DataError("missing field 'box'");
  r.box = j["box"].get<ViewBox>();
  if (j.contains("best_crop") && !j["best_crop"].is_null()) {
    r.best_crop = j["best_crop"].get<ViewBox>();
  }
  if (!j.contains("label")) throw DataError("missing field 'label'");
  r.label = j["label"].get<Suggestion>();
  if (j.contains("origin")) r.origin = require_string(j, "origin");
  return r;
}

std::vector<SampleRecord> read_records(const fs::path& path) {
  std::vector<SampleRecord> out;
  std::size_t n = 0;
  for (const auto& j : read_json_lines(path)) {
    ++n;
    try {
      out.push_back(record_from_json(j));
    } catch (const DataError& e) {
      throw DataError(path.string() + ": record " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_records(const fs::path& path, const std::vector<SampleRecord>& records) {
  std::ostringstream os;
  for (const auto& r : records) os << record_to_json(r).dump() << '\n';
  write_text(path, os.str());
}

SampleRecord to_record(const LabeledSample& s, const std::string& image, std::string origin) {
  return {s.meta.image_id, image, s.meta.sample_box, s.meta.best_crop, s.label,
          std::move(origin)};
}

std::vector<LabeledSample> materialize(const std::vector<SampleRecord>& records,
                                       const fs::path& image_root, int view_size) {
  std::map<std::string, ImageBuffer> cache;
  std::vector<LabeledSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = cache.find(r.image);
    if (it == cache.end()) {
      it = cache.emplace(r.image, load_image(image_root / r.image)).first;
    }
    LabeledSample s;
    s.view = extract_view(it->second, r.box, view_size, view_size);
    s.label = r.label;
    s.meta = {r.image_id, r.box, r.best_crop.value_or(r.box)};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace viewadj
