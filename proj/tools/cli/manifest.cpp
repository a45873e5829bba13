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

#include "manifest.hpp"

#include <algorithm>

#include "viewadj/dataset_io.hpp"
#include "viewadj/errors.hpp"
#include "viewadj/hashing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace viewadj::cli {

namespace {

std::string relative_to(const fs::path& p, const fs::path& base) {
  const fs::path abs = fs::weakly_canonical(fs::absolute(p));
  return abs.lexically_relative(base).generic_string();
}

}  // namespace

std::string tree_sha1(const fs::path& dir, std::size_t* file_count) {
  std::vector<std::string> lines;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    lines.push_back(e.path().lexically_relative(dir).generic_string() + '\0' +
                    git_blob_sha1_file(e.path()) + '\n');
  }
  std::sort(lines.begin(), lines.end());
  std::string all;
  for (const auto& l : lines) all += l;
  if (file_count) *file_count = lines.size();
  return git_blob_sha1(std::span(reinterpret_cast<const std::uint8_t*>(all.data()), all.size()));
}

json describe_path(const fs::path& p, const fs::path& base) {
  if (fs::is_directory(p)) {
    std::size_t n = 0;
    const std::string h = tree_sha1(p, &n);
    return {{"path", relative_to(p, base)}, {"tree_sha1", h}, {"files", n}};
  }
  return {{"path", relative_to(p, base)}, {"git_blob_sha1", git_blob_sha1_file(p)}};
}

ManifestBuilder::ManifestBuilder(std::string command, std::uint64_t seed, fs::path manifest_path)
    : command_(std::move(command)),
      seed_(seed),
      path_(std::move(manifest_path)),
      base_(fs::weakly_canonical(fs::absolute(path_).parent_path())) {}

void ManifestBuilder::option(const std::string& name, json value) {
  options_[name] = std::move(value);
}

void ManifestBuilder::path_option(const std::string& name, const fs::path& p) {
  options_[name] = {{"path", relative_to(p, base_)}};
}

void ManifestBuilder::input(const fs::path& p) { inputs_.push_back(p); }
void ManifestBuilder::output(const fs::path& p) { outputs_.push_back(p); }

json ManifestBuilder::to_json() const {
  json in = json::array(), out = json::array();
  for (const auto& p : inputs_) in.push_back(describe_path(p, base_));
  for (const auto& p : outputs_) out.push_back(describe_path(p, base_));
  return {{"format", "viewadj-manifest/1"}, {"command", command_}, {"seed", seed_},
          {"options", options_}, {"inputs", in}, {"outputs", out}};
}

void ManifestBuilder::write() const { write_text(path_, to_json().dump(2) + "\n"); }

fs::path manifest_path_for(const fs::path& artifact) {
  fs::path p = artifact;
  p += ".manifest.json";
  return p;
}

std::vector<std::string> replay_arguments(const json& manifest, const fs::path& manifest_path) {
  if (!manifest.is_object() || manifest.value("format", "") != "viewadj-manifest/1") {
    throw DataError(manifest_path.string() + ": not a viewadj run manifest");
  }
  const fs::path base = fs::absolute(manifest_path).parent_path();
  std::vector<std::string> args;
  try {
    args = {"--seed", std::to_string(manifest.at("seed").get<std::uint64_t>()),
            manifest.at("command").get<std::string>()};
    for (const auto& [name, value] : manifest.at("options").items()) {
      std::string v;
      if (value.is_object()) {
        v = (base / value.at("path").get<std::string>()).lexically_normal().string();
      } else if (value.is_array()) {
        for (const auto& e : value) {
          if (!v.empty()) v += ",";
          v += e.is_string() ? e.get<std::string>() : e.dump();
        }
      } else if (value.is_string()) {
        v = value.get<std::string>();
      } else {
        v = value.dump();
      }
      args.push_back("--" + name + "=" + v);
    }
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": malformed manifest: " + e.what());
  }
  return args;
}

std::vector<std::string> verify_outputs(const json& manifest, const fs::path& manifest_path) {
  const fs::path base = fs::absolute(manifest_path).parent_path();
  std::vector<std::string> bad;
  for (const auto& o : manifest.at("outputs")) {
    const auto rel = o.at("path").get<std::string>();
    const fs::path p = base / rel;
    if (!fs::exists(p) || git_blob_sha1_file(p) != o.at("git_blob_sha1").get<std::string>()) {
      bad.push_back(rel);
    }
  }
  return bad;
}

}  // namespace viewadj::cli
