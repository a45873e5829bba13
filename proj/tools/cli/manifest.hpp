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

// Run manifest written next to each stage's primary artifact:
//   {"format": "viewadj-manifest/1", "command": "...", "seed": n,
//    "options": {name: value | {"path": rel}},
//    "inputs":  [{"path": rel, "git_blob_sha1": h} | {"path": rel, "tree_sha1": h, "files": n}],
//    "outputs": [{"path": rel, "git_blob_sha1": h}]}
// Paths are relative to the manifest's directory; there are no timestamps.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace viewadj::cli {

/// Sha1 over the sorted "relative-path NUL blob-id LF" lines of every file
/// below dir.
std::string tree_sha1(const std::filesystem::path& dir, std::size_t* file_count = nullptr);

/// Manifest entry for an existing file or directory.
nlohmann::json describe_path(const std::filesystem::path& p, const std::filesystem::path& base);

class ManifestBuilder {
 public:
  ManifestBuilder(std::string command, std::uint64_t seed, std::filesystem::path manifest_path);

  void option(const std::string& name, nlohmann::json value);
  void path_option(const std::string& name, const std::filesystem::path& p);
  void input(const std::filesystem::path& p);
  void output(const std::filesystem::path& p);

  const std::filesystem::path& path() const { return path_; }
  nlohmann::json to_json() const;
  void write() const;

 private:
  std::string command_;
  std::uint64_t seed_;
  std::filesystem::path path_;
  std::filesystem::path base_;
  nlohmann::json options_ = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
};

/// Conventional manifest location for an artifact: <artifact>.manifest.json.
std::filesystem::path manifest_path_for(const std::filesystem::path& artifact);

/// Command-line tokens that re-run the stage described by a manifest, with
/// paths resolved against the manifest's directory.
std::vector<std::string> replay_arguments(const nlohmann::json& manifest,
                                          const std::filesystem::path& manifest_path);

/// Outputs whose current content differs from the recorded hash.
std::vector<std::string> verify_outputs(const nlohmann::json& manifest,
                                        const std::filesystem::path& manifest_path);

}  // namespace viewadj::cli
