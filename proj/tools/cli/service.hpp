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

// HTTP suggestion service, versioned under /v1:
//   GET  /v1/health   -> {status}
//   POST /v1/sources  image                                  -> {source_id, width, height}
//   POST /v1/score    image | {source_id, viewport?}         -> {score}
//   POST /v1/suggest  image | {source_id, viewport?}, threshold? -> suggestion JSON
//   POST /v1/refine   {source_id | image, viewport?, max_steps?, threshold?} -> {trajectory}
// Images arrive as a base64 "image" field of a JSON body, a multipart "image"
// part, or a raw PNG/JPEG body. Errors are {"error": message}.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "viewadj/adjuster.hpp"
#include "viewadj/scorer.hpp"

namespace httplib {
class Server;
}

namespace viewadj::cli {

struct ServiceConfig {
  std::size_t max_upload_bytes = 32u << 20;
  std::int64_t max_pixels = 50'000'000;
  std::size_t cache_capacity = 64;
  int max_refine_steps = 10;
  int view_size = 64;
  /// When set, uploaded sources are also written here and reloaded on a
  /// cache miss, so ids survive eviction and restarts.
  std::optional<std::filesystem::path> cache_dir;
};

/// Transport-neutral request: JSON parameters plus optional image bytes.
struct ApiRequest {
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::vector<std::uint8_t>> image;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Builds an ApiRequest from a JSON body; a string "image" field is base64.
ApiRequest request_from_json(const std::string& body);
/// Builds an ApiRequest from a raw image body.
ApiRequest request_from_bytes(const std::string& body);

/// Bounded LRU cache of decoded sources keyed by content hash.
class SourceCache {
 public:
  explicit SourceCache(std::size_t capacity) : capacity_(capacity) {}
  void put(const std::string& id, std::shared_ptr<const ImageBuffer> image);
  std::shared_ptr<const ImageBuffer> get(const std::string& id);
  std::size_t size() const;

 private:
  using Entry = std::pair<std::string, std::shared_ptr<const ImageBuffer>>;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> order_;  // most recent first
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

class SuggestionService {
 public:
  SuggestionService(AdjusterModel adjuster, double threshold,
                    std::optional<ScorerModel> scorer = std::nullopt, ServiceConfig cfg = {});

  ApiResponse health() const;
  ApiResponse sources(const ApiRequest& req);
  ApiResponse score(const ApiRequest& req);
  ApiResponse suggest(const ApiRequest& req);
  ApiResponse refine(const ApiRequest& req);

  /// Registers the /v1 routes.
  void mount(httplib::Server& server);

  const ServiceConfig& config() const { return cfg_; }
  double threshold() const { return threshold_; }

 private:
  template <typename F>
  ApiResponse guarded(F&& f);

  std::shared_ptr<const ImageBuffer> decode_upload(const std::vector<std::uint8_t>& bytes) const;
  /// Source image from an upload or a cached source_id.
  std::shared_ptr<const ImageBuffer> resolve_source(const ApiRequest& req);
  /// The requested view: the viewport over the source, or the source itself.
  ImageBuffer resolve_view(const ApiRequest& req);
  double resolve_threshold(const ApiRequest& req) const;

  const AdjusterModel adjuster_;
  const double threshold_;
  const std::optional<ScorerModel> scorer_;
  const ServiceConfig cfg_;
  SourceCache cache_;
};

}  // namespace viewadj::cli
