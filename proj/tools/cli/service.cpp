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

#include "service.hpp"

#include <spdlog/spdlog.h>

#include <stdexcept>

#include "inference.hpp"
#include "viewadj/errors.hpp"
#include "viewadj/hashing.hpp"
#include "viewadj/image_io.hpp"
#include "viewadj/serialization.hpp"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen.
#include <httplib.h>

namespace viewadj::cli {

namespace {

using json = nlohmann::json;

struct HttpError : std::runtime_error {
  HttpError(int s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  int status;
};

ApiResponse error(int status, const std::string& msg) { return {status, {{"error", msg}}}; }

std::vector<std::uint8_t> to_bytes(const std::string& s) { return {s.begin(), s.end()}; }

std::optional<ViewBox> viewport_param(const json& params) {
  if (!params.contains("viewport") || params["viewport"].is_null()) return std::nullopt;
  ViewBox v;
  try {
    v = params["viewport"].get<ViewBox>();
  } catch (const json::exception& e) {
    throw DataError(std::string("viewport: ") + e.what());
  }
  if (!v.valid()) throw DataError("viewport: width and height must be positive");
  return v;
}

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

// Multipart: the "image" part carries the bytes; other parts are JSON values
// (or plain strings when they do not parse).
ApiRequest request_from_multipart(const httplib::Request& req) {
  ApiRequest out;
  for (const auto& [name, part] : req.files) {
    if (name == "image") {
      out.image = to_bytes(part.content);
      continue;
    }
    json v = json::parse(part.content, nullptr, false);
    out.params[name] = v.is_discarded() ? json(part.content) : v;
  }
  return out;
}

ApiRequest parse_http(const httplib::Request& req) {
  if (req.is_multipart_form_data()) return request_from_multipart(req);
  const std::string type = req.get_header_value("Content-Type");
  if (type.rfind("image/", 0) == 0 || type.rfind("application/octet-stream", 0) == 0) {
    ApiRequest out = request_from_bytes(req.body);
    for (const auto& [k, v] : req.params) {
      json p = json::parse(v, nullptr, false);
      out.params[k] = p.is_discarded() ? json(v) : p;
    }
    return out;
  }
  return request_from_json(req.body);
}

}  // namespace

ApiRequest request_from_json(const std::string& body) {
  ApiRequest out;
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("request body must be a JSON object");
  if (j.contains("image")) {
    if (!j["image"].is_string()) throw DataError("image must be a base64 string");
    out.image = base64_decode(j["image"].get<std::string>());
    j.erase("image");
  }
  out.params = std::move(j);
  return out;
}

ApiRequest request_from_bytes(const std::string& body) {
  ApiRequest out;
  out.image = to_bytes(body);
  return out;
}

void SourceCache::put(const std::string& id, std::shared_ptr<const ImageBuffer> image) {
  std::lock_guard lock(mu_);
  if (auto it = index_.find(id); it != index_.end()) {
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(id, std::move(image));
  index_[id] = order_.begin();
  while (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

std::shared_ptr<const ImageBuffer> SourceCache::get(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = index_.find(id);
  if (it == index_.end()) return nullptr;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

std::size_t SourceCache::size() const {
  std::lock_guard lock(mu_);
  return order_.size();
}

SuggestionService::SuggestionService(AdjusterModel adjuster, double threshold,
                                     std::optional<ScorerModel> scorer, ServiceConfig cfg)
    : adjuster_(std::move(adjuster)),
      threshold_(threshold),
      scorer_(std::move(scorer)),
      cfg_(cfg),
      cache_(std::max<std::size_t>(cfg.cache_capacity, 1)) {}

template <typename F>
ApiResponse SuggestionService::guarded(F&& f) {
  try {
    return f();
  } catch (const HttpError& e) {
    return error(e.status, e.what());
  } catch (const DataError& e) {
    return error(400, e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return error(500, "internal error");
  }
}

std::shared_ptr<const ImageBuffer> SuggestionService::decode_upload(
    const std::vector<std::uint8_t>& bytes) const {
  if (bytes.size() > cfg_.max_upload_bytes) {
    throw HttpError(413, "image exceeds " + std::to_string(cfg_.max_upload_bytes) + " bytes");
  }
  if (bytes.empty()) throw DataError("empty image");
  auto img = std::make_shared<const ImageBuffer>(decode_image(bytes));
  if (static_cast<std::int64_t>(img->width()) * img->height() > cfg_.max_pixels) {
    throw HttpError(413, "image exceeds " + std::to_string(cfg_.max_pixels) + " pixels");
  }
  return img;
}

std::shared_ptr<const ImageBuffer> SuggestionService::resolve_source(const ApiRequest& req) {
  if (req.image) return decode_upload(*req.image);
  const auto it = req.params.find("source_id");
  if (it == req.params.end()) throw DataError("request needs an image or a source_id");
  if (!it->is_string()) throw DataError("source_id must be a string");
  const std::string id = it->get<std::string>();
  if (auto img = cache_.get(id)) return img;
  // Ids are hex digests; anything else never names a file.
  const bool hex = !id.empty() && id.find_first_not_of("0123456789abcdef") == std::string::npos;
  if (cfg_.cache_dir && hex && std::filesystem::exists(*cfg_.cache_dir / id)) {
    auto img = decode_upload(read_file_bytes(*cfg_.cache_dir / id));
    cache_.put(id, img);
    return img;
  }
  throw HttpError(404, "unknown source_id " + id);
}

ImageBuffer SuggestionService::resolve_view(const ApiRequest& req) {
  const auto source = resolve_source(req);
  return view_of(*source, viewport_param(req.params), cfg_.view_size);
}

double SuggestionService::resolve_threshold(const ApiRequest& req) const {
  const auto it = req.params.find("threshold");
  if (it == req.params.end() || it->is_null()) return threshold_;
  if (!it->is_number()) throw DataError("threshold must be a number");
  return it->get<double>();
}

ApiResponse SuggestionService::health() const { return {200, {{"status", "ok"}}}; }

ApiResponse SuggestionService::sources(const ApiRequest& req) {
  return guarded([&]() -> ApiResponse {
    if (!req.image) throw DataError("request needs an image");
    auto img = decode_upload(*req.image);
    const std::string id = sha256_hex(*req.image);
    if (cfg_.cache_dir) {
      const auto path = *cfg_.cache_dir / id;
      if (!std::filesystem::exists(path)) {
        std::filesystem::create_directories(*cfg_.cache_dir);
        write_file_bytes(path, *req.image);
      }
    }
    const json body = {{"source_id", id}, {"width", img->width()}, {"height", img->height()}};
    cache_.put(id, std::move(img));
    return {200, body};
  });
}

ApiResponse SuggestionService::score(const ApiRequest& req) {
  return guarded([&]() -> ApiResponse {
    if (!scorer_) throw HttpError(503, "no scorer checkpoint loaded");
    const ImageBuffer view = resolve_view(req);
    const auto s = scorer_->score_views(std::span<const ImageBuffer>(&view, 1));
    return {200, {{"score", s.at(0)}}};
  });
}

ApiResponse SuggestionService::suggest(const ApiRequest& req) {
  return guarded([&]() -> ApiResponse {
    const double thr = resolve_threshold(req);
    return {200, suggestion_json(suggest_view(adjuster_, resolve_view(req), thr))};
  });
}

ApiResponse SuggestionService::refine(const ApiRequest& req) {
  return guarded([&]() -> ApiResponse {
    const double thr = resolve_threshold(req);
    int steps = 3;
    if (auto it = req.params.find("max_steps"); it != req.params.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<int>() < 0) {
        throw DataError("max_steps must be a non-negative integer");
      }
      steps = std::min(it->get<int>(), cfg_.max_refine_steps);
    }
    const auto source = resolve_source(req);
    const ViewBox start = viewport_param(req.params).value_or(kDefaultViewport);
    return {200, trajectory_json(
                     refine_iteratively(adjuster_, *source, start, steps, thr, cfg_.view_size))};
  });
}

void SuggestionService::mount(httplib::Server& server) {
  server.set_payload_max_length(cfg_.max_upload_bytes * 2 + 4096);  // base64 overhead
  auto route = [this](ApiResponse (SuggestionService::*handler)(const ApiRequest&)) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      ApiResponse r = guarded([&] { return (this->*handler)(parse_http(req)); });
      send(res, r);
    };
  };
  server.Get("/v1/health",
             [this](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Post("/v1/sources", route(&SuggestionService::sources));
  server.Post("/v1/score", route(&SuggestionService::score));
  server.Post("/v1/suggest", route(&SuggestionService::suggest));
  server.Post("/v1/refine", route(&SuggestionService::refine));
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const char* msg = res.status == 413 ? "payload too large" : "not found";
      res.set_content(json{{"error", msg}}.dump(), "application/json");
    }
  });
}

}  // namespace viewadj::cli
