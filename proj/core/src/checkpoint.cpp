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

#include "viewadj/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "viewadj/errors.hpp"
#include "viewadj/hashing.hpp"
#include "viewadj/image_io.hpp"

using nlohmann::json;

namespace viewadj {

namespace {

constexpr char kMagic[8] = {'V', 'A', 'D', 'J', 'C', 'K', 'P', 'T'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t at, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return v;
}

ModelType parse_model_type(const std::string& s) {
  if (s == "scorer") return ModelType::Scorer;
  if (s == "adjuster") return ModelType::Adjuster;
  throw DataError("checkpoint: unknown model_type '" + s + "'");
}

}  // namespace

std::string_view model_type_name(ModelType t) {
  return t == ModelType::Scorer ? "scorer" : "adjuster";
}

std::vector<std::uint8_t> serialize_checkpoint(const DenseNet& net, const CheckpointMeta& meta) {
  const std::string config = meta.config.dump();
  json m = {{"model_type", model_type_name(meta.type)},
            {"trunk",
             {{"input_side", net.trunk().input_side},
              {"channels", net.trunk().channels},
              {"hidden", net.trunk().hidden}}},
            {"out_dim", net.out_dim()},
            {"parameter_count", net.parameter_count()},
            {"config", meta.config},
            {"config_fingerprint", git_blob_sha1(std::span<const std::uint8_t>(
                                       reinterpret_cast<const std::uint8_t*>(config.data()),
                                       config.size()))}};
  if (meta.type == ModelType::Adjuster) m["suggestion_threshold"] = meta.suggestion_threshold;
  const std::string text = m.dump();

  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.reserve(out.size() + 8 * net.parameter_count());
  for (double p : net.parameters()) put_u64(out, std::bit_cast<std::uint64_t>(p));
  return out;
}

Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw DataError("checkpoint: bad magic");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto meta_len = static_cast<std::size_t>(get_le(bytes, 12, 4));
  if (bytes.size() < 16 + meta_len) throw DataError("checkpoint: truncated metadata");
  json m;
  try {
    m = json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(meta_len));
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: bad metadata: ") + e.what());
  }

  Checkpoint ck;
  try {
    ck.meta.type = parse_model_type(m.at("model_type").get<std::string>());
    ck.meta.config = m.at("config");
    ck.config_fingerprint = m.at("config_fingerprint").get<std::string>();
    if (m.contains("suggestion_threshold")) {
      ck.meta.suggestion_threshold = m["suggestion_threshold"].get<double>();
    }
    TrunkDescriptor trunk;
    trunk.input_side = m.at("trunk").at("input_side").get<int>();
    trunk.channels = m.at("trunk").at("channels").get<int>();
    trunk.hidden = m.at("trunk").at("hidden").get<std::vector<int>>();
    ck.net = DenseNet(trunk, m.at("out_dim").get<int>());
    if (m.at("parameter_count").get<std::size_t>() != ck.net.parameter_count()) {
      throw DataError("checkpoint: parameter count does not match the architecture");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: bad metadata: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("checkpoint: bad architecture: ") + e.what());
  }

  const std::size_t n = ck.net.parameter_count();
  const std::size_t at = 16 + meta_len;
  if (bytes.size() != at + 8 * n) throw DataError("checkpoint: parameter block size mismatch");
  auto params = ck.net.parameters();
  for (std::size_t i = 0; i < n; ++i) params[i] = std::bit_cast<double>(get_le(bytes, at + 8 * i, 8));
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const DenseNet& net,
                     const CheckpointMeta& meta) {
  write_file_bytes(path, serialize_checkpoint(net, meta));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return deserialize_checkpoint(read_file_bytes(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ScorerModel load_scorer(const std::filesystem::path& path) {
  Checkpoint ck = load_checkpoint(path);
  if (ck.meta.type != ModelType::Scorer || ck.net.out_dim() != 1) {
    throw DataError(path.string() + ": not a scorer checkpoint");
  }
  return ScorerModel(std::move(ck.net));
}

LoadedAdjuster load_adjuster(const std::filesystem::path& path) {
  Checkpoint ck = load_checkpoint(path);
  if (ck.meta.type != ModelType::Adjuster || ck.net.out_dim() != kAdjusterOutputs) {
    throw DataError(path.string() + ": not an adjuster checkpoint");
  }
  return {AdjusterModel(std::move(ck.net)), ck.meta.suggestion_threshold};
}

}  // namespace viewadj
