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

// Checkpoint layout (little-endian):
//   8 bytes  "VADJCKPT"
//   u32      format version (1)
//   u32      metadata length in bytes
//   ...      metadata JSON (model_type, trunk, out_dim, parameter_count,
//            config, config_fingerprint, suggestion_threshold)
//   f64 * parameter_count

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "viewadj/adjuster.hpp"
#include "viewadj/dense_net.hpp"
#include "viewadj/scorer.hpp"

namespace viewadj {

enum class ModelType { Scorer, Adjuster };

std::string_view model_type_name(ModelType t);

struct CheckpointMeta {
  ModelType type = ModelType::Scorer;
  nlohmann::json config = nlohmann::json::object();
  /// Operating point stored with adjusters; ignored for scorers.
  double suggestion_threshold = 0.5;
};

struct Checkpoint {
  CheckpointMeta meta;
  std::string config_fingerprint;
  DenseNet net;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> serialize_checkpoint(const DenseNet& net, const CheckpointMeta& meta);
/// Throws DataError on a malformed or truncated buffer.
Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const DenseNet& net,
                     const CheckpointMeta& meta);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Load and check the model type; throw DataError on mismatch.
ScorerModel load_scorer(const std::filesystem::path& path);

struct LoadedAdjuster {
  AdjusterModel model;
  double suggestion_threshold = 0.5;
};
LoadedAdjuster load_adjuster(const std::filesystem::path& path);

}  // namespace viewadj
