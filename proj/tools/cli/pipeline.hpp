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

// One function per pipeline stage. Each writes its artifacts plus a run
// manifest next to the primary artifact.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "viewadj/adjuster.hpp"
#include "viewadj/dense_net.hpp"
#include "viewadj/scorer.hpp"

namespace viewadj::cli {

using Path = std::filesystem::path;

struct TrunkOptions {
  int input_side = 32;
  std::vector<int> hidden = {256, 64};
  TrunkDescriptor descriptor() const { return {input_side, 3, hidden}; }
};

struct SynthDatasetOptions {
  Path annotations;
  Path image_root;
  Path out;
  Path counts;  // default <out>.counts.csv
  int view_size = 64;
  int max_attempts = 16;
};
void run_synth_dataset(const SynthDatasetOptions& o, std::uint64_t seed);

struct MakePairsOptions {
  Path annotations;
  Path image_root;
  Path unlabeled_dir;
  Path out;
  int n_scored = 16;
  int pairs_per_image = 4;
  int view_size = 64;
};
void run_make_pairs(const MakePairsOptions& o, std::uint64_t seed);

struct TrainScorerOptions {
  Path annotations;
  Path image_root;
  Path unlabeled_dir;
  Path mos;  // regression mode: JSON lines {image, score}
  Path out;
  Path trace;  // default <out>.loss.csv
  std::string mode = "ranking";
  int steps = 1000;
  double learning_rate = 2e-5;
  double weight_decay = 5e-4;
  double delta = 0.1;
  int n_scored = 16;
  int k_bestcrop = 16;
  int p_unlabeled = 16;
  int regression_batch = 32;
  int view_size = 64;
  bool no_augment = false;
  TrunkOptions trunk;
};
void run_train_scorer(const TrainScorerOptions& o, std::uint64_t seed);

struct PseudoLabelOptions {
  Path checkpoint;
  Path images;
  Path out;
  double margin = 0.2;
  /// Longer image side used for simulation; 0 keeps the original size.
  int work_side = 256;
};
void run_pseudo_label(const PseudoLabelOptions& o, std::uint64_t seed);

struct TrainAdjusterOptions {
  Path labeled;
  Path labeled_root;
  Path pseudo;
  Path pseudo_root;
  Path val;
  Path val_root;
  Path out;
  Path trace;  // default <out>.loss.csv
  int steps = 5000;
  double learning_rate = 2e-5;
  double weight_decay = 5e-4;
  int labeled_batch = 64;
  int pseudo_batch = 64;
  double pseudo_weight = 1.0;
  std::string weighting = "inverse";
  double fpr = 0.3;
  int view_size = 64;
  TrunkOptions trunk;
};
void run_train_adjuster(const TrainAdjusterOptions& o, std::uint64_t seed);

struct EvaluateOptions {
  Path checkpoint;
  Path dataset;
  Path image_root;
  Path out = "report";  // stem
  double fpr = 0.3;
  std::vector<std::string> formats = {"json", "csv", "md"};
  std::string method = "model";
  int view_size = 64;
};
void run_evaluate(const EvaluateOptions& o, std::uint64_t seed);

struct ConvertOptions {
  std::string format = "fcdb";
  Path input;
  Path image_root;
  Path out;
  std::string gaicd_columns = "x1y1x2y2";
  std::string image_ext = ".jpg";
};
void run_convert(const ConvertOptions& o, std::uint64_t seed);

}  // namespace viewadj::cli
