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

// Training/evaluation data generation from crop annotations:
//   * view-adjustment samples labeled with the inverse perturbation,
//   * ranking pairs (better, worse) for the composition scorer,
//   * zero-pixel border augmentations.

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "viewadj/geometry.hpp"
#include "viewadj/image.hpp"
#include "viewadj/rng.hpp"

namespace viewadj {

struct ScoredCrop {
  ViewBox box;
  double score = 0.0;
};

struct CropAnnotation {
  std::string image_id;
  /// Image location relative to the image root; empty means image_id.
  std::string image;
  ViewBox best_crop;
  std::vector<ScoredCrop> scored_crops;

  const std::string& image_ref() const { return image.empty() ? image_id : image; }
};

/// Throws DataError if crops leave [0,1]^2, are rotated, or scored_crops is
/// present but empty.
void validate_annotation(const CropAnnotation& a);

struct SampleMeta {
  std::string image_id;
  ViewBox sample_box;
  ViewBox best_crop;
};

struct LabeledSample {
  ImageBuffer view;  // may be empty when views are not materialized
  Suggestion label;
  SampleMeta meta;
};

enum class PerturbFamily { Horizontal, Vertical, Zoom, Rotation };

struct SynthOptions {
  int view_size = 64;
  /// Draws per direction before a direction is declared infeasible.
  int max_attempts = 16;
  bool extract_views = true;
};

/// One draw of a single-axis perturbation whose inverse yields `label_kind`.
/// Ranges: shifts +/-[0.05, 0.45]; zoom [-0.310, -0.048] (label ZoomOut) or
/// [0.053, 0.818] (label ZoomIn); rotation +/-[pi/36, pi/4].
Perturbation draw_adjustment_perturbation(AdjustmentKind label_kind, Rng& rng);

/// Builds the labeled sample for an explicit perturbation, or nullopt if the
/// perturbed box leaves the image. Throws if best_crop is outside the image.
std::optional<LabeledSample> make_adjustment_sample(
    const ImageBuffer& image, const ViewBox& best_crop, const Perturbation& p,
    const SynthOptions& opts, std::string image_id = {});

/// Draws a direction uniformly within the family and one magnitude.
std::optional<LabeledSample> synth_adjustment_sample(
    const ImageBuffer& image, const ViewBox& best_crop, PerturbFamily family,
    Rng& rng, const SynthOptions& opts = {}, std::string image_id = {});

/// Retries up to opts.max_attempts draws for the given label direction.
std::optional<LabeledSample> synth_directed_sample(
    const ImageBuffer& image, const ViewBox& best_crop, AdjustmentKind label_kind,
    Rng& rng, const SynthOptions& opts = {}, std::string image_id = {});

/// Counts indexed by kind_index(); slot 8 counts no-adjustment labels.
using KindCounts = std::array<std::size_t, kNumKinds + 1>;
inline constexpr std::size_t kNoneIndex = kNumKinds;

std::size_t label_index(const Suggestion& s);

KindCounts count_labels(const std::vector<LabeledSample>& samples);

/// Returns the image for an annotation, or nullopt to skip it.
using ImageLoader = std::function<std::optional<ImageBuffer>(const CropAnnotation&)>;

struct SynthDatasetResult {
  std::vector<LabeledSample> samples;
  KindCounts counts{};
  std::size_t skipped_images = 0;
};

/// Per image: the best crop itself (no adjustment) plus one sample for each
/// of the eight label directions that has a feasible draw. Each image uses
/// the seed derive_seed(base_seed, image_id). Throws DataError if nothing
/// was produced.
SynthDatasetResult synth_adjustment_dataset(const std::vector<CropAnnotation>& annotations,
                                            const ImageLoader& loader,
                                            std::uint64_t base_seed,
                                            const SynthOptions& opts = {});

// ---------------------------------------------------------------------------
// Ranking pairs

enum class PairSource { Scored, BestCrop, Unlabeled };

std::string_view pair_source_name(PairSource s);

struct RankPair {
  ImageBuffer better;
  ImageBuffer worse;
  PairSource source = PairSource::Scored;
  ViewBox better_box;
  ViewBox worse_box;
};

/// Perturbations used to create the worse member of a scorer pair.
enum class PairPerturbation { Shifting, ZoomingOut, Cropping, Rotation };

/// Shifting: ox, oy in [-0.4, 0.4]. ZoomingOut: oz in [0, 0.4].
/// Cropping: linear scale s in [sqrt(0.5), sqrt(0.8)] (area 0.5..0.8),
/// oz = s - 1, ox, oy in [-(1-s)/2, (1-s)/2]. Rotation: [-pi/4, pi/4].
Perturbation draw_pair_perturbation(PairPerturbation kind, Rng& rng);

/// Selects min(N, size) crops without replacement and returns all pairs with
/// distinct scores, oriented so the higher score is `better`.
std::vector<RankPair> pair_from_scored(const ImageBuffer& image, const CropAnnotation& a,
                                       int n_crops, Rng& rng, int view_size = 64);

/// better = best crop; worse = one random pair perturbation kept inside the
/// image (retried up to max_attempts). nullopt if every draw left the image.
std::optional<RankPair> pair_from_bestcrop(const ImageBuffer& image, const ViewBox& best_crop,
                                           Rng& rng, int view_size = 64,
                                           int max_attempts = 16);

/// better = the whole image; worse = a random pair perturbation of the full
/// frame, zero-filled where it leaves the image.
RankPair pair_from_unlabeled(const ImageBuffer& image, Rng& rng, int view_size = 64);

// ---------------------------------------------------------------------------
// Zero-pixel border augmentation

enum class BorderMode { Shift, ZoomOut, Rotation };

struct AugmentConfig {
  double max_shift_percent = 40.0;
  double max_zoom_percent = 40.0;
  double max_rotation = std::numbers::pi / 4.0;
};

/// Zeroes sx% of columns on the left or right and sy% of rows at the top or
/// bottom.
ImageBuffer shift_borders(const ImageBuffer& image, double sx_percent, bool left,
                          double sy_percent, bool top);

/// Zeroes 0.5 * sz% of rows and columns on every side.
ImageBuffer zoom_out_borders(const ImageBuffer& image, double sz_percent);

/// Rotates by theta and then by -theta with zero-fill resampling.
ImageBuffer rotation_borders(const ImageBuffer& image, double theta);

ImageBuffer augment_borders(const ImageBuffer& image, BorderMode mode, Rng& rng,
                            const AugmentConfig& cfg = {});

/// Picks one of the three modes uniformly.
ImageBuffer augment_random(const ImageBuffer& image, Rng& rng, const AugmentConfig& cfg = {});

}  // namespace viewadj
