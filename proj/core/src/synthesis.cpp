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

#include "viewadj/synthesis.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "viewadj/errors.hpp"

namespace viewadj {

namespace {

constexpr double kPi = std::numbers::pi;

ImageBuffer view_of(const ImageBuffer& image, const ViewBox& box, int size) {
  return extract_view(image, box, size, size);
}

int border_count(double percent, int extent) {
  const long n = std::lround(percent / 100.0 * extent);
  return static_cast<int>(std::clamp<long>(n, 0, extent));
}

}  // namespace

void validate_annotation(const CropAnnotation& a) {
  auto check_box = [&](const ViewBox& b, const char* what) {
    if (!b.valid()) throw DataError(a.image_id + ": " + what + " has non-positive size");
    if (b.alpha != 0.0) throw DataError(a.image_id + ": " + what + " must be axis-aligned");
    if (!box_within_image(b, 1e-9)) {
      throw DataError(a.image_id + ": " + what + " lies outside the image");
    }
  };
  check_box(a.best_crop, "best_crop");
  for (const auto& sc : a.scored_crops) check_box(sc.box, "scored crop");
}

Perturbation draw_adjustment_perturbation(AdjustmentKind label_kind, Rng& rng) {
  Perturbation p;
  switch (label_kind) {
    // The perturbation moves opposite to the label it produces.
    case AdjustmentKind::Left: p.ox = rng.uniform(0.05, 0.45); break;
    case AdjustmentKind::Right: p.ox = -rng.uniform(0.05, 0.45); break;
    case AdjustmentKind::Up: p.oy = rng.uniform(0.05, 0.45); break;
    case AdjustmentKind::Down: p.oy = -rng.uniform(0.05, 0.45); break;
    case AdjustmentKind::ZoomIn: p.oz = rng.uniform(0.053, 0.818); break;
    case AdjustmentKind::ZoomOut: p.oz = -rng.uniform(0.048, 0.310); break;
    case AdjustmentKind::Clockwise: p.oalpha = rng.uniform(kPi / 36.0, kPi / 4.0); break;
    case AdjustmentKind::CounterClockwise:
      p.oalpha = -rng.uniform(kPi / 36.0, kPi / 4.0);
      break;
  }
  return p;
}

std::optional<LabeledSample> make_adjustment_sample(const ImageBuffer& image,
                                                    const ViewBox& best_crop,
                                                    const Perturbation& p,
                                                    const SynthOptions& opts,
                                                    std::string image_id) {
  if (!box_within_image(best_crop, 1e-9)) {
    throw std::invalid_argument("best crop lies outside the image");
  }
  const ViewBox sample_box = apply_perturbation(best_crop, p);
  if (!box_within_image(sample_box)) return std::nullopt;

  LabeledSample s;
  s.label = suggestion_from_inverse(invert_single_axis(p));
  s.meta = {std::move(image_id), sample_box, best_crop};
  if (opts.extract_views) s.view = view_of(image, sample_box, opts.view_size);
  return s;
}

std::optional<LabeledSample> synth_adjustment_sample(const ImageBuffer& image,
                                                     const ViewBox& best_crop,
                                                     PerturbFamily family, Rng& rng,
                                                     const SynthOptions& opts,
                                                     std::string image_id) {
  const bool first = rng.coin();
  AdjustmentKind kind{};
  switch (family) {
    case PerturbFamily::Horizontal:
      kind = first ? AdjustmentKind::Left : AdjustmentKind::Right;
      break;
    case PerturbFamily::Vertical:
      kind = first ? AdjustmentKind::Up : AdjustmentKind::Down;
      break;
    case PerturbFamily::Zoom:
      kind = first ? AdjustmentKind::ZoomIn : AdjustmentKind::ZoomOut;
      break;
    case PerturbFamily::Rotation:
      kind = first ? AdjustmentKind::Clockwise : AdjustmentKind::CounterClockwise;
      break;
  }
  return make_adjustment_sample(image, best_crop, draw_adjustment_perturbation(kind, rng),
                                opts, std::move(image_id));
}

std::optional<LabeledSample> synth_directed_sample(const ImageBuffer& image,
                                                   const ViewBox& best_crop,
                                                   AdjustmentKind label_kind, Rng& rng,
                                                   const SynthOptions& opts,
                                                   std::string image_id) {
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    auto s = make_adjustment_sample(image, best_crop,
                                    draw_adjustment_perturbation(label_kind, rng), opts,
                                    image_id);
    if (s) return s;
  }
  return std::nullopt;
}

std::size_t label_index(const Suggestion& s) {
  return s.adjust() ? kind_index(s.adjustment->kind) : kNoneIndex;
}

KindCounts count_labels(const std::vector<LabeledSample>& samples) {
  KindCounts counts{};
  for (const auto& s : samples) ++counts[label_index(s.label)];
  return counts;
}

SynthDatasetResult synth_adjustment_dataset(const std::vector<CropAnnotation>& annotations,
                                            const ImageLoader& loader,
                                            std::uint64_t base_seed,
                                            const SynthOptions& opts) {
  if (annotations.empty()) throw DataError("synth_adjustment_dataset: no annotations");
  SynthDatasetResult result;
  for (const auto& ann : annotations) {
    std::optional<ImageBuffer> image;
    try {
      validate_annotation(ann);
      image = loader(ann);
    } catch (const std::exception& e) {
      spdlog::warn("skipping {}: {}", ann.image_id, e.what());
    }
    if (!image) {
      ++result.skipped_images;
      continue;
    }
    Rng rng(derive_seed(base_seed, ann.image_id));

    LabeledSample none;
    none.label = Suggestion::none();
    none.meta = {ann.image_id, ann.best_crop, ann.best_crop};
    if (opts.extract_views) none.view = view_of(*image, ann.best_crop, opts.view_size);
    result.samples.push_back(std::move(none));

    for (AdjustmentKind kind : kAllKinds) {
      if (auto s = synth_directed_sample(*image, ann.best_crop, kind, rng, opts, ann.image_id)) {
        result.samples.push_back(std::move(*s));
      }
    }
  }
  if (result.samples.empty()) throw DataError("synth_adjustment_dataset: no samples produced");
  result.counts = count_labels(result.samples);

  std::string line;
  for (AdjustmentKind k : kAllKinds) {
    line += fmt::format(" {}={}", kind_table_label(k), result.counts[kind_index(k)]);
  }
  spdlog::info("synthesized {} samples (none={}{})", result.samples.size(),
               result.counts[kNoneIndex], line);
  return result;
}

// ---------------------------------------------------------------------------

std::string_view pair_source_name(PairSource s) {
  switch (s) {
    case PairSource::Scored: return "scored";
    case PairSource::BestCrop: return "bestcrop";
    case PairSource::Unlabeled: return "unlabeled";
  }
  return "?";
}

Perturbation draw_pair_perturbation(PairPerturbation kind, Rng& rng) {
  Perturbation p;
  switch (kind) {
    case PairPerturbation::Shifting:
      p.ox = rng.uniform(-0.4, 0.4);
      p.oy = rng.uniform(-0.4, 0.4);
      break;
    case PairPerturbation::ZoomingOut:
      p.oz = rng.uniform(0.0, 0.4);
      break;
    case PairPerturbation::Cropping: {
      const double s = rng.uniform(std::sqrt(0.5), std::sqrt(0.8));
      const double slack = 0.5 * (1.0 - s);
      p.oz = s - 1.0;
      p.ox = rng.uniform(-slack, slack);
      p.oy = rng.uniform(-slack, slack);
      break;
    }
    case PairPerturbation::Rotation:
      p.oalpha = rng.uniform(-kPi / 4.0, kPi / 4.0);
      break;
  }
  return p;
}

std::vector<RankPair> pair_from_scored(const ImageBuffer& image, const CropAnnotation& a,
                                       int n_crops, Rng& rng, int view_size) {
  if (a.scored_crops.size() < 2) {
    throw std::invalid_argument("pair_from_scored: need at least two scored crops");
  }
  std::vector<std::size_t> idx(a.scored_crops.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(n_crops, 2)),
                                              idx.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);
  }
  idx.resize(n);

  std::vector<ImageBuffer> views;
  views.reserve(n);
  for (std::size_t i : idx) views.push_back(view_of(image, a.scored_crops[i].box, view_size));

  std::vector<RankPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& ci = a.scored_crops[idx[i]];
      const auto& cj = a.scored_crops[idx[j]];
      if (ci.score == cj.score) continue;
      const bool i_better = ci.score > cj.score;
      RankPair p;
      p.source = PairSource::Scored;
      p.better = views[i_better ? i : j];
      p.worse = views[i_better ? j : i];
      p.better_box = i_better ? ci.box : cj.box;
      p.worse_box = i_better ? cj.box : ci.box;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

std::optional<RankPair> pair_from_bestcrop(const ImageBuffer& image, const ViewBox& best_crop,
                                           Rng& rng, int view_size, int max_attempts) {
  if (!box_within_image(best_crop, 1e-9)) {
    throw std::invalid_argument("pair_from_bestcrop: best crop lies outside the image");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const auto kind = static_cast<PairPerturbation>(rng.index(4));
    const ViewBox worse = apply_perturbation(best_crop, draw_pair_perturbation(kind, rng));
    if (!box_within_image(worse)) continue;
    RankPair p;
    p.source = PairSource::BestCrop;
    p.better = view_of(image, best_crop, view_size);
    p.worse = view_of(image, worse, view_size);
    p.better_box = best_crop;
    p.worse_box = worse;
    return p;
  }
  return std::nullopt;
}

RankPair pair_from_unlabeled(const ImageBuffer& image, Rng& rng, int view_size) {
  const auto kind = static_cast<PairPerturbation>(rng.index(4));
  const ViewBox full = ViewBox::full_frame();
  const ViewBox worse = apply_perturbation(full, draw_pair_perturbation(kind, rng));
  RankPair p;
  p.source = PairSource::Unlabeled;
  p.better = view_of(image, full, view_size);
  p.worse = view_of(image, worse, view_size);
  p.better_box = full;
  p.worse_box = worse;
  return p;
}

// ---------------------------------------------------------------------------

ImageBuffer shift_borders(const ImageBuffer& image, double sx_percent, bool left,
                          double sy_percent, bool top) {
  ImageBuffer out = image;
  const int W = image.width(), H = image.height(), C = image.channels();
  const int cols = border_count(sx_percent, W);
  const int rows = border_count(sy_percent, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const bool col_hit = left ? x < cols : x >= W - cols;
      const bool row_hit = top ? y < rows : y >= H - rows;
      if (col_hit || row_hit) {
        for (int c = 0; c < C; ++c) out.at(x, y, c) = 0.0f;
      }
    }
  }
  return out;
}

ImageBuffer zoom_out_borders(const ImageBuffer& image, double sz_percent) {
  ImageBuffer out = image;
  const int W = image.width(), H = image.height(), C = image.channels();
  const int cols = border_count(0.5 * sz_percent, W);
  const int rows = border_count(0.5 * sz_percent, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (x < cols || x >= W - cols || y < rows || y >= H - rows) {
        for (int c = 0; c < C; ++c) out.at(x, y, c) = 0.0f;
      }
    }
  }
  return out;
}

ImageBuffer rotation_borders(const ImageBuffer& image, double theta) {
  if (theta == 0.0) return image;
  const int W = image.width(), H = image.height();
  ViewBox box = ViewBox::full_frame();
  box.alpha = theta;
  const ImageBuffer once = extract_view(image, box, W, H);
  box.alpha = -theta;
  return extract_view(once, box, W, H);
}

ImageBuffer augment_borders(const ImageBuffer& image, BorderMode mode, Rng& rng,
                            const AugmentConfig& cfg) {
  switch (mode) {
    case BorderMode::Shift: {
      const double sx = rng.uniform(0.0, cfg.max_shift_percent);
      const bool left = rng.coin();
      const double sy = rng.uniform(0.0, cfg.max_shift_percent);
      const bool top = rng.coin();
      return shift_borders(image, sx, left, sy, top);
    }
    case BorderMode::ZoomOut:
      return zoom_out_borders(image, rng.uniform(0.0, cfg.max_zoom_percent));
    case BorderMode::Rotation:
      return rotation_borders(image, rng.uniform(-cfg.max_rotation, cfg.max_rotation));
  }
  return image;
}

ImageBuffer augment_random(const ImageBuffer& image, Rng& rng, const AugmentConfig& cfg) {
  return augment_borders(image, static_cast<BorderMode>(rng.index(3)), rng, cfg);
}

}  // namespace viewadj
