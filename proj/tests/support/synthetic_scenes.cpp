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

#include "synthetic_scenes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace viewadj::testing {

namespace {

float hash_noise(std::uint64_t seed, long ix, long iy, int c) {
  std::uint64_t h = seed ^ (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL) ^
                    (static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4FULL) ^
                    (static_cast<std::uint64_t>(c) * 0x165667B19E3779F9ULL);
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<float>((h >> 11) * 0x1.0p-53) - 0.5f;
}

std::array<float, 3> jitter(Rng& rng, std::array<float, 3> base, double amount) {
  for (auto& v : base) v = static_cast<float>(std::clamp(v + rng.uniform(-amount, amount), 0.05, 1.0));
  return base;
}

}  // namespace

Scene random_scene(Rng& rng, const SceneStyle& style) {
  Scene s;
  const double w = rng.uniform(0.35, 0.5);
  const double margin = 0.5 * w + 0.05;
  s.disk_center = {rng.uniform(margin, 1.0 - margin), rng.uniform(margin, 1.0 - margin)};
  s.disk_radius = 0.2 * w;
  s.best_crop = {s.disk_center.x, s.disk_center.y, w, w, 0.0};
  s.sky = jitter(rng, {0.45f, 0.6f, 0.85f}, style.palette_jitter);
  s.ground = jitter(rng, {0.3f, 0.45f, 0.2f}, style.palette_jitter);
  s.disk = jitter(rng, {0.97f, 0.92f, 0.6f}, style.disk_jitter);
  s.noise_seed = rng.next_u64();
  if (style.max_distractors > 0) {
    const auto n = rng.index(static_cast<std::size_t>(style.max_distractors) + 1);
    for (std::size_t i = 0; i < n; ++i) {
      Blob b;
      b.center = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
      b.radius = s.disk_radius * rng.uniform(0.3, 0.7);
      b.color = jitter(rng, {0.4f, 0.35f, 0.3f}, 0.25);
      s.distractors.push_back(b);
    }
  }
  if (style.max_noise > 0.06) s.noise = static_cast<float>(rng.uniform(0.02, style.max_noise));
  return s;
}

ImageBuffer render(const Scene& s, const ViewBox& box, int out) {
  ImageBuffer img(out, out, 3);
  const double ca = std::cos(box.alpha), sa = std::sin(box.alpha);
  const double r2 = s.disk_radius * s.disk_radius;
  for (int y = 0; y < out; ++y) {
    for (int x = 0; x < out; ++x) {
      const double lx = ((x + 0.5) / out - 0.5) * box.w;
      const double ly = ((y + 0.5) / out - 0.5) * box.h;
      const double px = box.cx + ca * lx - sa * ly;
      const double py = box.cy + sa * lx + ca * ly;
      const double dx = px - s.disk_center.x, dy = py - s.disk_center.y;
      const std::array<float, 3>* col = py < s.disk_center.y ? &s.sky : &s.ground;
      for (const Blob& b : s.distractors) {
        const double bx = px - b.center.x, by = py - b.center.y;
        if (bx * bx + by * by <= b.radius * b.radius) col = &b.color;
      }
      if (dx * dx + dy * dy <= r2) col = &s.disk;
      const long ix = std::lround(std::floor(px * 256.0));
      const long iy = std::lround(std::floor(py * 256.0));
      for (int c = 0; c < 3; ++c) {
        const float v = (*col)[c] + s.noise * hash_noise(s.noise_seed, ix, iy, c);
        img.at(x, y, c) = std::clamp(v, 0.02f, 1.0f);
      }
    }
  }
  return img;
}

CropAnnotation annotation_for(const Scene& s, const std::string& id, Rng& rng, int scored_crops) {
  CropAnnotation a;
  a.image_id = id;
  a.image = id + ".png";
  a.best_crop = s.best_crop;
  for (int i = 0; i < scored_crops; ++i) {
    const double w = rng.uniform(0.3, 0.7);
    const ViewBox box{rng.uniform(0.5 * w, 1.0 - 0.5 * w), rng.uniform(0.5 * w, 1.0 - 0.5 * w), w,
                      w, 0.0};
    a.scored_crops.push_back({box, rotated_iou(box, s.best_crop)});
  }
  return a;
}

WildImage wild_image(const Scene& s, Rng& rng, int out, double p_identity) {
  WildImage wild;
  if (rng.uniform() >= p_identity) {
    const AdjustmentKind label = kAllKinds[rng.index(kNumKinds)];
    wild.applied = draw_adjustment_perturbation(label, rng);
  }
  wild.image = render(s, apply_perturbation(s.best_crop, wild.applied), out);
  return wild;
}

ToyTask make_task(std::uint64_t seed, int n_scenes, int source_side, int scored_crops,
                  const SceneStyle& style) {
  ToyTask t;
  Rng rng(seed);
  for (int i = 0; i < n_scenes; ++i) {
    t.scenes.push_back(random_scene(rng, style));
    t.sources.push_back(render_source(t.scenes.back(), source_side));
    t.annotations.push_back(
        annotation_for(t.scenes.back(), "scene" + std::to_string(i), rng, scored_crops));
  }
  return t;
}

std::vector<LabeledSample> labeled_samples(const ToyTask& task, std::uint64_t seed,
                                           int view_size) {
  SynthOptions opts;
  opts.view_size = view_size;
  ImageLoader loader = [&](const CropAnnotation& a) -> std::optional<ImageBuffer> {
    for (std::size_t k = 0; k < task.annotations.size(); ++k) {
      if (task.annotations[k].image_id == a.image_id) return task.sources[k];
    }
    return std::nullopt;
  };
  return synth_adjustment_dataset(task.annotations, loader, seed, opts).samples;
}

ScorerData scorer_data(const ToyTask& labeled, std::uint64_t seed, int n_unlabeled,
                       int unlabeled_side, const SceneStyle& style) {
  ScorerData d;
  for (std::size_t i = 0; i < labeled.scenes.size(); ++i) {
    d.bestcrop.push_back({labeled.sources[i], labeled.annotations[i].best_crop});
    if (labeled.annotations[i].scored_crops.size() >= 2) {
      d.scored.push_back({labeled.sources[i], labeled.annotations[i]});
    }
  }
  Rng rng(seed);
  for (int i = 0; i < n_unlabeled; ++i) {
    const Scene s = random_scene(rng, style);
    d.unlabeled.push_back(render(s, s.best_crop, unlabeled_side));
  }
  return d;
}

}  // namespace viewadj::testing
