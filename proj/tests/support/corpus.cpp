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


#include "corpus.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "viewadj/dataset_io.hpp"
#include "viewadj/image_io.hpp"

namespace viewadj::testing {

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::array<double, 4> pixel_rect(const ViewBox& b, int side) {
  return {(b.cx - 0.5 * b.w) * side, (b.cy - 0.5 * b.h) * side, b.w * side, b.h * side};
}

}  // namespace

CorpusPaths write_corpus(const fs::path& root, const CorpusOptions& opts) {
  CorpusPaths p;
  p.root = fresh_dir(root);
  p.images = fresh_dir(root / "images");
  p.unlabeled = fresh_dir(root / "unlabeled");
  p.wild = fresh_dir(root / "wild");
  p.annotations = root / "annotations.jsonl";

  ToyTask task =
      make_task(opts.seed, opts.scenes, opts.source_side, opts.scored_crops, opts.style);
  for (std::size_t i = 0; i < task.scenes.size(); ++i) {
    auto& a = task.annotations[i];
    a.image = a.image_id + ".png";
    save_png(p.images / a.image, task.sources[i]);
  }
  write_annotations(p.annotations, task.annotations);

  Rng rng(opts.seed + 1);
  for (int i = 0; i < opts.unlabeled; ++i) {
    const Scene s = random_scene(rng, opts.style);
    save_png(p.unlabeled / fmt::format("u{:04d}.png", i), render(s, s.best_crop, opts.wild_side));
  }
  for (int i = 0; i < opts.wild; ++i) {
    const Scene s = random_scene(rng, opts.style);
    save_png(p.wild / fmt::format("w{:04d}.png", i), wild_image(s, rng, opts.wild_side).image);
  }
  const fs::path fcdb = write_mock_fcdb(root / "fcdb", opts.seed + 2, 4, opts.source_side);
  p.fcdb_json = fcdb / "fcdb.json";
  p.fcdb_images = fcdb / "images";
  return p;
}

std::vector<CliStep> pipeline_steps(const CorpusPaths& c, const fs::path& out,
                                    std::uint64_t seed) {
  const auto s = [](const fs::path& p) { return p.string(); };
  const std::vector<std::string> global = {"--seed", std::to_string(seed), "--log-level", "warn"};
  const std::vector<std::string> small = {"--view-size", "16", "--input-side", "8",
                                          "--hidden", "16"};
  std::vector<CliStep> steps = {
      {"synth-dataset",
       {"synth-dataset", "--annotations", s(c.annotations), "--image-root", s(c.images),
        "--out", s(out / "labeled.jsonl"), "--view-size", "16"},
       ""},
      {"make-pairs",
       {"make-pairs", "--annotations", s(c.annotations), "--image-root", s(c.images),
        "--unlabeled", s(c.unlabeled), "--out", s(out / "pairs.jsonl"), "--view-size", "16"},
       ""},
      {"train-scorer",
       {"train-scorer", "--annotations", s(c.annotations), "--image-root", s(c.images),
        "--unlabeled", s(c.unlabeled), "--out", s(out / "scorer.ckpt"), "--steps", "20"},
       ""},
      {"pseudo-label",
       {"pseudo-label", "--checkpoint", s(out / "scorer.ckpt"), "--images", s(c.wild), "--out",
        s(out / "pseudo.jsonl"), "--work-side", "32"},
       ""},
      {"train-adjuster",
       {"train-adjuster", "--labeled", s(out / "labeled.jsonl"), "--pseudo",
        s(out / "pseudo.jsonl"), "--labeled-root", s(c.images), "--pseudo-root", s(c.wild),
        "--out", s(out / "adjuster.ckpt"), "--steps", "20"},
       ""},
      {"evaluate",
       {"evaluate", "--checkpoint", s(out / "adjuster.ckpt"), "--dataset",
        s(out / "labeled.jsonl"), "--image-root", s(c.images), "--out", s(out / "eval"),
        "--formats", "json,csv,md"},
       ""},
      {"convert-annotations",
       {"convert-annotations", "--format", "fcdb", "--input", s(c.fcdb_json), "--image-root",
        s(c.fcdb_images), "--out", s(out / "fcdb.jsonl")},
       ""},
      {"suggest",
       {"suggest", "--image", s(c.wild / "w0000.png"), "--checkpoint", s(out / "adjuster.ckpt")},
       "suggest.json"},
      {"refine",
       {"refine", "--image", s(c.images / "scene0.png"), "--checkpoint",
        s(out / "adjuster.ckpt"), "--max-steps", "3"},
       "refine.json"},
  };
  for (auto& step : steps) {
    if (step.stage == "train-scorer" || step.stage == "train-adjuster") {
      step.args.insert(step.args.end(), small.begin(), small.end());
    }
    step.args.insert(step.args.begin(), global.begin(), global.end());
  }
  return steps;
}

fs::path write_mock_fcdb(const fs::path& root, std::uint64_t seed, int n, int side) {
  fresh_dir(root);
  const fs::path images = fresh_dir(root / "images");
  Rng rng(seed);
  nlohmann::json list = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    const Scene s = random_scene(rng);
    const std::string name = fmt::format("{}_fcdb.jpg", 1000 + i);
    write_file_bytes(images / name, encode_jpeg(render_source(s, side)));
    const auto r = pixel_rect(s.best_crop, side);
    list.push_back({{"url", "http://farm.example/" + name},
                    {"flickr_photo_id", 1000 + i},
                    {"crop", {r[0], r[1], r[2], r[3]}}});
  }
  write_text(root / "fcdb.json", list.dump(1) + "\n");
  return root;
}

fs::path write_mock_gaicd(const fs::path& root, std::uint64_t seed, int n, int side,
                          int candidates) {
  fresh_dir(root);
  const fs::path images = fresh_dir(root / "images");
  const fs::path ann = fresh_dir(root / "annotations");
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const Scene s = random_scene(rng);
    const std::string name = fmt::format("g{:04d}", i);
    write_file_bytes(images / (name + ".jpg"), encode_jpeg(render_source(s, side)));
    const CropAnnotation a = annotation_for(s, name, rng, candidates);
    std::string txt;
    auto line = [&](const ViewBox& b, double score) {
      const auto r = pixel_rect(b, side);
      txt += fmt::format("{:.0f} {:.0f} {:.0f} {:.0f} {:.4f}\n", r[0], r[1], r[0] + r[2],
                         r[1] + r[3], score);
    };
    for (const auto& c : a.scored_crops) line(c.box, 4.0 * c.score);
    line(s.best_crop, 5.0);
    write_text(ann / (name + ".txt"), txt);
  }
  return root;
}

}  // namespace viewadj::testing
