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

#include "pipeline.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <stdexcept>

#include "manifest.hpp"
#include "viewadj/checkpoint.hpp"
#include "viewadj/dataset_io.hpp"
#include "viewadj/errors.hpp"
#include "viewadj/evaluation.hpp"
#include "viewadj/hashing.hpp"
#include "viewadj/image_io.hpp"
#include "viewadj/pseudo_label.hpp"
#include "viewadj/report.hpp"
#include "viewadj/serialization.hpp"

namespace viewadj::cli {

namespace {

namespace fs = std::filesystem;

Path with_suffix(const Path& p, const std::string& suffix) { return Path(p.string() + suffix); }

Path or_default(const Path& p, const Path& fallback) { return p.empty() ? fallback : p; }

void ensure_parent(const Path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

nlohmann::json trunk_json(const TrunkOptions& t) {
  return {{"input_side", t.input_side}, {"hidden", t.hidden}};
}

void trunk_options(ManifestBuilder& m, const TrunkOptions& t) {
  m.option("input-side", t.input_side);
  m.option("hidden", t.hidden);
}

std::string relative_ref(const Path& p, const Path& root) {
  return fs::relative(p, root).generic_string();
}

ImageBuffer downscale(const ImageBuffer& img, int side) {
  const int longer = std::max(img.width(), img.height());
  if (side <= 0 || longer <= side) return img;
  const double s = static_cast<double>(side) / longer;
  const int w = std::max(1, static_cast<int>(img.width() * s + 0.5));
  const int h = std::max(1, static_cast<int>(img.height() * s + 0.5));
  return resize(img, w, h);
}

std::vector<LabeledSample> load_samples(const Path& records, const Path& root, int view_size) {
  return materialize(read_records(records), or_default(root, records.parent_path()), view_size);
}

AdamConfig adam_config(double lr, double wd) {
  AdamConfig a;
  a.learning_rate = lr;
  a.weight_decay = wd;
  return a;
}

std::string pair_record(const std::string& source, const std::string& image, const RankPair& p) {
  return nlohmann::json{{"source", source},
                        {"image", image},
                        {"better_box", p.better_box},
                        {"worse_box", p.worse_box}}
             .dump();
}

}  // namespace

void run_synth_dataset(const SynthDatasetOptions& o, std::uint64_t seed) {
  const auto annotations = read_annotations(o.annotations);
  const ImageLoader loader = [&](const CropAnnotation& a) -> std::optional<ImageBuffer> {
    try {
      return load_image(o.image_root / a.image_ref());
    } catch (const DataError& e) {
      spdlog::warn("skipping {}: {}", a.image_id, e.what());
      return std::nullopt;
    }
  };
  SynthOptions so;
  so.view_size = o.view_size;
  so.max_attempts = o.max_attempts;
  so.extract_views = false;
  const SynthDatasetResult result = synth_adjustment_dataset(annotations, loader, seed, so);

  std::map<std::string, std::string> image_of;
  for (const auto& a : annotations) image_of.emplace(a.image_id, a.image_ref());
  std::vector<SampleRecord> records;
  records.reserve(result.samples.size());
  for (const auto& s : result.samples) records.push_back(to_record(s, image_of.at(s.meta.image_id)));

  ensure_parent(o.out);
  write_records(o.out, records);
  const Path counts = or_default(o.counts, with_suffix(o.out, ".counts.csv"));
  write_text(counts, counts_csv(result.counts));
  spdlog::info("synth-dataset: {} samples from {} images ({} skipped)", records.size(),
               annotations.size(), result.skipped_images);

  ManifestBuilder m("synth-dataset", seed, manifest_path_for(o.out));
  m.path_option("annotations", o.annotations);
  m.path_option("image-root", o.image_root);
  m.path_option("out", o.out);
  m.path_option("counts", counts);
  m.option("view-size", o.view_size);
  m.option("max-attempts", o.max_attempts);
  m.input(o.annotations);
  m.input(o.image_root);
  m.output(o.out);
  m.output(counts);
  m.write();
}

void run_make_pairs(const MakePairsOptions& o, std::uint64_t seed) {
  if (o.annotations.empty() && o.unlabeled_dir.empty()) {
    throw std::invalid_argument("make-pairs: need annotations or an unlabeled directory");
  }
  std::string out;
  std::size_t count = 0;
  auto emit = [&](const std::string& source, const std::string& image, const RankPair& p) {
    out += pair_record(source, image, p);
    out += '\n';
    ++count;
  };
  if (!o.annotations.empty()) {
    for (const auto& a : read_annotations(o.annotations)) {
      const ImageBuffer img = load_image(o.image_root / a.image_ref());
      Rng rng(derive_seed(seed, a.image_id));
      if (a.scored_crops.size() >= 2) {
        for (const auto& p : pair_from_scored(img, a, o.n_scored, rng, o.view_size)) {
          emit("scored", a.image_ref(), p);
        }
      }
      for (int k = 0; k < o.pairs_per_image; ++k) {
        if (auto p = pair_from_bestcrop(img, a.best_crop, rng, o.view_size)) {
          emit("bestcrop", a.image_ref(), *p);
        }
      }
    }
  }
  if (!o.unlabeled_dir.empty()) {
    for (const auto& path : list_images(o.unlabeled_dir)) {
      const std::string ref = relative_ref(path, o.unlabeled_dir);
      const ImageBuffer img = load_image(path);
      Rng rng(derive_seed(seed, "unlabeled/" + ref));
      for (int k = 0; k < o.pairs_per_image; ++k) {
        emit("unlabeled", ref, pair_from_unlabeled(img, rng, o.view_size));
      }
    }
  }
  ensure_parent(o.out);
  write_text(o.out, out);
  spdlog::info("make-pairs: {} pairs", count);

  ManifestBuilder m("make-pairs", seed, manifest_path_for(o.out));
  if (!o.annotations.empty()) {
    m.path_option("annotations", o.annotations);
    m.path_option("image-root", o.image_root);
    m.input(o.annotations);
    m.input(o.image_root);
  }
  if (!o.unlabeled_dir.empty()) {
    m.path_option("unlabeled", o.unlabeled_dir);
    m.input(o.unlabeled_dir);
  }
  m.path_option("out", o.out);
  m.option("n-scored", o.n_scored);
  m.option("pairs-per-image", o.pairs_per_image);
  m.option("view-size", o.view_size);
  m.output(o.out);
  m.write();
}

void run_train_scorer(const TrainScorerOptions& o, std::uint64_t seed) {
  if (o.mode != "ranking" && o.mode != "regression") {
    throw std::invalid_argument("train-scorer: mode must be ranking or regression");
  }
  ScorerTrainConfig cfg;
  cfg.delta = o.delta;
  cfg.n_scored = o.n_scored;
  cfg.k_bestcrop = o.k_bestcrop;
  cfg.p_unlabeled = o.p_unlabeled;
  cfg.adam = adam_config(o.learning_rate, o.weight_decay);
  cfg.steps = o.steps;
  cfg.seed = seed;
  cfg.view_size = o.view_size;
  cfg.augment = !o.no_augment;
  cfg.regression_batch = o.regression_batch;
  const TrunkDescriptor trunk = o.trunk.descriptor();

  ManifestBuilder m("train-scorer", seed, manifest_path_for(o.out));
  const Path trace = or_default(o.trace, with_suffix(o.out, ".loss.csv"));
  std::string csv;
  DenseNet net;
  if (o.mode == "ranking") {
    ScorerData data;
    if (!o.annotations.empty()) {
      for (const auto& a : read_annotations(o.annotations)) {
        ImageBuffer img = load_image(o.image_root / a.image_ref());
        data.bestcrop.push_back({img, a.best_crop});
        if (a.scored_crops.size() >= 2) data.scored.push_back({std::move(img), a});
      }
      m.path_option("annotations", o.annotations);
      m.path_option("image-root", o.image_root);
      m.input(o.annotations);
      m.input(o.image_root);
    }
    if (!o.unlabeled_dir.empty()) {
      for (const auto& p : list_images(o.unlabeled_dir)) data.unlabeled.push_back(load_image(p));
      m.path_option("unlabeled", o.unlabeled_dir);
      m.input(o.unlabeled_dir);
    }
    spdlog::info("train-scorer: {} scored, {} best-crop, {} unlabeled images", data.scored.size(),
                 data.bestcrop.size(), data.unlabeled.size());
    ScorerTrainResult r = train_scorer(data, cfg, trunk);
    csv = "step,scored,bestcrop,unlabeled,total\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const auto& t = r.trace[i];
      csv += fmt::format("{},{},{},{},{}\n", i, t.scored, t.bestcrop, t.unlabeled, t.total());
    }
    net = std::move(r.model.net());
  } else {
    if (o.mos.empty()) throw std::invalid_argument("train-scorer: regression needs --mos");
    std::vector<MosSample> data;
    for (const auto& j : read_json_lines(o.mos)) {
      if (!j.is_object() || !j.contains("image") || !j["image"].is_string()) {
        throw DataError("mos record needs a string \"image\"");
      }
      const double score = require_number(j, "score");
      if (!(score >= 0.0 && score <= 1.0)) throw DataError("mos score must lie in [0, 1]");
      data.push_back({load_image(o.image_root / j["image"].get<std::string>()), score});
    }
    m.path_option("mos", o.mos);
    m.path_option("image-root", o.image_root);
    m.input(o.mos);
    m.input(o.image_root);
    RegressionTrainResult r = train_scorer_regression(data, cfg, trunk);
    csv = "step,mse\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) csv += fmt::format("{},{}\n", i, r.trace[i]);
    net = std::move(r.model.net());
  }

  CheckpointMeta meta;
  meta.type = ModelType::Scorer;
  meta.config = {{"mode", o.mode},         {"steps", o.steps},
                 {"learning_rate", o.learning_rate}, {"weight_decay", o.weight_decay},
                 {"delta", o.delta},       {"n_scored", o.n_scored},
                 {"k_bestcrop", o.k_bestcrop}, {"p_unlabeled", o.p_unlabeled},
                 {"regression_batch", o.regression_batch}, {"view_size", o.view_size},
                 {"augment", !o.no_augment}, {"seed", seed},
                 {"trunk", trunk_json(o.trunk)}};
  ensure_parent(o.out);
  save_checkpoint(o.out, net, meta);
  write_text(trace, csv);

  m.option("mode", o.mode);
  m.option("steps", o.steps);
  m.option("lr", o.learning_rate);
  m.option("weight-decay", o.weight_decay);
  m.option("delta", o.delta);
  m.option("n-scored", o.n_scored);
  m.option("k-bestcrop", o.k_bestcrop);
  m.option("p-unlabeled", o.p_unlabeled);
  m.option("regression-batch", o.regression_batch);
  m.option("view-size", o.view_size);
  if (o.no_augment) m.option("no-augment", true);
  trunk_options(m, o.trunk);
  m.path_option("out", o.out);
  m.path_option("trace", trace);
  m.output(o.out);
  m.output(trace);
  m.write();
}

void run_pseudo_label(const PseudoLabelOptions& o, std::uint64_t seed) {
  const ScorerModel scorer = load_scorer(o.checkpoint);
  PseudoLabelConfig cfg;
  cfg.margin = o.margin;
  std::vector<SampleRecord> records;
  KindCounts counts{};
  for (const auto& path : list_images(o.images)) {
    const ImageBuffer img = downscale(load_image(path), o.work_side);
    const std::string ref = relative_ref(path, o.images);
    SampleRecord r{ref, ref, ViewBox::full_frame(), std::nullopt, pseudo_label(scorer, img, cfg),
                   "pseudo"};
    ++counts[label_index(r.label)];
    records.push_back(std::move(r));
  }
  ensure_parent(o.out);
  write_records(o.out, records);
  const Path counts_path = with_suffix(o.out, ".counts.csv");
  write_text(counts_path, counts_csv(counts, false));
  spdlog::info("pseudo-label: {} images, {} adjusted", records.size(),
               records.size() - counts[kNoneIndex]);

  ManifestBuilder m("pseudo-label", seed, manifest_path_for(o.out));
  m.path_option("checkpoint", o.checkpoint);
  m.path_option("images", o.images);
  m.path_option("out", o.out);
  m.option("margin", o.margin);
  m.option("work-side", o.work_side);
  m.input(o.checkpoint);
  m.input(o.images);
  m.output(o.out);
  m.output(counts_path);
  m.write();
}

void run_train_adjuster(const TrainAdjusterOptions& o, std::uint64_t seed) {
  if (o.weighting != "inverse" && o.weighting != "uniform") {
    throw std::invalid_argument("train-adjuster: weighting must be inverse or uniform");
  }
  const auto labeled = load_samples(o.labeled, o.labeled_root, o.view_size);
  std::vector<LabeledSample> pseudo;
  if (!o.pseudo.empty()) pseudo = load_samples(o.pseudo, o.pseudo_root, o.view_size);
  spdlog::info("train-adjuster: {} labeled, {} pseudo-labeled samples", labeled.size(),
               pseudo.size());

  AdjusterTrainConfig cfg;
  cfg.labeled_batch = o.labeled_batch;
  cfg.pseudo_batch = o.pseudo_batch;
  cfg.adam = adam_config(o.learning_rate, o.weight_decay);
  cfg.steps = o.steps;
  cfg.seed = seed;
  cfg.weighting =
      o.weighting == "inverse" ? ClassWeighting::InverseFrequency : ClassWeighting::Uniform;
  cfg.pseudo_weight = o.pseudo_weight;
  AdjusterTrainResult r = train_adjuster(labeled, pseudo, cfg, o.trunk.descriptor());

  const auto val = o.val.empty() ? labeled : load_samples(o.val, o.val_root, o.view_size);
  const MetricsReport report = evaluate(r.model, val, o.fpr);
  spdlog::info("train-adjuster: threshold {:.4f} (fpr {:.3f}, auc {:.4f})", report.threshold,
               report.fpr_actual, report.auc);

  CheckpointMeta meta;
  meta.type = ModelType::Adjuster;
  meta.suggestion_threshold = report.threshold;
  meta.config = {{"steps", o.steps},
                 {"learning_rate", o.learning_rate},
                 {"weight_decay", o.weight_decay},
                 {"labeled_batch", o.labeled_batch},
                 {"pseudo_batch", o.pseudo_batch},
                 {"pseudo_weight", o.pseudo_weight},
                 {"weighting", o.weighting},
                 {"fpr", o.fpr},
                 {"view_size", o.view_size},
                 {"seed", seed},
                 {"trunk", trunk_json(o.trunk)}};
  ensure_parent(o.out);
  save_checkpoint(o.out, r.model.net(), meta);
  const Path trace = or_default(o.trace, with_suffix(o.out, ".loss.csv"));
  std::string csv = "step,labeled,pseudo\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    csv += fmt::format("{},{},{}\n", i, r.trace[i].labeled, r.trace[i].pseudo);
  }
  write_text(trace, csv);

  ManifestBuilder m("train-adjuster", seed, manifest_path_for(o.out));
  m.path_option("labeled", o.labeled);
  if (!o.labeled_root.empty()) m.path_option("labeled-root", o.labeled_root);
  m.input(o.labeled);
  m.input(or_default(o.labeled_root, o.labeled.parent_path()));
  if (!o.pseudo.empty()) {
    m.path_option("pseudo", o.pseudo);
    if (!o.pseudo_root.empty()) m.path_option("pseudo-root", o.pseudo_root);
    m.input(o.pseudo);
    m.input(or_default(o.pseudo_root, o.pseudo.parent_path()));
  }
  if (!o.val.empty()) {
    m.path_option("val", o.val);
    if (!o.val_root.empty()) m.path_option("val-root", o.val_root);
    m.input(o.val);
  }
  m.option("steps", o.steps);
  m.option("lr", o.learning_rate);
  m.option("weight-decay", o.weight_decay);
  m.option("labeled-batch", o.labeled_batch);
  m.option("pseudo-batch", o.pseudo_batch);
  m.option("pseudo-weight", o.pseudo_weight);
  m.option("weighting", o.weighting);
  m.option("fpr", o.fpr);
  m.option("view-size", o.view_size);
  trunk_options(m, o.trunk);
  m.path_option("out", o.out);
  m.path_option("trace", trace);
  m.output(o.out);
  m.output(trace);
  m.write();
}

void run_evaluate(const EvaluateOptions& o, std::uint64_t seed) {
  const LoadedAdjuster loaded = load_adjuster(o.checkpoint);
  const auto samples = load_samples(o.dataset, o.image_root, o.view_size);
  const MetricsReport report = evaluate(loaded.model, samples, o.fpr);
  spdlog::info("evaluate: {} samples, auc {:.4f}, kind accuracy {:.4f}, mean iou {:.4f}",
               report.sample_count, report.auc, report.kind_accuracy, report.mean_iou);

  ManifestBuilder m("evaluate", seed, with_suffix(o.out, ".manifest.json"));
  ensure_parent(o.out);
  for (const auto& f : o.formats) {
    ReportFormat format;
    if (f == "json") {
      format = ReportFormat::Json;
    } else if (f == "csv") {
      format = ReportFormat::Csv;
    } else if (f == "md") {
      format = ReportFormat::Markdown;
    } else {
      throw std::invalid_argument("evaluate: unknown format " + f);
    }
    m.output(emit_report(report, format, o.out, o.method));
  }
  const Path counts = with_suffix(o.out, ".counts.csv");
  write_text(counts, counts_csv(report.label_counts));
  m.output(counts);

  m.path_option("checkpoint", o.checkpoint);
  m.path_option("dataset", o.dataset);
  if (!o.image_root.empty()) m.path_option("image-root", o.image_root);
  m.path_option("out", o.out);
  m.option("fpr", o.fpr);
  m.option("formats", o.formats);
  m.option("method", o.method);
  m.option("view-size", o.view_size);
  m.input(o.checkpoint);
  m.input(o.dataset);
  m.input(or_default(o.image_root, o.dataset.parent_path()));
  m.write();
}

void run_convert(const ConvertOptions& o, std::uint64_t seed) {
  const ImageDims dims = [&](const std::string& image) {
    const ImageBuffer img = load_image(o.image_root / image);
    return std::pair<int, int>{img.width(), img.height()};
  };
  std::vector<CropAnnotation> annotations;
  if (o.format == "fcdb") {
    const auto bytes = read_file_bytes(o.input);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(o.input.string() + ": " + e.what());
    }
    annotations = convert_fcdb(j, dims);
  } else if (o.format == "gaicd") {
    GaicdColumns cols;
    if (o.gaicd_columns == "x1y1x2y2") {
      cols = GaicdColumns::X1Y1X2Y2;
    } else if (o.gaicd_columns == "y1x1y2x2") {
      cols = GaicdColumns::Y1X1Y2X2;
    } else {
      throw std::invalid_argument("convert-annotations: unknown column order " +
                                  o.gaicd_columns);
    }
    annotations = convert_gaicd(o.input, dims, cols, o.image_ext);
  } else {
    throw std::invalid_argument("convert-annotations: format must be fcdb or gaicd");
  }
  ensure_parent(o.out);
  write_annotations(o.out, annotations);
  spdlog::info("convert-annotations: {} annotations", annotations.size());

  ManifestBuilder m("convert-annotations", seed, manifest_path_for(o.out));
  m.option("format", o.format);
  m.path_option("input", o.input);
  m.path_option("image-root", o.image_root);
  m.path_option("out", o.out);
  if (o.format == "gaicd") {
    m.option("gaicd-columns", o.gaicd_columns);
    m.option("image-ext", o.image_ext);
  }
  m.input(o.input);
  m.input(o.image_root);
  m.output(o.out);
  m.write();
}

}  // namespace viewadj::cli
