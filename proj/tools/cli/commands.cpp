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

#include "commands.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "inference.hpp"
#include "manifest.hpp"
#include "pipeline.hpp"
#include "service.hpp"
#include "viewadj/checkpoint.hpp"
#include "viewadj/errors.hpp"
#include "viewadj/image_io.hpp"
#include "viewadj/serialization.hpp"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen.
#include <httplib.h>

namespace viewadj::cli {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ViewBox parse_viewport(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw UsageError("--viewport must be a JSON object");
  ViewBox v;
  try {
    v = j.get<ViewBox>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("--viewport: ") + e.what());
  }
  if (!v.valid()) throw UsageError("--viewport: width and height must be positive");
  return v;
}

// View size the adjuster was trained with, unless overridden.
int resolve_view_size(const Path& checkpoint, int requested) {
  if (requested > 0) return requested;
  const Checkpoint ck = load_checkpoint(checkpoint);
  return ck.meta.config.value("view_size", 64);
}

void add_trunk(CLI::App* app, TrunkOptions& t) {
  app->add_option("--input-side", t.input_side, "Trunk input side in pixels")
      ->check(CLI::PositiveNumber);
  app->add_option("--hidden", t.hidden, "Comma-separated hidden layer widths")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
}

struct Options {
  std::uint64_t seed = 0;
  std::string log_level = "info";
  SynthDatasetOptions synth;
  MakePairsOptions pairs;
  TrainScorerOptions scorer;
  PseudoLabelOptions pseudo;
  TrainAdjusterOptions adjuster;
  EvaluateOptions evaluate;
  ConvertOptions convert;

  struct Suggest {
    Path image;
    Path checkpoint;
    std::string viewport;
    std::optional<double> threshold;
    int view_size = 0;
  } suggest;
  struct Refine {
    Path image;
    Path checkpoint;
    std::string viewport;
    std::optional<double> threshold;
    int max_steps = 3;
    int view_size = 0;
  } refine;
  struct Serve {
    Path adjuster;
    Path scorer;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<double> threshold;
    ServiceConfig service;
    int view_size = 0;
  } serve;
  struct Replay {
    Path manifest;
  } replay;
};

void configure_synth(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("synth-dataset", "Synthesize adjustment-labeled samples");
  auto& s = o.synth;
  c->add_option("--annotations", s.annotations, "Crop annotations (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--image-root", s.image_root, "Directory holding the annotated images")
      ->required()
      ->check(CLI::ExistingDirectory);
  c->add_option("--out", s.out, "Output sample records (JSON lines)")->required();
  c->add_option("--counts", s.counts, "Per-kind counts CSV (default <out>.counts.csv)");
  c->add_option("--view-size", s.view_size, "View side in pixels")->check(CLI::PositiveNumber);
  c->add_option("--max-attempts", s.max_attempts, "Draws per direction")
      ->check(CLI::PositiveNumber);
  c->callback([&] { action = [&] { run_synth_dataset(o.synth, o.seed); }; });
}

void configure_pairs(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("make-pairs", "Generate ranking pairs for inspection");
  auto& s = o.pairs;
  c->add_option("--annotations", s.annotations, "Crop annotations (JSON lines)")
      ->check(CLI::ExistingFile);
  c->add_option("--image-root", s.image_root, "Directory holding the annotated images")
      ->check(CLI::ExistingDirectory);
  c->add_option("--unlabeled", s.unlabeled_dir, "Directory of well-composed images")
      ->check(CLI::ExistingDirectory);
  c->add_option("--out", s.out, "Output pair records (JSON lines)")->required();
  c->add_option("--n-scored", s.n_scored, "Scored crops sampled per image")
      ->check(CLI::Range(2, 1 << 20));
  c->add_option("--pairs-per-image", s.pairs_per_image, "Best-crop and unlabeled pairs per image")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--view-size", s.view_size, "View side in pixels")->check(CLI::PositiveNumber);
  c->callback([&] { action = [&] { run_make_pairs(o.pairs, o.seed); }; });
}

void configure_scorer(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("train-scorer", "Train the composition scoring model");
  auto& s = o.scorer;
  c->add_option("--annotations", s.annotations, "Crop annotations (JSON lines)")
      ->check(CLI::ExistingFile);
  c->add_option("--image-root", s.image_root, "Directory holding the annotated images")
      ->check(CLI::ExistingDirectory);
  c->add_option("--unlabeled", s.unlabeled_dir, "Directory of well-composed images")
      ->check(CLI::ExistingDirectory);
  c->add_option("--mos", s.mos, "Regression targets (JSON lines {image, score})")
      ->check(CLI::ExistingFile);
  c->add_option("--out", s.out, "Output checkpoint")->required();
  c->add_option("--trace", s.trace, "Loss CSV (default <out>.loss.csv)");
  c->add_option("--mode", s.mode, "ranking or regression")
      ->check(CLI::IsMember({"ranking", "regression"}));
  c->add_option("--steps", s.steps, "Optimizer steps")->check(CLI::NonNegativeNumber);
  c->add_option("--lr", s.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
  c->add_option("--weight-decay", s.weight_decay, "Weight decay")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--delta", s.delta, "Ranking margin")->check(CLI::Range(0.0, 1.0));
  c->add_option("--n-scored", s.n_scored, "Scored crops per step")
      ->check(CLI::Range(2, 1 << 20));
  c->add_option("--k-bestcrop", s.k_bestcrop, "Best-crop pairs per step")
      ->check(CLI::PositiveNumber);
  c->add_option("--p-unlabeled", s.p_unlabeled, "Unlabeled pairs per step")
      ->check(CLI::PositiveNumber);
  c->add_option("--regression-batch", s.regression_batch, "Regression mini-batch size")
      ->check(CLI::PositiveNumber);
  c->add_option("--view-size", s.view_size, "View side in pixels")->check(CLI::PositiveNumber);
  c->add_flag("--no-augment", s.no_augment, "Disable zero-border augmentation");
  add_trunk(c, s.trunk);
  c->callback([&] {
    if (o.scorer.mode == "ranking" && o.scorer.annotations.empty() &&
        o.scorer.unlabeled_dir.empty()) {
      throw UsageError("train-scorer: ranking mode needs --annotations or --unlabeled");
    }
    if (!o.scorer.annotations.empty() && o.scorer.image_root.empty()) {
      throw UsageError("train-scorer: --annotations needs --image-root");
    }
    action = [&] { run_train_scorer(o.scorer, o.seed); };
  });
}

void configure_pseudo(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("pseudo-label", "Pseudo-label unlabeled images with a scorer");
  auto& s = o.pseudo;
  c->add_option("--checkpoint", s.checkpoint, "Scorer checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--images", s.images, "Directory of unlabeled images")
      ->required()
      ->check(CLI::ExistingDirectory);
  c->add_option("--out", s.out, "Output sample records (JSON lines)")->required();
  c->add_option("--margin", s.margin, "Required score improvement")->check(CLI::Range(0.0, 1.0));
  c->add_option("--work-side", s.work_side, "Longer side for simulation, 0 keeps the size")
      ->check(CLI::NonNegativeNumber);
  c->callback([&] { action = [&] { run_pseudo_label(o.pseudo, o.seed); }; });
}

void configure_adjuster(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("train-adjuster", "Train the view adjustment model");
  auto& s = o.adjuster;
  c->add_option("--labeled", s.labeled, "Labeled sample records")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--labeled-root", s.labeled_root, "Image root for labeled records")
      ->check(CLI::ExistingDirectory);
  c->add_option("--pseudo", s.pseudo, "Pseudo-labeled records")->check(CLI::ExistingFile);
  c->add_option("--pseudo-root", s.pseudo_root, "Image root for pseudo-labeled records")
      ->check(CLI::ExistingDirectory);
  c->add_option("--val", s.val, "Records used to pick the decision threshold")
      ->check(CLI::ExistingFile);
  c->add_option("--val-root", s.val_root, "Image root for validation records")
      ->check(CLI::ExistingDirectory);
  c->add_option("--out", s.out, "Output checkpoint")->required();
  c->add_option("--trace", s.trace, "Loss CSV (default <out>.loss.csv)");
  c->add_option("--steps", s.steps, "Optimizer steps")->check(CLI::NonNegativeNumber);
  c->add_option("--lr", s.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
  c->add_option("--weight-decay", s.weight_decay, "Weight decay")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--labeled-batch", s.labeled_batch, "Labeled samples per step")
      ->check(CLI::PositiveNumber);
  c->add_option("--pseudo-batch", s.pseudo_batch, "Pseudo-labeled samples per step")
      ->check(CLI::PositiveNumber);
  c->add_option("--pseudo-weight", s.pseudo_weight, "Scale of the pseudo-labeled term")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--weighting", s.weighting, "Class weighting: inverse or uniform")
      ->check(CLI::IsMember({"inverse", "uniform"}));
  c->add_option("--fpr", s.fpr, "Target false positive rate")->check(CLI::Range(0.0, 1.0));
  c->add_option("--view-size", s.view_size, "View side in pixels")->check(CLI::PositiveNumber);
  add_trunk(c, s.trunk);
  c->callback([&] { action = [&] { run_train_adjuster(o.adjuster, o.seed); }; });
}

void configure_evaluate(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("evaluate", "Evaluate an adjuster on labeled records");
  auto& s = o.evaluate;
  c->add_option("--checkpoint", s.checkpoint, "Adjuster checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--dataset", s.dataset, "Sample records (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--image-root", s.image_root, "Image root (default: the dataset's directory)")
      ->check(CLI::ExistingDirectory);
  c->add_option("--out", s.out, "Report path stem");
  c->add_option("--fpr", s.fpr, "Target false positive rate")->check(CLI::Range(0.0, 1.0));
  c->add_option("--formats", s.formats, "Comma-separated: json,csv,md")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "md"}));
  c->add_option("--method", s.method, "Method label in the report");
  c->add_option("--view-size", s.view_size, "View side in pixels")->check(CLI::PositiveNumber);
  c->callback([&] { action = [&] { run_evaluate(o.evaluate, o.seed); }; });
}

void configure_convert(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("convert-annotations",
                               "Convert FCDB or GAICD annotations to JSON lines");
  auto& s = o.convert;
  c->add_option("--format", s.format, "fcdb or gaicd")->check(CLI::IsMember({"fcdb", "gaicd"}));
  c->add_option("--input", s.input, "FCDB JSON file or GAICD annotation directory")
      ->required()
      ->check(CLI::ExistingPath);
  c->add_option("--image-root", s.image_root, "Directory holding the images")
      ->required()
      ->check(CLI::ExistingDirectory);
  c->add_option("--out", s.out, "Output annotations (JSON lines)")->required();
  c->add_option("--gaicd-columns", s.gaicd_columns, "GAICD column order")
      ->check(CLI::IsMember({"x1y1x2y2", "y1x1y2x2"}));
  c->add_option("--image-ext", s.image_ext, "GAICD image extension");
  c->callback([&] { action = [&] { run_convert(o.convert, o.seed); }; });
}

void configure_suggest(CLI::App& app, Options& o, std::function<void()>& action,
                       std::ostream& out) {
  auto* c = app.add_subcommand("suggest", "Print a suggestion for one image as JSON");
  auto& s = o.suggest;
  c->add_option("--image", s.image, "PNG or JPEG image")->required()->check(CLI::ExistingFile);
  c->add_option("--checkpoint", s.checkpoint, "Adjuster checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--viewport", s.viewport, "Viewport JSON over the image (default: whole image)");
  c->add_option("--threshold", s.threshold, "Override the stored decision threshold");
  c->add_option("--view-size", s.view_size, "View side (default: from the checkpoint)")
      ->check(CLI::NonNegativeNumber);
  c->callback([&] {
    std::optional<ViewBox> viewport;
    if (!o.suggest.viewport.empty()) viewport = parse_viewport(o.suggest.viewport);
    action = [&, viewport] {
      const LoadedAdjuster m = load_adjuster(o.suggest.checkpoint);
      const int vs = resolve_view_size(o.suggest.checkpoint, o.suggest.view_size);
      const ImageBuffer view = view_of(load_image(o.suggest.image), viewport, vs);
      const auto r = suggest_view(m.model, view, o.suggest.threshold.value_or(
                                                     m.suggestion_threshold));
      out << suggestion_json(r).dump() << '\n';
    };
  });
}

void configure_refine(CLI::App& app, Options& o, std::function<void()>& action,
                      std::ostream& out) {
  auto* c = app.add_subcommand("refine", "Iteratively apply suggestions; print the trajectory");
  auto& s = o.refine;
  c->add_option("--image", s.image, "Wide source image")->required()->check(CLI::ExistingFile);
  c->add_option("--checkpoint", s.checkpoint, "Adjuster checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--viewport", s.viewport, "Initial viewport JSON (default: centered, half size)");
  c->add_option("--threshold", s.threshold, "Override the stored decision threshold");
  c->add_option("--max-steps", s.max_steps, "Maximum adjustments")->check(CLI::NonNegativeNumber);
  c->add_option("--view-size", s.view_size, "View side (default: from the checkpoint)")
      ->check(CLI::NonNegativeNumber);
  c->callback([&] {
    ViewBox start = kDefaultViewport;
    if (!o.refine.viewport.empty()) start = parse_viewport(o.refine.viewport);
    action = [&, start] {
      const LoadedAdjuster m = load_adjuster(o.refine.checkpoint);
      const int vs = resolve_view_size(o.refine.checkpoint, o.refine.view_size);
      const auto t = refine_iteratively(m.model, load_image(o.refine.image), start,
                                        o.refine.max_steps,
                                        o.refine.threshold.value_or(m.suggestion_threshold), vs);
      out << trajectory_json(t).dump() << '\n';
    };
  });
}

void configure_serve(CLI::App& app, Options& o, std::function<void()>& action) {
  auto* c = app.add_subcommand("serve", "Run the HTTP suggestion service");
  auto& s = o.serve;
  c->add_option("--checkpoint", s.adjuster, "Adjuster checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--scorer", s.scorer, "Scorer checkpoint for /v1/score")
      ->check(CLI::ExistingFile);
  c->add_option("--host", s.host, "Bind address");
  c->add_option("--port", s.port, "Port")->check(CLI::Range(0, 65535));
  c->add_option("--threshold", s.threshold, "Override the stored decision threshold");
  c->add_option("--cache-size", s.service.cache_capacity, "Uploaded sources kept in memory")
      ->check(CLI::PositiveNumber);
  c->add_option("--max-upload-bytes", s.service.max_upload_bytes, "Largest accepted upload")
      ->check(CLI::PositiveNumber);
  c->add_option("--max-pixels", s.service.max_pixels, "Largest accepted image area")
      ->check(CLI::PositiveNumber);
  c->add_option("--cache-dir", s.service.cache_dir, "Directory persisting uploaded sources");
  c->add_option("--max-refine-steps", s.service.max_refine_steps, "Cap on /v1/refine steps")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--view-size", s.view_size, "View side (default: from the checkpoint)")
      ->check(CLI::NonNegativeNumber);
  c->callback([&] {
    action = [&] {
      auto& sv = o.serve;
      LoadedAdjuster m = load_adjuster(sv.adjuster);
      std::optional<ScorerModel> scorer;
      if (!sv.scorer.empty()) scorer = load_scorer(sv.scorer);
      ServiceConfig cfg = sv.service;
      cfg.view_size = resolve_view_size(sv.adjuster, sv.view_size);
      SuggestionService service(std::move(m.model), sv.threshold.value_or(m.suggestion_threshold),
                                std::move(scorer), cfg);
      httplib::Server server;
      service.mount(server);
      spdlog::info("serving on http://{}:{}/v1", sv.host, sv.port);
      if (!server.listen(sv.host, sv.port)) {
        throw std::runtime_error("cannot listen on " + sv.host + ":" + std::to_string(sv.port));
      }
    };
  });
}

void configure_replay(CLI::App& app, Options& o, std::function<void()>& action,
                      std::ostream& out) {
  auto* c = app.add_subcommand("replay", "Re-run a stage from its manifest and compare hashes");
  c->add_option("--manifest", o.replay.manifest, "Run manifest")
      ->required()
      ->check(CLI::ExistingFile);
  c->callback([&] {
    action = [&] {
      const auto changed = replay_manifest(o.replay.manifest);
      out << json{{"manifest", o.replay.manifest.string()}, {"changed", changed}}.dump() << '\n';
      if (!changed.empty()) {
        throw DataError(std::to_string(changed.size()) + " output(s) differ from the manifest");
      }
    };
  });
}

std::optional<spdlog::level::level_enum> parse_level(const std::string& s) {
  const auto level = spdlog::level::from_str(s);
  if (level == spdlog::level::off && s != "off") return std::nullopt;
  return level;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // The logger writes to `err`; the caller's logger comes back on return.
  struct RestoreLogger {
    std::shared_ptr<spdlog::logger> saved = spdlog::default_logger();
    ~RestoreLogger() { spdlog::set_default_logger(saved); }
  } restore;
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("viewadj", sink);
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);

  Options o;
  std::function<void()> action;
  CLI::App app("Camera view adjustment suggestions", "viewadj");
  app.set_config("--config", "", "INI file; one [section] per subcommand")
      ->check(CLI::ExistingFile);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.add_option("--seed", o.seed, "Global random seed");
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off");
  app.require_subcommand(1);
  app.fallthrough();
  configure_synth(app, o, action);
  configure_pairs(app, o, action);
  configure_scorer(app, o, action);
  configure_pseudo(app, o, action);
  configure_adjuster(app, o, action);
  configure_evaluate(app, o, action);
  configure_convert(app, o, action);
  configure_suggest(app, o, action, out);
  configure_refine(app, o, action, out);
  configure_serve(app, o, action);
  configure_replay(app, o, action, out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    const auto level = parse_level(o.log_level);
    if (!level) throw UsageError("unknown log level " + o.log_level);
    logger->set_level(*level);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("malformed input: {}", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInternal;
  }
}

std::vector<std::string> replay_manifest(const Path& manifest) {
  const auto bytes = read_file_bytes(manifest);
  const json m = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (m.is_discarded()) throw DataError(manifest.string() + ": not valid JSON");
  const auto args = replay_arguments(m, manifest);
  std::ostringstream sink_out;
  std::ostringstream sink_err;
  const int code = run(args, sink_out, sink_err);
  if (code != kExitOk) {
    throw DataError("replay of " + manifest.string() + " failed (exit " + std::to_string(code) +
                    "): " + sink_err.str());
  }
  return verify_outputs(m, manifest);
}

}  // namespace viewadj::cli
