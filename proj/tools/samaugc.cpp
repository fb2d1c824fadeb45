// samaugc: command-line front end.
//
// Exit codes: 0 success, 1 some rows failed (the rest were processed),
// 2 fatal configuration or I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "samaug/augment.hpp"
#include "samaug/csv.hpp"
#include "samaug/dataset.hpp"
#include "samaug/ensemble.hpp"
#include "samaug/error.hpp"
#include "samaug/experiment.hpp"
#include "samaug/genmask.hpp"
#include "samaug/metrics.hpp"

namespace fs = std::filesystem;
using namespace samaug;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRowFailures = 1;
constexpr int kExitFatal = 2;

int finish(std::size_t failures) {
  if (failures == 0) return kExitOk;
  std::cerr << failures << " row(s) failed\n";
  return kExitRowFailures;
}

struct GenmaskArgs {
  std::string images;
  std::string out;
  std::size_t min_area = 64;
  int connectivity = 8;
  bool invert = false;
  int workers = 1;
};

int cmd_genmask(const GenmaskArgs& a) {
  GenMaskConfig cfg{a.min_area, a.invert, a.connectivity};
  cfg.validate();
  const fs::path out = a.out;
  fs::create_directories(out);

  // Inputs as (id, image path); a CSV manifest also gets a copy with masks attached.
  std::optional<DatasetManifest> manifest;
  std::vector<std::pair<std::string, fs::path>> inputs;
  if (fs::is_directory(a.images)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.images)) {
      const auto ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".png" || ext == ".PNG" || ext == ".f32p")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) inputs.emplace_back(f.stem().string(), f);
  } else {
    manifest = load_dataset_manifest(a.images);
    for (const auto& row : manifest->rows) inputs.emplace_back(row.id, row.image_path);
  }

  std::vector<std::optional<std::string>> errors(inputs.size());
  std::vector<fs::path> written(inputs.size());
  const auto n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic) num_threads(a.workers)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      auto masks = generate_masks(load_image(inputs[idx].second), cfg);
      masks.image_id = inputs[idx].first;
      written[idx] = fs::absolute(out / (output_stem(inputs[idx].first, idx) + ".json")).lexically_normal();
      write_mask_manifest(written[idx], masks);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }

  std::size_t failures = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    ++failures;
    std::cerr << "genmask: " << inputs[i].first << ": " << *errors[i] << '\n';
  }
  if (manifest) {
    DatasetManifest with_masks;
    with_masks.num_classes = manifest->num_classes;
    for (std::size_t i = 0; i < manifest->rows.size(); ++i) {
      if (errors[i]) continue;
      auto row = manifest->rows[i];
      row.mask_manifest_path = written[i];
      with_masks.rows.push_back(std::move(row));
    }
    write_dataset_manifest(out / "manifest.csv", with_masks);
  }
  std::cout << "wrote " << inputs.size() - failures << " mask manifest(s) to " << out.string() << '\n';
  return finish(failures);
}

struct AugmentArgs {
  std::string manifest;
  std::string mode;
  std::string out;
  std::string format = "f32p";
  int workers = 1;
};

int cmd_augment(const AugmentArgs& a) {
  const auto mode = parse_augment_mode(a.mode);
  if (mode == AugmentMode::None) throw Error(ErrorKind::BadConfig, "--mode must be samaug-c or samaug");
  const auto format = parse_export_format(a.format);
  const auto manifest = load_dataset_manifest(a.manifest);
  const auto outcome = augment_dataset(manifest, mode, a.out, format, a.workers);
  for (const auto& f : outcome.failures) std::cerr << "augment: row " << f.row << " '" << f.id << "': " << f.message << '\n';
  std::cout << "augmented " << outcome.manifest.rows.size() << " of " << manifest.rows.size() << " row(s) into "
            << a.out << '\n';
  return finish(outcome.failures.size());
}

struct EnsembleArgs {
  std::string scheme;
  std::string weights = "0.3,0.7";
  std::string pred_raw;
  std::string pred_aug;
  std::string out;
  bool normalize = false;
};

int cmd_ensemble(const EnsembleArgs& a) {
  EnsembleSpec spec;
  spec.scheme = parse_ensemble_scheme(a.scheme);
  if (spec.scheme == EnsembleScheme::WeightedAverage) spec = EnsembleSpec::parse("wavg:" + a.weights);

  const auto raw = read_predictions(a.pred_raw);
  const auto aug = read_predictions(a.pred_aug);
  std::map<std::string, const PredictionRow*> aug_by_id;
  for (const auto& r : aug) aug_by_id.emplace(r.id, &r);

  std::vector<PredictionRow> out;
  std::size_t failures = 0;
  for (const auto& r : raw) {
    try {
      const auto it = aug_by_id.find(r.id);
      if (it == aug_by_id.end()) throw Error(ErrorKind::BadManifest, "id missing from --pred-aug");
      const auto p1 = PredictionVector::probabilities(r.probs);
      const auto p2 = PredictionVector::probabilities(it->second->probs);
      auto combined = combine(spec, p1, p2);
      if (a.normalize) combined = combined.renormalized();
      out.push_back({r.id, combined.values()});
      aug_by_id.erase(it);
    } catch (const Error& e) {
      ++failures;
      std::cerr << "ensemble: '" << r.id << "': " << e.what() << '\n';
    }
  }
  for (const auto& [id, row] : aug_by_id) {
    ++failures;
    std::cerr << "ensemble: '" << id << "': id missing from --pred-raw\n";
  }
  write_predictions(a.out, out);
  std::cout << "ensembled " << out.size() << " row(s) with " << spec.label() << '\n';
  return finish(failures);
}

struct MetricsArgs {
  std::string pred;
  std::string manifest;
  std::size_t positive_class = 1;
};

int cmd_metrics(const MetricsArgs& a) {
  const auto manifest = load_dataset_manifest(a.manifest, /*check_files=*/false);
  std::map<std::string, std::size_t> label_of;
  for (const auto& row : manifest.rows) label_of.emplace(row.id, row.label);

  const auto preds = read_predictions(a.pred);
  LabeledPredictions lp;
  lp.num_classes = preds.empty() ? manifest.num_classes : preds.front().probs.size();
  std::size_t failures = 0;
  for (const auto& p : preds) {
    try {
      const auto it = label_of.find(p.id);
      if (it == label_of.end()) throw Error(ErrorKind::BadManifest, "id not in manifest");
      if (it->second >= lp.num_classes) throw Error(ErrorKind::BadManifest, "label exceeds prediction width");
      lp.items.push_back({p.id, it->second, PredictionVector::unnormalized(p.probs)});
    } catch (const Error& e) {
      ++failures;
      std::cerr << "metrics: '" << p.id << "': " << e.what() << '\n';
    }
  }
  const auto r = report(lp, a.positive_class);
  std::cout << "items " << lp.items.size() << '\n'
            << "Acc " << format_percent(r.acc) << '\n'
            << "AUC " << format_percent(r.auc) << '\n'
            << "Sen " << format_percent(r.sen) << '\n'
            << "Spe " << format_percent(r.spe) << '\n';
  if (r.macro) {
    std::cout << "averaging macro one-vs-rest over " << lp.num_classes << " classes\n";
  } else {
    std::cout << "averaging binary, positive class " << a.positive_class << '\n';
  }
  for (const auto& c : r.per_class) {
    std::cout << "class " << c.cls << " AUC " << format_percent(c.auc) << " Sen " << format_percent(c.sen) << " Spe "
              << format_percent(c.spe) << '\n';
  }
  return finish(failures);
}

struct RunArgs {
  std::string config;
  bool sweep = false;
  int workers = 0;
};

int cmd_run(const RunArgs& a) {
  auto cfg = load_experiment_config(a.config);
  if (a.workers > 0) cfg.workers = a.workers;
  const auto rep = run_experiment(cfg, a.sweep);
  std::cout << "train " << rep.train_items << ", test " << rep.test_items << ", output " << cfg.output_dir.string()
            << "\n\n"
            << format_report(rep);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAMAug-C dataset augmentation and two-branch ensemble toolkit"};
  app.require_subcommand(1);

  GenmaskArgs gm;
  auto* genmask = app.add_subcommand("genmask", "Generate mask manifests with the built-in Otsu mask generator");
  genmask->add_option("--images", gm.images, "Image directory or dataset manifest CSV")->required();
  genmask->add_option("--out", gm.out, "Output directory")->required();
  genmask->add_option("--min-area", gm.min_area, "Drop components smaller than this")->capture_default_str();
  genmask->add_option("--connectivity", gm.connectivity, "4 or 8")->check(CLI::IsMember({4, 8}))->capture_default_str();
  genmask->add_flag("--invert", gm.invert, "Mask the darker side");
  genmask->add_option("--workers", gm.workers, "Parallel workers")->check(CLI::PositiveNumber)->capture_default_str();

  AugmentArgs ag;
  auto* augment = app.add_subcommand("augment", "Augment every image of a dataset manifest");
  augment->add_option("--manifest", ag.manifest, "Dataset manifest CSV")->required();
  augment->add_option("--mode", ag.mode, "samaug-c | samaug")->required()->check(CLI::IsMember({"samaug-c", "samaug"}));
  augment->add_option("--out", ag.out, "Output directory")->required();
  augment->add_option("--format", ag.format, "f32p | png8")->check(CLI::IsMember({"f32p", "png8"}))->capture_default_str();
  augment->add_option("--workers", ag.workers, "Parallel workers")->check(CLI::PositiveNumber)->capture_default_str();

  EnsembleArgs en;
  auto* ensemble = app.add_subcommand("ensemble", "Combine raw-branch and augmented-branch predictions");
  ensemble->add_option("--scheme", en.scheme, "vote | entropy | avg | wavg")
      ->required()
      ->check(CLI::IsMember({"vote", "entropy", "avg", "wavg"}));
  ensemble->add_option("--weights", en.weights, "w1,w2 for wavg (raw, augmented)")->capture_default_str();
  ensemble->add_option("--pred-raw", en.pred_raw, "Raw-branch predictions CSV")->required();
  ensemble->add_option("--pred-aug", en.pred_aug, "Augmented-branch predictions CSV")->required();
  ensemble->add_option("--out", en.out, "Output predictions CSV")->required();
  ensemble->add_flag("--normalize", en.normalize, "Rescale outputs to sum to 1 (display only)");

  MetricsArgs me;
  auto* metrics = app.add_subcommand("metrics", "Acc / AUC / Sen / Spe of a predictions CSV");
  metrics->add_option("--pred", me.pred, "Predictions CSV")->required();
  metrics->add_option("--manifest", me.manifest, "Dataset manifest CSV with labels")->required();
  metrics->add_option("--positive-class", me.positive_class, "Positive class index")->required();

  RunArgs ru;
  auto* run = app.add_subcommand("run-experiment", "Run the two-branch experiment from a TOML config");
  run->add_option("--config", ru.config, "Experiment TOML")->required();
  run->add_flag("--sweep", ru.sweep, "Report every ensemble scheme of the sweep list");
  run->add_option("--workers", ru.workers, "Override the config's worker count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (*genmask) return cmd_genmask(gm);
    if (*augment) return cmd_augment(ag);
    if (*ensemble) return cmd_ensemble(en);
    if (*metrics) return cmd_metrics(me);
    if (*run) return cmd_run(ru);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}
