#include "samaug/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <toml.hpp>

#include "samaug/csv.hpp"
#include "samaug/dataset.hpp"
#include "samaug/error.hpp"
#include "samaug/toy_classifier.hpp"

namespace samaug {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (synthetic.has_value() == manifest.has_value()) {
    throw Error(ErrorKind::BadConfig, "exactly one of a synthetic dataset or a manifest must be given");
  }
  if (synthetic) synthetic->validate();
  genmask.validate();
  if (ensemble.scheme == EnsembleScheme::WeightedAverage) ensemble.weights.validate();
  for (const auto& s : sweep) {
    if (s.scheme == EnsembleScheme::WeightedAverage) s.weights.validate();
  }
  if (workers < 1) throw Error(ErrorKind::BadConfig, "workers must be >= 1");
  if (!(temperature > 0.0)) throw Error(ErrorKind::BadConfig, "temperature must be positive");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error(ErrorKind::BadConfig, "test_fraction must lie in (0, 1)");
}

std::vector<EnsembleSpec> default_sweep() {
  using S = EnsembleScheme;
  return {{S::Vote, {}},
          {S::Entropy, {}},
          {S::Average, {}},
          {S::WeightedAverage, {0.6, 0.4}},
          {S::WeightedAverage, {0.4, 0.6}},
          {S::WeightedAverage, {0.7, 0.3}},
          {S::WeightedAverage, {0.3, 0.7}}};
}

namespace {

template <typename T>
T get_or(const toml::node_view<const toml::node>& node, const char* key, T fallback) {
  const auto v = node[key];
  if (!v) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    if (auto d = v.value<double>()) return *d;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto b = v.as_boolean()) return b->get();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto s = v.as_string()) return s->get();
  } else {
    if (auto i = v.as_integer(); i && i->get() >= 0) return static_cast<T>(i->get());
  }
  throw Error(ErrorKind::BadConfig, std::string("field '") + key + "' has the wrong type");
}

EnsembleWeights parse_weights(const toml::node_view<const toml::node>& node) {
  const auto* arr = node.as_array();
  if (arr == nullptr || arr->size() != 2) throw Error(ErrorKind::BadConfig, "ensemble.weights must be [w1, w2]");
  const auto w1 = (*arr)[0].value<double>();
  const auto w2 = (*arr)[1].value<double>();
  if (!w1 || !w2) throw Error(ErrorKind::BadConfig, "ensemble.weights must hold numbers");
  EnsembleWeights w{*w1, *w2};
  w.validate();
  return w;
}

}  // namespace

ExperimentConfig load_experiment_config(const fs::path& path) {
  toml::table doc;
  try {
    doc = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << path.string() << ": " << e.description() << " at line " << e.source().begin.line;
    throw Error(ErrorKind::BadConfig, msg.str());
  }
  const auto base = fs::absolute(path).parent_path();
  const toml::node_view<const toml::node> root{static_cast<const toml::node&>(doc)};

  ExperimentConfig cfg;
  try {
    cfg.seed = get_or<std::uint64_t>(root, "seed", cfg.seed);
    cfg.output_dir = base / get_or<std::string>(root, "output_dir", cfg.output_dir.string());
    cfg.workers = get_or<int>(root, "workers", cfg.workers);
    cfg.temperature = get_or<double>(root, "temperature", cfg.temperature);
    cfg.test_fraction = get_or<double>(root, "test_fraction", cfg.test_fraction);
    cfg.positive_class = get_or<std::size_t>(root, "positive_class", cfg.positive_class);

    const auto ds = root["dataset"];
    const auto kind = get_or<std::string>(ds, "kind", "synthetic");
    if (kind == "synthetic") {
      SyntheticParams p;
      p.n_per_class = get_or<std::size_t>(ds, "n_per_class", p.n_per_class);
      p.image_size = get_or<std::size_t>(ds, "image_size", p.image_size);
      p.disk_radius = get_or<double>(ds, "disk_radius", p.disk_radius);
      p.intensity_delta = get_or<double>(ds, "intensity_delta", p.intensity_delta);
      p.noise_sigma = get_or<double>(ds, "noise_sigma", p.noise_sigma);
      p.seed = cfg.seed;
      cfg.synthetic = p;
    } else if (kind == "manifest") {
      const auto p = get_or<std::string>(ds, "path", "");
      if (p.empty()) throw Error(ErrorKind::BadConfig, "dataset.path is required for kind = \"manifest\"");
      cfg.manifest = (base / p).lexically_normal();
    } else {
      throw Error(ErrorKind::BadConfig, "dataset.kind must be \"synthetic\" or \"manifest\"");
    }

    const auto aug = root["augment"];
    cfg.mode = parse_augment_mode(get_or<std::string>(aug, "mode", "samaug-c"));
    const auto masks = get_or<std::string>(aug, "masks", "genmask");
    if (masks == "genmask") {
      cfg.masks = MaskSource::GenMask;
    } else if (masks == "manifest") {
      cfg.masks = MaskSource::Manifest;
    } else {
      throw Error(ErrorKind::BadConfig, "augment.masks must be \"genmask\" or \"manifest\"");
    }
    cfg.genmask.min_area = get_or<std::size_t>(aug, "min_area", cfg.genmask.min_area);
    cfg.genmask.connectivity = get_or<int>(aug, "connectivity", cfg.genmask.connectivity);
    cfg.genmask.invert = get_or<bool>(aug, "invert", cfg.genmask.invert);

    const auto ens = root["ensemble"];
    cfg.ensemble.scheme = parse_ensemble_scheme(get_or<std::string>(ens, "scheme", "wavg"));
    if (ens["weights"]) cfg.ensemble.weights = parse_weights(ens["weights"]);
    if (const auto* sweep = ens["sweep"].as_array()) {
      for (const auto& entry : *sweep) {
        const auto text = entry.value<std::string>();
        if (!text) throw Error(ErrorKind::BadConfig, "ensemble.sweep must hold strings like \"wavg:0.3,0.7\"");
        cfg.sweep.push_back(EnsembleSpec::parse(*text));
      }
    }
    cfg.validate();
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
  return cfg;
}

const ReportRow* ExperimentReport::find(std::string_view name) const {
  for (const auto& r : rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + name + "': " + e.detail());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::IoError, std::string("stage '") + name + "': " + e.what());
  }
}

DatasetManifest attach_genmask(const DatasetManifest& in, const GenMaskConfig& cfg, const fs::path& dir,
                               int workers) {
  fs::create_directories(dir);
  DatasetManifest out = in;
  const auto n = static_cast<std::int64_t>(in.rows.size());
  std::vector<std::optional<std::string>> errors(in.rows.size());

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    auto& row = out.rows[idx];
    try {
      auto masks = generate_masks(load_image(row.image_path), cfg);
      masks.image_id = row.id;
      const auto path = fs::absolute(dir / (output_stem(row.id, idx) + ".json")).lexically_normal();
      write_mask_manifest(path, masks);
      row.mask_manifest_path = path;
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) throw Error(ErrorKind::IoError, "row '" + in.rows[i].id + "': " + *errors[i]);
  }
  write_dataset_manifest(dir / "manifest.csv", out);
  return out;
}

// Stratified split: within each class, the last round(n_k * test_fraction)
// rows in manifest order are held out.
std::vector<bool> test_split(const DatasetManifest& m, double test_fraction) {
  std::vector<std::size_t> per_class(m.num_classes, 0);
  for (const auto& r : m.rows) ++per_class[r.label];
  std::vector<std::size_t> train_quota(m.num_classes);
  for (std::size_t k = 0; k < m.num_classes; ++k) {
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(per_class[k]) * test_fraction));
    train_quota[k] = per_class[k] - std::min(n_test, per_class[k]);
    if (per_class[k] >= 2) train_quota[k] = std::clamp<std::size_t>(train_quota[k], 1, per_class[k] - 1);
  }
  std::vector<bool> is_test(m.rows.size(), false);
  std::vector<std::size_t> seen(m.num_classes, 0);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const auto k = m.rows[i].label;
    is_test[i] = seen[k]++ >= train_quota[k];
  }
  return is_test;
}

struct BranchResult {
  std::vector<PredictionVector> test_predictions;
};

BranchResult run_branch(const DatasetManifest& m, const std::vector<bool>& is_test, const ExperimentConfig& cfg) {
  const auto features = dataset_features(m, AugmentMode::None, cfg.workers);
  std::vector<Features> train;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (is_test[i]) continue;
    train.push_back(features[i]);
    labels.push_back(m.rows[i].label);
  }
  const auto model = train_toy(train, labels, m.num_classes, cfg.temperature);
  BranchResult r;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (is_test[i]) r.test_predictions.push_back(predict_toy(model, features[i]));
  }
  return r;
}

LabeledPredictions labeled(const std::vector<DatasetRow>& test_rows, const std::vector<PredictionVector>& preds,
                           std::size_t num_classes) {
  LabeledPredictions lp;
  lp.num_classes = num_classes;
  for (std::size_t i = 0; i < test_rows.size(); ++i) lp.items.push_back({test_rows[i].id, test_rows[i].label, preds[i]});
  return lp;
}

std::vector<PredictionRow> prediction_rows(const std::vector<DatasetRow>& test_rows,
                                           const std::vector<PredictionVector>& preds) {
  std::vector<PredictionRow> rows;
  for (std::size_t i = 0; i < test_rows.size(); ++i) rows.push_back({test_rows[i].id, preds[i].values()});
  return rows;
}

std::string file_label(const EnsembleSpec& spec) {
  std::string out;
  for (char ch : spec.label()) {
    if (ch == '[' || ch == ',') {
      out += '_';
    } else if (ch != ']') {
      out += ch;
    }
  }
  return out;
}

void write_metrics(const fs::path& path, const ExperimentReport& report) {
  CsvTable t;
  t.header = {"row", "acc", "auc", "sen", "spe", "averaging"};
  for (const auto& r : report.rows) {
    t.rows.push_back({r.name, format_percent(r.metrics.acc), format_percent(r.metrics.auc),
                      format_percent(r.metrics.sen), format_percent(r.metrics.spe),
                      r.metrics.macro ? "macro-ovr" : "binary"});
  }
  write_csv(path, t);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, bool sweep) {
  config.validate();
  const auto out = config.output_dir;
  fs::create_directories(out);

  const DatasetManifest dataset = stage("dataset", [&] {
    if (config.synthetic) return generate_synthetic_dataset(*config.synthetic, out / "dataset", config.workers);
    return load_dataset_manifest(*config.manifest);
  });
  if (config.positive_class >= dataset.num_classes) {
    throw Error(ErrorKind::BadConfig, "positive_class outside the dataset's classes");
  }

  const DatasetManifest with_masks = stage("masks", [&] {
    if (config.mode == AugmentMode::None || config.masks == MaskSource::Manifest) return dataset;
    return attach_genmask(dataset, config.genmask, out / "masks", config.workers);
  });

  const auto augmented = stage("augment", [&] {
    auto outcome = augment_dataset(with_masks, config.mode, out / "augmented", ExportFormat::F32p, config.workers);
    if (!outcome.failures.empty()) {
      const auto& f = outcome.failures.front();
      throw Error(ErrorKind::IoError, std::to_string(outcome.failures.size()) + " row(s) failed, first '" + f.id +
                                          "': " + f.message);
    }
    return outcome.manifest;
  });

  const auto is_test = test_split(dataset, config.test_fraction);
  std::vector<DatasetRow> test_rows;
  for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
    if (is_test[i]) test_rows.push_back(dataset.rows[i]);
  }
  if (test_rows.empty()) throw Error(ErrorKind::BadConfig, "test split is empty");

  const auto raw = stage("raw branch", [&] { return run_branch(dataset, is_test, config); });
  const auto aug = stage("augmented branch", [&] { return run_branch(augmented, is_test, config); });

  ExperimentReport report;
  report.test_items = test_rows.size();
  report.train_items = dataset.rows.size() - test_rows.size();

  stage("report", [&] {
    write_predictions(out / "predictions_raw.csv", prediction_rows(test_rows, raw.test_predictions));
    write_predictions(out / "predictions_aug.csv", prediction_rows(test_rows, aug.test_predictions));
    const auto nc = dataset.num_classes;
    report.rows.push_back({"raw", samaug::report(labeled(test_rows, raw.test_predictions, nc), config.positive_class)});
    report.rows.push_back(
        {"augmented", samaug::report(labeled(test_rows, aug.test_predictions, nc), config.positive_class)});

    const auto specs = sweep ? (config.sweep.empty() ? default_sweep() : config.sweep)
                             : std::vector<EnsembleSpec>{config.ensemble};
    for (const auto& spec : specs) {
      std::vector<PredictionVector> combined;
      for (std::size_t i = 0; i < test_rows.size(); ++i) {
        combined.push_back(combine(spec, raw.test_predictions[i], aug.test_predictions[i]));
      }
      const auto name = sweep ? "ensemble/" + spec.label() : std::string("ensemble");
      const auto file = sweep ? "predictions_ensemble_" + file_label(spec) + ".csv" : "predictions_ensemble.csv";
      write_predictions(out / file, prediction_rows(test_rows, combined));
      report.rows.push_back({name, samaug::report(labeled(test_rows, combined, nc), config.positive_class)});
    }
    write_metrics(out / "metrics.csv", report);
    return 0;
  });
  return report;
}

std::string format_report(const ExperimentReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %8s %8s %8s %8s\n", "row", "Acc", "AUC", "Sen", "Spe");
  os << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-28s %8s %8s %8s %8s%s\n", r.name.c_str(),
                  format_percent(r.metrics.acc).c_str(), format_percent(r.metrics.auc).c_str(),
                  format_percent(r.metrics.sen).c_str(), format_percent(r.metrics.spe).c_str(),
                  r.metrics.macro ? "  (macro one-vs-rest)" : "");
    os << line;
  }
  return os.str();
}

}  // namespace samaug
