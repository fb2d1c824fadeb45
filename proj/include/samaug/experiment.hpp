#pragma once

// End-to-end two-branch run: dataset -> masks -> raw branch and augmented
// branch (same toy classifier) -> ensemble -> metrics.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "samaug/augment.hpp"
#include "samaug/ensemble.hpp"
#include "samaug/genmask.hpp"
#include "samaug/metrics.hpp"
#include "samaug/synthetic.hpp"

namespace samaug {

enum class MaskSource { GenMask, Manifest };

struct ExperimentConfig {
  // Exactly one of these describes the dataset.
  std::optional<SyntheticParams> synthetic;
  std::optional<std::filesystem::path> manifest;

  AugmentMode mode = AugmentMode::SamAugC;
  MaskSource masks = MaskSource::GenMask;
  GenMaskConfig genmask{};

  EnsembleSpec ensemble{};
  std::vector<EnsembleSpec> sweep;  // used with run_experiment(..., sweep = true)

  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "experiment_out";
  int workers = 1;
  double temperature = 0.1;
  double test_fraction = 0.5;
  std::size_t positive_class = 1;

  void validate() const;  // throws BadConfig / BadWeights / BadGeometry
};

/// The weights scan of the ensemble ablation: vote, entropy, avg and the four
/// weighted averages.
std::vector<EnsembleSpec> default_sweep();

/// Parses the TOML config. Relative paths resolve against the file's directory.
/// Throws BadConfig.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ReportRow {
  std::string name;  // "raw", "augmented", "ensemble" or "ensemble/<label>"
  MetricsReport metrics;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::size_t train_items = 0;
  std::size_t test_items = 0;

  const ReportRow* find(std::string_view name) const;
};

/// Writes under output_dir: dataset/ (synthetic only), masks/, augmented/,
/// predictions_raw.csv, predictions_aug.csv, predictions_ensemble*.csv and
/// metrics.csv. Deterministic for a fixed config regardless of workers.
/// Errors are rethrown with the failing stage in the message.
ExperimentReport run_experiment(const ExperimentConfig& config, bool sweep = false);

/// Table with one line per row, values x100 with 2 decimals.
std::string format_report(const ExperimentReport& report);

}  // namespace samaug
