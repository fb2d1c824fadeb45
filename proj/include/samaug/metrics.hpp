#pragma once

// Acc / AUC / Sen / Spe. Undefined values (single-class AUC, zero
// denominators) are std::nullopt and print as "n/a", never as 0.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samaug/ensemble.hpp"

namespace samaug {

struct LabeledItem {
  std::string id;
  std::size_t truth = 0;
  PredictionVector probs;
};

struct LabeledPredictions {
  std::vector<LabeledItem> items;
  std::size_t num_classes = 0;

  /// Throws DimMismatch / InvalidPrediction on inconsistent items.
  void validate() const;
};

double accuracy(const LabeledPredictions& lp);

/// Mann-Whitney U / (P*Q), ties counted as 1/2. Throws SingleClass when either
/// class is absent. Invariant: auc(s, y) + auc(s, 1 - y) == 1 exactly.
double binary_auc(std::span<const double> scores, std::span<const int> labels);

struct SenSpe {
  std::optional<double> sen;
  std::optional<double> spe;
};

SenSpe sensitivity_specificity(const LabeledPredictions& lp, std::size_t positive_class);

struct ClassMetrics {
  std::size_t cls = 0;
  std::optional<double> auc;
  std::optional<double> sen;
  std::optional<double> spe;
};

struct MetricsReport {
  double acc = 0.0;
  std::optional<double> auc;
  std::optional<double> sen;
  std::optional<double> spe;
  bool macro = false;  // multiclass: auc/sen/spe are macro one-vs-rest averages
  std::vector<ClassMetrics> per_class;
};

MetricsReport report(const LabeledPredictions& lp, std::size_t positive_class);

/// value * 100 with two decimals, or "n/a".
std::string format_percent(std::optional<double> value);

}  // namespace samaug
