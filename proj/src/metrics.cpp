#include "samaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>

#include "samaug/error.hpp"

namespace samaug {

void LabeledPredictions::validate() const {
  if (num_classes < 2) throw Error(ErrorKind::InvalidPrediction, "need at least 2 classes");
  for (const auto& item : items) {
    if (item.probs.size() != num_classes) {
      throw Error(ErrorKind::DimMismatch, "item '" + item.id + "' has " + std::to_string(item.probs.size()) +
                                              " scores, expected " + std::to_string(num_classes));
    }
    if (item.truth >= num_classes) {
      throw Error(ErrorKind::InvalidPrediction, "item '" + item.id + "' has label " + std::to_string(item.truth) +
                                                    " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
}

double accuracy(const LabeledPredictions& lp) {
  if (lp.items.empty()) throw Error(ErrorKind::EmptyInput, "accuracy of an empty prediction set");
  std::size_t correct = 0;
  for (const auto& item : lp.items) correct += argmax_label(item.probs) == item.truth ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(lp.items.size());
}

double binary_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::DimMismatch, "scores and labels differ in length");
  }
  std::int64_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorKind::InvalidPrediction, "labels must be 0 or 1");
    if (std::isnan(scores[i])) throw Error(ErrorKind::InvalidPrediction, "NaN score");
    pos += labels[i];
  }
  const std::int64_t neg = static_cast<std::int64_t>(labels.size()) - pos;
  if (pos == 0 || neg == 0) throw Error(ErrorKind::SingleClass, "AUC needs both positive and negative labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of doubled mid-ranks of the positives keeps everything integral.
  std::int64_t rank_sum2 = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const auto doubled_mid = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum2 += doubled_mid;
    }
    i = j;
  }
  const std::int64_t u2 = rank_sum2 - pos * (pos + 1);  // 2U
  const std::int64_t denom = 2 * pos * neg;

  // Evaluating the upper half as 1 - (complement) makes auc(y) + auc(1-y) == 1
  // hold exactly in floating point.
  if (2 * u2 > denom) return 1.0 - static_cast<double>(denom - u2) / static_cast<double>(denom);
  return static_cast<double>(u2) / static_cast<double>(denom);
}

namespace {

struct Confusion {
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
};

Confusion confusion(const LabeledPredictions& lp, std::size_t positive_class) {
  Confusion c;
  for (const auto& item : lp.items) {
    const bool predicted = argmax_label(item.probs) == positive_class;
    const bool actual = item.truth == positive_class;
    if (actual) {
      (predicted ? c.tp : c.fn) += 1;
    } else {
      (predicted ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> one_vs_rest_auc(const LabeledPredictions& lp, std::size_t cls) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(lp.items.size());
  labels.reserve(lp.items.size());
  for (const auto& item : lp.items) {
    scores.push_back(item.probs[cls]);
    labels.push_back(item.truth == cls ? 1 : 0);
  }
  try {
    return binary_auc(scores, labels);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingleClass) return std::nullopt;
    throw;
  }
}

std::optional<double> macro_mean(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

SenSpe sensitivity_specificity(const LabeledPredictions& lp, std::size_t positive_class) {
  if (lp.items.empty()) throw Error(ErrorKind::EmptyInput, "sensitivity/specificity of an empty prediction set");
  const auto c = confusion(lp, positive_class);
  return {ratio(c.tp, c.tp + c.fn), ratio(c.tn, c.tn + c.fp)};
}

MetricsReport report(const LabeledPredictions& lp, std::size_t positive_class) {
  if (lp.items.empty()) throw Error(ErrorKind::EmptyInput, "report on an empty prediction set");
  lp.validate();
  if (positive_class >= lp.num_classes) {
    throw Error(ErrorKind::BadConfig, "positive class " + std::to_string(positive_class) + " outside [0, " +
                                          std::to_string(lp.num_classes) + ")");
  }

  MetricsReport r;
  r.acc = accuracy(lp);
  for (std::size_t k = 0; k < lp.num_classes; ++k) {
    const auto ss = sensitivity_specificity(lp, k);
    r.per_class.push_back({k, one_vs_rest_auc(lp, k), ss.sen, ss.spe});
  }

  if (lp.num_classes == 2) {
    const auto& pc = r.per_class[positive_class];
    r.auc = pc.auc;
    r.sen = pc.sen;
    r.spe = pc.spe;
    return r;
  }

  r.macro = true;
  std::vector<std::optional<double>> aucs, sens, spes;
  for (const auto& pc : r.per_class) {
    aucs.push_back(pc.auc);
    sens.push_back(pc.sen);
    spes.push_back(pc.spe);
  }
  r.auc = macro_mean(aucs);
  r.sen = macro_mean(sens);
  r.spe = macro_mean(spes);
  return r;
}

std::string format_percent(std::optional<double> value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *value * 100.0);
  return buf;
}

}  // namespace samaug
