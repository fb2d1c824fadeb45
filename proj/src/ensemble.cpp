#include "samaug/ensemble.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "samaug/error.hpp"

namespace samaug {

namespace {

void check_values(const std::vector<double>& v) {
  if (v.size() < 2) throw Error(ErrorKind::InvalidPrediction, "need at least 2 classes, got " + std::to_string(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k]) || v[k] < 0.0) {
      throw Error(ErrorKind::InvalidPrediction, "entry " + std::to_string(k) + " is negative or not finite");
    }
  }
}

void check_same_size(const PredictionVector& p1, const PredictionVector& p2) {
  if (p1.size() != p2.size()) {
    throw Error(ErrorKind::DimMismatch,
                "prediction sizes differ: " + std::to_string(p1.size()) + " vs " + std::to_string(p2.size()));
  }
}

double max_entry(const PredictionVector& p) { return p[argmax_label(p)]; }

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

PredictionVector PredictionVector::probabilities(std::vector<double> probs) {
  check_values(probs);
  double sum = 0.0;
  for (double p : probs) sum += p;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(ErrorKind::InvalidPrediction, "probabilities sum to " + shortest(sum));
  }
  return PredictionVector(std::move(probs), true);
}

PredictionVector PredictionVector::unnormalized(std::vector<double> values) {
  check_values(values);
  return PredictionVector(std::move(values), false);
}

PredictionVector PredictionVector::renormalized() const {
  double sum = 0.0;
  for (double p : probs_) sum += p;
  if (sum == 0.0) throw Error(ErrorKind::AllZero, "cannot renormalize an all-zero vector");
  std::vector<double> out(probs_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = probs_[k] / sum;
  return PredictionVector(std::move(out), true);
}

void EnsembleWeights::validate() const {
  if (!std::isfinite(w1) || !std::isfinite(w2) || w1 < 0.0 || w2 < 0.0 || std::abs(w1 + w2 - 1.0) > 1e-9) {
    throw Error(ErrorKind::BadWeights, "weights must be nonnegative and sum to 1, got " + shortest(w1) + "," +
                                           shortest(w2));
  }
}

EnsembleScheme parse_ensemble_scheme(std::string_view text) {
  if (text == "vote") return EnsembleScheme::Vote;
  if (text == "entropy") return EnsembleScheme::Entropy;
  if (text == "avg") return EnsembleScheme::Average;
  if (text == "wavg") return EnsembleScheme::WeightedAverage;
  throw Error(ErrorKind::BadConfig, "unknown ensemble scheme '" + std::string(text) + "'");
}

std::string_view to_string(EnsembleScheme scheme) noexcept {
  switch (scheme) {
    case EnsembleScheme::Vote: return "vote";
    case EnsembleScheme::Entropy: return "entropy";
    case EnsembleScheme::Average: return "avg";
    case EnsembleScheme::WeightedAverage: return "wavg";
  }
  return "wavg";
}

std::size_t argmax_label(const PredictionVector& p) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] > p[best]) best = k;
  }
  return best;
}

double entropy_bits(const PredictionVector& p) {
  double sum = 0.0;
  for (double v : p.values()) sum += v;
  if (sum == 0.0) throw Error(ErrorKind::AllZero, "entropy of an all-zero vector");
  double h = 0.0;
  for (double v : p.values()) {
    if (v == 0.0) continue;
    const double q = v / sum;
    h -= q * std::log2(q);
  }
  return h > 0.0 ? h : 0.0;
}

std::size_t ensemble_vote(const PredictionVector& p1, const PredictionVector& p2) {
  check_same_size(p1, p2);
  const std::size_t a = argmax_label(p1);
  const std::size_t b = argmax_label(p2);
  if (a == b) return a;
  return max_entry(p1) > max_entry(p2) ? a : b;
}

PredictionVector ensemble_entropy(const PredictionVector& p1, const PredictionVector& p2) {
  check_same_size(p1, p2);
  return entropy_bits(p1) < entropy_bits(p2) ? p1 : p2;
}

PredictionVector ensemble_direct_average(const PredictionVector& p1, const PredictionVector& p2) {
  check_same_size(p1, p2);
  std::vector<double> out(p1.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (p1[k] + p2[k]) / 2.0;
  return PredictionVector::unnormalized(std::move(out));
}

PredictionVector ensemble_weighted_average(const PredictionVector& p1, const PredictionVector& p2,
                                           const EnsembleWeights& w) {
  check_same_size(p1, p2);
  w.validate();
  std::vector<double> out(p1.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (w.w1 * p1[k] + w.w2 * p2[k]) / 2.0;
  return PredictionVector::unnormalized(std::move(out));
}

EnsembleSpec EnsembleSpec::parse(std::string_view text) {
  EnsembleSpec spec;
  const auto colon = text.find(':');
  spec.scheme = parse_ensemble_scheme(text.substr(0, colon));
  if (colon == std::string_view::npos) return spec;
  if (spec.scheme != EnsembleScheme::WeightedAverage) {
    throw Error(ErrorKind::BadConfig, "only wavg takes weights: '" + std::string(text) + "'");
  }
  const auto rest = text.substr(colon + 1);
  const auto comma = rest.find(',');
  if (comma == std::string_view::npos) throw Error(ErrorKind::BadWeights, "expected w1,w2 in '" + std::string(text) + "'");
  const auto parse_one = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw Error(ErrorKind::BadWeights, "cannot parse weight '" + std::string(s) + "'");
    }
    return v;
  };
  spec.weights = {parse_one(rest.substr(0, comma)), parse_one(rest.substr(comma + 1))};
  spec.weights.validate();
  return spec;
}

std::string EnsembleSpec::label() const {
  std::string out(to_string(scheme));
  if (scheme == EnsembleScheme::WeightedAverage) out += "[" + shortest(weights.w1) + "," + shortest(weights.w2) + "]";
  return out;
}

PredictionVector combine(const EnsembleSpec& spec, const PredictionVector& p1, const PredictionVector& p2) {
  switch (spec.scheme) {
    case EnsembleScheme::Vote: {
      check_same_size(p1, p2);
      const std::size_t a = argmax_label(p1);
      const std::size_t b = argmax_label(p2);
      if (a != b && max_entry(p1) > max_entry(p2)) return p1;
      return p2;
    }
    case EnsembleScheme::Entropy: return ensemble_entropy(p1, p2);
    case EnsembleScheme::Average: return ensemble_direct_average(p1, p2);
    case EnsembleScheme::WeightedAverage: return ensemble_weighted_average(p1, p2, spec.weights);
  }
  return p2;
}

}  // namespace samaug
