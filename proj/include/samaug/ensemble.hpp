#pragma once

// Combining the raw-branch (p1) and augmented-branch (p2) predictions.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace samaug {

/// Nonnegative finite class scores, N >= 2. Model outputs are checked to sum
/// to 1 within 1e-4; ensemble outputs (which may sum to 0.5) are tagged
/// unnormalized instead.
class PredictionVector {
 public:
  static constexpr double kSumTolerance = 1e-4;

  /// Throws InvalidPrediction.
  static PredictionVector probabilities(std::vector<double> probs);
  static PredictionVector unnormalized(std::vector<double> values);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const noexcept { return probs_[k]; }
  const std::vector<double>& values() const noexcept { return probs_; }
  bool normalized() const noexcept { return normalized_; }

  /// Copy scaled to sum 1 (display only; argmax is unchanged).
  PredictionVector renormalized() const;

  friend bool operator==(const PredictionVector&, const PredictionVector&) = default;

 private:
  PredictionVector(std::vector<double> probs, bool normalized) : probs_(std::move(probs)), normalized_(normalized) {}

  std::vector<double> probs_;
  bool normalized_ = true;
};

/// w1 weighs the raw-image branch, w2 the augmented branch.
struct EnsembleWeights {
  double w1 = 0.3;
  double w2 = 0.7;

  void validate() const;  // throws BadWeights
};

enum class EnsembleScheme { Vote, Entropy, Average, WeightedAverage };

EnsembleScheme parse_ensemble_scheme(std::string_view text);  // vote|entropy|avg|wavg
std::string_view to_string(EnsembleScheme scheme) noexcept;

/// Lowest index among the maxima.
std::size_t argmax_label(const PredictionVector& p);

/// Shannon entropy in bits of p / sum(p), with 0 log 0 = 0. Throws AllZero.
double entropy_bits(const PredictionVector& p);

/// Agreeing argmaxes win outright. On disagreement the branch with the larger
/// maximum wins; equal maxima go to the augmented branch (p2).
std::size_t ensemble_vote(const PredictionVector& p1, const PredictionVector& p2);

/// Strictly lower entropy wins; ties go to p2.
PredictionVector ensemble_entropy(const PredictionVector& p1, const PredictionVector& p2);

/// (p1 + p2) / 2.
PredictionVector ensemble_direct_average(const PredictionVector& p1, const PredictionVector& p2);

/// (w1 p1 + w2 p2) / 2. The halving is kept, so outputs sum to ~0.5.
PredictionVector ensemble_weighted_average(const PredictionVector& p1, const PredictionVector& p2,
                                           const EnsembleWeights& w);

struct EnsembleSpec {
  EnsembleScheme scheme = EnsembleScheme::WeightedAverage;
  EnsembleWeights weights{};

  /// "vote", "entropy", "avg", "wavg" (default weights) or "wavg:0.3,0.7".
  static EnsembleSpec parse(std::string_view text);
  /// Stable row label, e.g. "wavg[0.3,0.7]".
  std::string label() const;
};

/// The vector stored for a combined prediction. For vote this is the vector of
/// the branch whose label won (p2 when the branches agree), so its argmax is
/// the voted class.
PredictionVector combine(const EnsembleSpec& spec, const PredictionVector& p1, const PredictionVector& p2);

}  // namespace samaug
