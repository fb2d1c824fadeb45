#pragma once

// Nearest-centroid classifier over per-channel (mean, std) features. A
// deterministic, desk-scale stand-in for the deep networks of each branch.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "samaug/augment.hpp"
#include "samaug/dataset.hpp"
#include "samaug/ensemble.hpp"
#include "samaug/image.hpp"

namespace samaug {

using Features = std::array<double, 6>;

/// (mean, population std) of channels 0, 1, 2. Requires 3 channels.
Features extract_features(const ImageTensor& image);

struct ToyClassifierModel {
  std::vector<Features> centroids;  // one per class
  double temperature = 0.1;
};

/// Class centroids are per-class means of the samples. Throws MissingClass.
ToyClassifierModel train_toy(std::span<const Features> samples, std::span<const std::size_t> labels,
                             std::size_t num_classes, double temperature = 0.1);

/// Loads every row's image, applies `mode` with the row's masks (rows without
/// masks pass through) and trains on the resulting features.
ToyClassifierModel train_toy(const DatasetManifest& manifest, AugmentMode mode, double temperature = 0.1,
                             int workers = 1);

/// softmax(-||f - c_k|| / temperature).
PredictionVector predict_toy(const ToyClassifierModel& model, const Features& features);
PredictionVector predict_toy(const ToyClassifierModel& model, const ImageTensor& image);

/// Features of each row after applying `mode`, computed in parallel; the
/// result is independent of `workers`.
std::vector<Features> dataset_features(const DatasetManifest& manifest, AugmentMode mode, int workers = 1);

}  // namespace samaug
