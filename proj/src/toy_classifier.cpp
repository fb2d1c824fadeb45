#include "samaug/toy_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>

#include "samaug/error.hpp"

namespace samaug {

Features extract_features(const ImageTensor& image) {
  if (image.channels() != 3) {
    throw Error(ErrorKind::DimMismatch, "features need 3 channels, got " + std::to_string(image.channels()));
  }
  Features f{};
  for (std::size_t c = 0; c < 3; ++c) {
    // Welford's running mean / sum of squared deviations.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (float v : image.plane(c)) {
      ++n;
      const double delta = v - mean;
      mean += delta / static_cast<double>(n);
      m2 += delta * (v - mean);
    }
    f[2 * c] = mean;
    f[2 * c + 1] = std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
  }
  return f;
}

ToyClassifierModel train_toy(std::span<const Features> samples, std::span<const std::size_t> labels,
                             std::size_t num_classes, double temperature) {
  if (samples.size() != labels.size()) throw Error(ErrorKind::DimMismatch, "samples and labels differ in length");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::BadConfig, "temperature must be positive");
  }
  ToyClassifierModel model;
  model.temperature = temperature;
  model.centroids.assign(num_classes, Features{});
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (labels[i] >= num_classes) throw Error(ErrorKind::DimMismatch, "label outside [0, num_classes)");
    auto& c = model.centroids[labels[i]];
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += samples[i][d];
    ++counts[labels[i]];
  }
  for (std::size_t k = 0; k < num_classes; ++k) {
    if (counts[k] == 0) throw Error(ErrorKind::MissingClass, "no training item for class " + std::to_string(k));
    for (auto& v : model.centroids[k]) v /= static_cast<double>(counts[k]);
  }
  return model;
}

std::vector<Features> dataset_features(const DatasetManifest& manifest, AugmentMode mode, int workers) {
  const auto n = static_cast<std::int64_t>(manifest.rows.size());
  std::vector<Features> features(manifest.rows.size());
  std::vector<std::optional<std::string>> errors(manifest.rows.size());

#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& row = manifest.rows[static_cast<std::size_t>(i)];
    try {
      ImageTensor image = load_image(row.image_path);
      if (mode != AugmentMode::None && row.mask_manifest_path) {
        image = augment_image(image, load_mask_manifest(*row.mask_manifest_path), mode);
      }
      features[static_cast<std::size_t>(i)] = extract_features(image);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) throw Error(ErrorKind::IoError, "row '" + manifest.rows[i].id + "': " + *errors[i]);
  }
  return features;
}

ToyClassifierModel train_toy(const DatasetManifest& manifest, AugmentMode mode, double temperature, int workers) {
  const auto features = dataset_features(manifest, mode, workers);
  std::vector<std::size_t> labels;
  labels.reserve(manifest.rows.size());
  for (const auto& row : manifest.rows) labels.push_back(row.label);
  return train_toy(features, labels, manifest.num_classes, temperature);
}

PredictionVector predict_toy(const ToyClassifierModel& model, const Features& features) {
  std::vector<double> logits(model.centroids.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    double d2 = 0.0;
    for (std::size_t d = 0; d < features.size(); ++d) {
      const double diff = features[d] - model.centroids[k][d];
      d2 += diff * diff;
    }
    logits[k] = -std::sqrt(d2) / model.temperature;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - top);
    sum += l;
  }
  for (auto& l : logits) l /= sum;
  return PredictionVector::probabilities(std::move(logits));
}

PredictionVector predict_toy(const ToyClassifierModel& model, const ImageTensor& image) {
  return predict_toy(model, extract_features(image));
}

}  // namespace samaug
