#pragma once

// Seeded synthetic two-class lesion dataset.
//
// Every image is a flat gray background whose level is drawn per image as
// (1 - delta)/2 + noise_sigma * z, z ~ N(0,1), clamped to [0, 1 - delta].
// Class 1 additionally carries a disk of `disk_radius` at a random position,
// raised by `intensity_delta`. Each item draws from its own stream derived from
// (seed, item index), so the output does not depend on generation order.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "samaug/dataset.hpp"
#include "samaug/png_io.hpp"

namespace samaug {

struct SyntheticParams {
  std::size_t n_per_class = 200;
  std::size_t image_size = 64;
  double disk_radius = 8.0;
  double intensity_delta = 0.12;
  double noise_sigma = 0.10;
  std::uint64_t seed = 42;

  void validate() const;  // throws BadGeometry
};

struct Disk {
  double cx = 0.0;  // column, in pixel units; pixel (r, c) has centre (c + 0.5, r + 0.5)
  double cy = 0.0;
  double radius = 0.0;

  bool covers(std::size_t row, std::size_t col) const noexcept;
};

struct SyntheticItem {
  Image8 image;  // 3 identical channels
  std::size_t label = 0;
  std::optional<Disk> disk;  // class 1 only
  double background = 0.0;
};

/// Item `index` of the dataset; items [0, n) are class 0, [n, 2n) class 1.
SyntheticItem synthesize_item(const SyntheticParams& params, std::size_t index);

/// Writes out_dir/images/<id>.png and out_dir/manifest.csv (no mask column
/// values). Byte-identical for equal params regardless of `workers`.
DatasetManifest generate_synthetic_dataset(const SyntheticParams& params, const std::filesystem::path& out_dir,
                                           int workers = 1);

}  // namespace samaug
