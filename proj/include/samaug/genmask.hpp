#pragma once

// Built-in mask generator: Otsu threshold on luminance, then connected
// components. Stands in for SAM's automatic mask generator.

#include <cstddef>
#include <span>
#include <vector>

#include "samaug/image.hpp"
#include "samaug/maskio.hpp"

namespace samaug {

struct GenMaskConfig {
  std::size_t min_area = 64;
  bool invert = false;  // keep the darker side instead of the brighter one
  int connectivity = 8;

  void validate() const;  // throws BadConfig
};

inline constexpr int kOtsuBins = 256;

/// Bin index used by the Otsu histogram: floor(v * 256) clamped to [0, 255].
int otsu_bin(float value) noexcept;

/// Returns t/256 for the split t in [1, 255] maximizing between-class variance
/// (bins < t vs bins >= t), ties toward the lower t. A constant image returns
/// its value. Pixels >= the threshold form the bright class.
float otsu_threshold(std::span<const float> gray);

/// Maximal connected regions, ordered by their first pixel in raster order.
std::vector<BinaryMask> connected_components(const BinaryMask& binary, int connectivity);

/// Unweighted channel mean.
std::vector<float> luminance(const ImageTensor& image);

/// Emits no masks when the threshold leaves either side empty.
MaskSet generate_masks(const ImageTensor& image, const GenMaskConfig& config);

}  // namespace samaug
