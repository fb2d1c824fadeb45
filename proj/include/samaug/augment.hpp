#pragma once

// SAMAug-C: add the binarized union of all masks to every channel of a
// unit-range float image. Also the SAMAug baseline (stability prior on the
// second channel, exterior-boundary prior on the third).

#include <cstddef>
#include <string_view>
#include <vector>

#include "samaug/image.hpp"
#include "samaug/maskio.hpp"

namespace samaug {

/// H x W map with values in {0, 1}.
struct SegPriorMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> values;
};

/// H x W map with values in [0, 1].
struct StabilityPriorMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> values;
};

enum class AugmentMode { SamAugC, SamAug, None };

AugmentMode parse_augment_mode(std::string_view text);  // "samaug-c" | "samaug" | "none"
std::string_view to_string(AugmentMode mode) noexcept;

/// Binarized union of the masks; all zeros for an empty set.
SegPriorMap build_seg_prior(const MaskSet& masks);

/// If the accumulated (pre-binarization) prior is constant over the image --
/// no masks, or every pixel covered equally often -- the input is returned
/// unchanged. Otherwise out[c] = in[c] + binarized prior for every channel.
ImageTensor samaug_c(const ImageTensor& image, const MaskSet& masks);

/// 3x3 (8-connected) dilation minus the mask itself.
BinaryMask extract_exterior_boundary(const BinaryMask& mask);

StabilityPriorMap build_stability_prior(const MaskSet& masks);

/// Channel 0 untouched, channel 1 += stability prior, channel 2 += union of the
/// masks' exterior boundaries. Requires exactly 3 channels.
ImageTensor samaug_baseline(const ImageTensor& image, const MaskSet& masks);

/// Dispatches on mode; None returns a copy of the input.
ImageTensor augment_image(const ImageTensor& image, const MaskSet& masks, AugmentMode mode);

}  // namespace samaug
