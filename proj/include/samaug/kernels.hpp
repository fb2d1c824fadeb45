#pragma once

// Per-pixel kernels behind the augmentation operations. Each kernel has a
// plain serial reference and an OpenMP version; neither reduces across pixels,
// so both produce bit-identical output for any thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "samaug/image.hpp"
#include "samaug/maskio.hpp"

namespace samaug::kernels {

namespace serial {

/// Per-pixel count of covering masks, accumulated as +1.0f per mask.
std::vector<float> accumulate_prior(const MaskSet& masks);

/// Binarize: nonzero -> 1.0f, zero -> 0.0f.
std::vector<float> binarize(std::span<const float> accumulated);

/// out[ch] = in[ch] + prior where prior != 0; other pixels are copied.
void add_prior(const ImageTensor& in, std::span<const float> prior, std::span<const std::size_t> channels,
               ImageTensor& out);

/// Per-pixel max stability score over covering masks (absent score -> 1.0).
std::vector<float> max_stability(const MaskSet& masks);

/// dilate(mask, 3x3) AND NOT mask, clipped at the borders.
std::vector<std::uint8_t> exterior_boundary(const BinaryMask& mask);

}  // namespace serial

namespace parallel {

std::vector<float> accumulate_prior(const MaskSet& masks);
std::vector<float> binarize(std::span<const float> accumulated);
void add_prior(const ImageTensor& in, std::span<const float> prior, std::span<const std::size_t> channels,
               ImageTensor& out);
std::vector<float> max_stability(const MaskSet& masks);
std::vector<std::uint8_t> exterior_boundary(const BinaryMask& mask);

}  // namespace parallel

}  // namespace samaug::kernels
