#include <algorithm>

#include "samaug/kernels.hpp"

namespace samaug::kernels::serial {

std::vector<float> accumulate_prior(const MaskSet& masks) {
  std::vector<float> acc(masks.height * masks.width, 0.0f);
  for (const auto& entry : masks.entries) {
    const auto bits = entry.mask.bits();
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (bits[i] != 0) acc[i] += 1.0f;
    }
  }
  return acc;
}

std::vector<float> binarize(std::span<const float> accumulated) {
  std::vector<float> out(accumulated.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = accumulated[i] != 0.0f ? 1.0f : 0.0f;
  return out;
}

void add_prior(const ImageTensor& in, std::span<const float> prior, std::span<const std::size_t> channels,
               ImageTensor& out) {
  for (std::size_t ch : channels) {
    const auto src = in.plane(ch);
    auto dst = out.plane(ch);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = prior[i] != 0.0f ? src[i] + prior[i] : src[i];
  }
}

std::vector<float> max_stability(const MaskSet& masks) {
  std::vector<float> out(masks.height * masks.width, 0.0f);
  for (const auto& entry : masks.entries) {
    const float score = static_cast<float>(entry.stability_score.value_or(1.0));
    const auto bits = entry.mask.bits();
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (bits[i] != 0) out[i] = std::max(out[i], score);
    }
  }
  return out;
}

std::vector<std::uint8_t> exterior_boundary(const BinaryMask& mask) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  std::vector<std::uint8_t> out(h * w, 0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!mask.at(r, c)) continue;
      const std::size_t r0 = r == 0 ? 0 : r - 1;
      const std::size_t c0 = c == 0 ? 0 : c - 1;
      for (std::size_t rr = r0; rr <= std::min(r + 1, h - 1); ++rr) {
        for (std::size_t cc = c0; cc <= std::min(c + 1, w - 1); ++cc) {
          if (!mask.at(rr, cc)) out[rr * w + cc] = 1;
        }
      }
    }
  }
  return out;
}

}  // namespace samaug::kernels::serial
