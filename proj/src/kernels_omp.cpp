#include <algorithm>
#include <cstdint>

#include "samaug/kernels.hpp"

namespace samaug::kernels::parallel {

namespace {
// Below this many pixels the fork/join overhead dominates.
constexpr std::int64_t kMinParallelPixels = 1 << 14;
}  // namespace

std::vector<float> accumulate_prior(const MaskSet& masks) {
  const auto n = static_cast<std::int64_t>(masks.height * masks.width);
  std::vector<float> acc(static_cast<std::size_t>(n), 0.0f);
  std::vector<const std::uint8_t*> bits;
  bits.reserve(masks.entries.size());
  for (const auto& e : masks.entries) bits.push_back(e.mask.bits().data());

#pragma omp parallel for schedule(static) if (n >= kMinParallelPixels)
  for (std::int64_t i = 0; i < n; ++i) {
    float sum = 0.0f;
    for (const auto* b : bits) {
      if (b[i] != 0) sum += 1.0f;
    }
    acc[static_cast<std::size_t>(i)] = sum;
  }
  return acc;
}

std::vector<float> binarize(std::span<const float> accumulated) {
  const auto n = static_cast<std::int64_t>(accumulated.size());
  std::vector<float> out(accumulated.size());
#pragma omp parallel for simd schedule(static) if (n >= kMinParallelPixels)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = accumulated[static_cast<std::size_t>(i)] != 0.0f ? 1.0f : 0.0f;
  return out;
}

void add_prior(const ImageTensor& in, std::span<const float> prior, std::span<const std::size_t> channels,
               ImageTensor& out) {
  const auto n = static_cast<std::int64_t>(in.plane_size());
  for (std::size_t ch : channels) {
    const float* src = in.plane(ch).data();
    float* dst = out.plane(ch).data();
    const float* p = prior.data();
#pragma omp parallel for simd schedule(static) if (n >= kMinParallelPixels)
    for (std::int64_t i = 0; i < n; ++i) dst[i] = p[i] != 0.0f ? src[i] + p[i] : src[i];
  }
}

std::vector<float> max_stability(const MaskSet& masks) {
  const auto n = static_cast<std::int64_t>(masks.height * masks.width);
  std::vector<float> out(static_cast<std::size_t>(n), 0.0f);
  std::vector<const std::uint8_t*> bits;
  std::vector<float> scores;
  for (const auto& e : masks.entries) {
    bits.push_back(e.mask.bits().data());
    scores.push_back(static_cast<float>(e.stability_score.value_or(1.0)));
  }

#pragma omp parallel for schedule(static) if (n >= kMinParallelPixels)
  for (std::int64_t i = 0; i < n; ++i) {
    float best = 0.0f;
    for (std::size_t k = 0; k < bits.size(); ++k) {
      if (bits[k][i] != 0) best = std::max(best, scores[k]);
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

std::vector<std::uint8_t> exterior_boundary(const BinaryMask& mask) {
  const auto h = static_cast<std::int64_t>(mask.height());
  const auto w = static_cast<std::int64_t>(mask.width());
  const auto* bits = mask.bits().data();
  std::vector<std::uint8_t> out(mask.size(), 0);

#pragma omp parallel for schedule(static) if (h * w >= kMinParallelPixels)
  for (std::int64_t r = 0; r < h; ++r) {
    for (std::int64_t c = 0; c < w; ++c) {
      if (bits[r * w + c] != 0) continue;
      bool touched = false;
      for (std::int64_t rr = std::max<std::int64_t>(r - 1, 0); rr <= std::min(r + 1, h - 1) && !touched; ++rr) {
        for (std::int64_t cc = std::max<std::int64_t>(c - 1, 0); cc <= std::min(c + 1, w - 1); ++cc) {
          if (bits[rr * w + cc] != 0) {
            touched = true;
            break;
          }
        }
      }
      out[static_cast<std::size_t>(r * w + c)] = touched ? 1 : 0;
    }
  }
  return out;
}

}  // namespace samaug::kernels::parallel
