#include "samaug/augment.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "samaug/error.hpp"
#include "samaug/kernels.hpp"

namespace samaug {

namespace {

void check_against_image(const ImageTensor& image, const MaskSet& masks) {
  if (masks.height != image.height() || masks.width != image.width()) {
    throw Error(ErrorKind::DimMismatch, "mask set is " + std::to_string(masks.height) + "x" +
                                            std::to_string(masks.width) + ", image is " +
                                            std::to_string(image.height()) + "x" + std::to_string(image.width()));
  }
  masks.validate();
}

std::vector<std::size_t> all_channels(const ImageTensor& image) {
  std::vector<std::size_t> ch(image.channels());
  for (std::size_t c = 0; c < ch.size(); ++c) ch[c] = c;
  return ch;
}

}  // namespace

AugmentMode parse_augment_mode(std::string_view text) {
  if (text == "samaug-c") return AugmentMode::SamAugC;
  if (text == "samaug") return AugmentMode::SamAug;
  if (text == "none") return AugmentMode::None;
  throw Error(ErrorKind::BadConfig, "unknown augmentation mode '" + std::string(text) + "'");
}

std::string_view to_string(AugmentMode mode) noexcept {
  switch (mode) {
    case AugmentMode::SamAugC: return "samaug-c";
    case AugmentMode::SamAug: return "samaug";
    case AugmentMode::None: return "none";
  }
  return "none";
}

SegPriorMap build_seg_prior(const MaskSet& masks) {
  masks.validate();
  const auto acc = kernels::parallel::accumulate_prior(masks);
  return {masks.height, masks.width, kernels::parallel::binarize(acc)};
}

ImageTensor samaug_c(const ImageTensor& image, const MaskSet& masks) {
  check_against_image(image, masks);
  const auto acc = kernels::parallel::accumulate_prior(masks);
  const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
  if (*lo == *hi) return image;

  const auto prior = kernels::parallel::binarize(acc);
  ImageTensor out = image;
  const auto channels = all_channels(image);
  kernels::parallel::add_prior(image, prior, channels, out);
  return out;
}

BinaryMask extract_exterior_boundary(const BinaryMask& mask) {
  return BinaryMask(mask.height(), mask.width(), kernels::parallel::exterior_boundary(mask));
}

StabilityPriorMap build_stability_prior(const MaskSet& masks) {
  masks.validate();
  return {masks.height, masks.width, kernels::parallel::max_stability(masks)};
}

ImageTensor samaug_baseline(const ImageTensor& image, const MaskSet& masks) {
  if (image.channels() != 3) {
    throw Error(ErrorKind::DimMismatch, "SAMAug baseline needs 3 channels, got " + std::to_string(image.channels()));
  }
  check_against_image(image, masks);
  if (masks.entries.empty()) return image;

  ImageTensor out = image;
  const auto stability = kernels::parallel::max_stability(masks);
  constexpr std::array<std::size_t, 1> kSecond{1};
  kernels::parallel::add_prior(image, stability, kSecond, out);

  std::vector<float> boundary(image.plane_size(), 0.0f);
  for (const auto& entry : masks.entries) {
    const auto ring = kernels::parallel::exterior_boundary(entry.mask);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (ring[i] != 0) boundary[i] = 1.0f;
    }
  }
  constexpr std::array<std::size_t, 1> kThird{2};
  kernels::parallel::add_prior(image, boundary, kThird, out);
  return out;
}

ImageTensor augment_image(const ImageTensor& image, const MaskSet& masks, AugmentMode mode) {
  switch (mode) {
    case AugmentMode::SamAugC: return samaug_c(image, masks);
    case AugmentMode::SamAug: return samaug_baseline(image, masks);
    case AugmentMode::None: return image;
  }
  return image;
}

}  // namespace samaug
