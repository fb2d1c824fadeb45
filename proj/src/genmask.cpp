#include "samaug/genmask.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "samaug/error.hpp"

namespace samaug {

void GenMaskConfig::validate() const {
  if (min_area < 1) throw Error(ErrorKind::BadConfig, "min_area must be >= 1");
  if (connectivity != 4 && connectivity != 8) {
    throw Error(ErrorKind::BadConfig, "connectivity must be 4 or 8, got " + std::to_string(connectivity));
  }
}

int otsu_bin(float value) noexcept {
  const float scaled = std::floor(value * static_cast<float>(kOtsuBins));
  if (!(scaled >= 0.0f)) return 0;
  return std::min(static_cast<int>(scaled), kOtsuBins - 1);
}

float otsu_threshold(std::span<const float> gray) {
  if (gray.empty()) throw Error(ErrorKind::EmptyInput, "otsu_threshold on an empty image");
  const auto [lo, hi] = std::minmax_element(gray.begin(), gray.end());
  if (*lo == *hi) return *lo;

  std::array<std::uint64_t, kOtsuBins> hist{};
  for (float v : gray) ++hist[static_cast<std::size_t>(otsu_bin(v))];

  const double total = static_cast<double>(gray.size());
  double total_moment = 0.0;
  for (int k = 0; k < kOtsuBins; ++k) total_moment += k * static_cast<double>(hist[static_cast<std::size_t>(k)]);

  int best_t = 1;
  double best_var = -1.0;
  double w0 = 0.0;
  double m0 = 0.0;
  for (int t = 1; t < kOtsuBins; ++t) {
    const double count = static_cast<double>(hist[static_cast<std::size_t>(t - 1)]);
    w0 += count;
    m0 += (t - 1) * count;
    const double w1 = total - w0;
    double var = 0.0;
    if (w0 > 0.0 && w1 > 0.0) {
      const double diff = m0 / w0 - (total_moment - m0) / w1;
      var = w0 * w1 * diff * diff;
    }
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return static_cast<float>(best_t) / static_cast<float>(kOtsuBins);
}

std::vector<BinaryMask> connected_components(const BinaryMask& binary, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw Error(ErrorKind::BadConfig, "connectivity must be 4 or 8");
  }
  const auto h = static_cast<std::int64_t>(binary.height());
  const auto w = static_cast<std::int64_t>(binary.width());
  const auto bits = binary.bits();

  static constexpr std::array<std::array<int, 2>, 8> kOffsets{
      {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
  const int n_offsets = connectivity == 4 ? 4 : 8;

  std::vector<std::uint8_t> visited(bits.size(), 0);
  std::vector<std::int64_t> stack;
  std::vector<BinaryMask> components;

  for (std::int64_t start = 0; start < h * w; ++start) {
    if (bits[static_cast<std::size_t>(start)] == 0 || visited[static_cast<std::size_t>(start)] != 0) continue;

    std::vector<std::uint8_t> comp(bits.size(), 0);
    visited[static_cast<std::size_t>(start)] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::int64_t p = stack.back();
      stack.pop_back();
      comp[static_cast<std::size_t>(p)] = 1;
      const std::int64_t r = p / w;
      const std::int64_t c = p % w;
      for (int k = 0; k < n_offsets; ++k) {
        const std::int64_t rr = r + kOffsets[static_cast<std::size_t>(k)][0];
        const std::int64_t cc = c + kOffsets[static_cast<std::size_t>(k)][1];
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        const auto q = static_cast<std::size_t>(rr * w + cc);
        if (bits[q] != 0 && visited[q] == 0) {
          visited[q] = 1;
          stack.push_back(rr * w + cc);
        }
      }
    }
    components.emplace_back(binary.height(), binary.width(), std::move(comp));
  }
  return components;
}

std::vector<float> luminance(const ImageTensor& image) {
  std::vector<float> gray(image.plane_size(), 0.0f);
  for (std::size_t c = 0; c < image.channels(); ++c) {
    const auto plane = image.plane(c);
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] += plane[i];
  }
  const float n = static_cast<float>(image.channels());
  for (auto& g : gray) g /= n;
  return gray;
}

MaskSet generate_masks(const ImageTensor& image, const GenMaskConfig& config) {
  config.validate();
  MaskSet set{"", image.height(), image.width(), {}};

  const auto gray = luminance(image);
  const float threshold = otsu_threshold(gray);

  std::vector<std::uint8_t> fg(gray.size(), 0);
  std::size_t n_fg = 0;
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const bool bright = gray[i] >= threshold;
    fg[i] = (bright != config.invert) ? 1 : 0;
    n_fg += fg[i];
  }
  if (n_fg == 0 || n_fg == gray.size()) return set;

  for (auto& comp : connected_components(BinaryMask(image.height(), image.width(), std::move(fg)), config.connectivity)) {
    if (comp.count() >= config.min_area) set.entries.push_back(MaskEntry{std::move(comp), std::nullopt, "genmask"});
  }
  return set;
}

}  // namespace samaug
