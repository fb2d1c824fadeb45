#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "samaug/png_io.hpp"

namespace samaug {

/// H x W x C float image, planar (channel-major): all of channel 0, then
/// channel 1, ... Raw images live in [0,1], SAMAug-C outputs in [0,2].
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(std::size_t height, std::size_t width, std::size_t channels, float fill = 0.0f);
  ImageTensor(std::size_t height, std::size_t width, std::size_t channels, std::vector<float> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  bool empty() const noexcept { return data_.empty(); }

  float& at(std::size_t ch, std::size_t row, std::size_t col) noexcept {
    return data_[ch * plane_size() + row * width_ + col];
  }
  float at(std::size_t ch, std::size_t row, std::size_t col) const noexcept {
    return data_[ch * plane_size() + row * width_ + col];
  }

  std::span<float> plane(std::size_t ch) noexcept { return {data_.data() + ch * plane_size(), plane_size()}; }
  std::span<const float> plane(std::size_t ch) const noexcept {
    return {data_.data() + ch * plane_size(), plane_size()};
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  /// Byte-level equality (distinguishes -0.0 from 0.0, and compares NaN payloads).
  bool bit_equal(const ImageTensor& other) const noexcept;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<float> data_;
};

/// value / 255 in single precision. Gray sources are replicated to 3 channels.
ImageTensor to_unit_float(const Image8& image);

/// Loads a PNG (via to_unit_float) or an f32p container, chosen by extension.
ImageTensor load_image(const std::filesystem::path& path);

}  // namespace samaug
