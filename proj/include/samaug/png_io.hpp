#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace samaug {

/// 8-bit interleaved pixels as they come out of (or go into) a PNG file.
struct Image8 {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> data;

  std::uint8_t at(std::size_t row, std::size_t col, std::size_t ch) const noexcept {
    return data[(row * width + col) * channels + ch];
  }
};

/// Reads an 8-bit PNG. Palette images are expanded, alpha is dropped; the
/// result has 1 channel for gray sources and 3 otherwise.
/// Throws Error(UnreadableFile).
Image8 read_png8(const std::filesystem::path& path);

/// Throws Error(IoError).
void write_png8(const std::filesystem::path& path, const Image8& image);

}  // namespace samaug
