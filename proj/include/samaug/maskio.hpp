#pragma once

// Segmentation mask values and the interchange formats around them:
// uncompressed column-major RLE, PNG masks and per-image JSON mask manifests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace samaug {

/// Row-major boolean grid. Dimensions are always >= 1.
class BinaryMask {
 public:
  BinaryMask(std::size_t height, std::size_t width, bool fill = false);
  BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(std::size_t row, std::size_t col) const noexcept { return bits_[row * width_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool value) noexcept {
    bits_[row * width_ + col] = value ? 1 : 0;
  }

  /// One byte per pixel, 0 or 1.
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count() const noexcept;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> bits_;
};

struct MaskEntry {
  BinaryMask mask;
  std::optional<double> stability_score;
  std::string source;
};

struct MaskSet {
  std::string image_id;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<MaskEntry> entries;

  /// Throws DimMismatch if an entry disagrees with (height, width), SchemaError
  /// on an out-of-range stability score.
  void validate() const;
};

// RLE counts alternate zero-runs and one-runs, starting with a (possibly empty)
// zero-run, over the pixels in column-major order.
BinaryMask decode_rle(std::span<const std::uint64_t> counts, std::size_t height, std::size_t width);
std::vector<std::uint64_t> encode_rle(const BinaryMask& mask);

/// 8-bit gray or RGB(A) PNG; any nonzero colour channel marks the pixel.
BinaryMask load_png_mask(const std::filesystem::path& path, std::size_t expected_height,
                         std::size_t expected_width);
void save_png_mask(const std::filesystem::path& path, const BinaryMask& mask);

MaskSet load_mask_manifest(const std::filesystem::path& path);

/// Writes every entry as an RLE record. Output is deterministic for equal inputs.
void write_mask_manifest(const std::filesystem::path& path, const MaskSet& masks);

}  // namespace samaug
