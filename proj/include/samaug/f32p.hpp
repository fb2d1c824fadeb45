#pragma once

// F32P: lossless float image container.
//
//   offset 0   "F32P"
//   offset 4   u32 height   (little-endian)
//   offset 8   u32 width
//   offset 12  u32 channels
//   offset 16  height*width*channels IEEE-754 binary32 values, little-endian,
//              planar channel-major order
//
// The file length must match the header exactly.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "samaug/image.hpp"

namespace samaug {

inline constexpr std::size_t kF32pHeaderSize = 16;

std::vector<std::uint8_t> encode_f32p(const ImageTensor& image);
/// Throws BadMagic, TruncatedFile (short or overlong payload) or DimOverflow.
ImageTensor decode_f32p(std::span<const std::uint8_t> bytes);

void write_f32p(const ImageTensor& image, const std::filesystem::path& path);
ImageTensor read_f32p(const std::filesystem::path& path);

}  // namespace samaug
