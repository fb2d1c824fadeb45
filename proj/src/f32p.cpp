#include "samaug/f32p.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>

#include "samaug/error.hpp"

namespace samaug {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | bytes[offset + static_cast<std::size_t>(k)];
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_f32p(const ImageTensor& image) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (image.height() > kMax || image.width() > kMax || image.channels() > kMax) {
    throw Error(ErrorKind::DimOverflow, "image dimension does not fit in u32");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kF32pHeaderSize + image.data().size() * 4);
  for (char ch : {'F', '3', '2', 'P'}) out.push_back(static_cast<std::uint8_t>(ch));
  put_u32(out, static_cast<std::uint32_t>(image.height()));
  put_u32(out, static_cast<std::uint32_t>(image.width()));
  put_u32(out, static_cast<std::uint32_t>(image.channels()));
  for (float v : image.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

ImageTensor decode_f32p(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorKind::TruncatedFile, "file shorter than the magic");
  if (bytes[0] != 'F' || bytes[1] != '3' || bytes[2] != '2' || bytes[3] != 'P') {
    throw Error(ErrorKind::BadMagic, "expected \"F32P\"");
  }
  if (bytes.size() < kF32pHeaderSize) throw Error(ErrorKind::TruncatedFile, "header truncated");

  const std::uint64_t h = get_u32(bytes, 4);
  const std::uint64_t w = get_u32(bytes, 8);
  const std::uint64_t c = get_u32(bytes, 12);
  if (h == 0 || w == 0 || c == 0) throw Error(ErrorKind::DimOverflow, "zero dimension in header");

  // h*w < 2^64 always; guard the remaining products against 64-bit overflow.
  const std::uint64_t plane = h * w;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (plane > kMax / c || plane * c > kMax / 4) throw Error(ErrorKind::DimOverflow, "value count overflows");
  const std::uint64_t count = plane * c;
  if (count > std::numeric_limits<std::size_t>::max() / 4) throw Error(ErrorKind::DimOverflow, "value count overflows");

  const std::uint64_t payload = bytes.size() - kF32pHeaderSize;
  if (payload != count * 4) {
    throw Error(ErrorKind::TruncatedFile, "payload is " + std::to_string(payload) + " bytes, header implies " +
                                              std::to_string(count * 4));
  }

  std::vector<float> data(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, kF32pHeaderSize + 4 * i));
  }
  return ImageTensor(static_cast<std::size_t>(h), static_cast<std::size_t>(w), static_cast<std::size_t>(c),
                     std::move(data));
}

void write_f32p(const ImageTensor& image, const std::filesystem::path& path) {
  const auto bytes = encode_f32p(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

ImageTensor read_f32p(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_f32p(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

}  // namespace samaug
