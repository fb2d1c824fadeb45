#include "samaug/image.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "samaug/error.hpp"
#include "samaug/f32p.hpp"

namespace samaug {

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height == 0 || width == 0 || channels == 0) throw Error(ErrorKind::EmptyDims, "image dimensions must be >= 1");
  data_.assign(height * width * channels, fill);
}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t channels, std::vector<float> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (height == 0 || width == 0 || channels == 0) throw Error(ErrorKind::EmptyDims, "image dimensions must be >= 1");
  if (data_.size() != height * width * channels) {
    throw Error(ErrorKind::DimMismatch, "image buffer holds " + std::to_string(data_.size()) + " values, expected " +
                                            std::to_string(height * width * channels));
  }
}

bool ImageTensor::bit_equal(const ImageTensor& other) const noexcept {
  return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_ &&
         (data_.empty() || std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0);
}

ImageTensor to_unit_float(const Image8& image) {
  const std::size_t out_channels = image.channels == 1 ? 3 : image.channels;
  ImageTensor out(image.height, image.width, out_channels);
  for (std::size_t c = 0; c < out_channels; ++c) {
    const std::size_t src_c = image.channels == 1 ? 0 : c;
    auto plane = out.plane(c);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      plane[i] = static_cast<float>(image.data[i * image.channels + src_c]) / 255.0f;
    }
  }
  return out;
}

ImageTensor load_image(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".f32p") return read_f32p(path);
  return to_unit_float(read_png8(path));
}

}  // namespace samaug
