#include "samaug/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>

#include "samaug/error.hpp"

namespace samaug {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

// libpng reports errors with longjmp; nothing with a destructor is created
// between setjmp and the last libpng call except containers sized beforehand.
Image8 read_png8(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorKind::UnreadableFile, "cannot open " + path.string());

  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorKind::UnreadableFile, "not a PNG file: " + path.string());
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error(ErrorKind::UnreadableFile, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorKind::UnreadableFile, "png_create_info_struct failed");
  }

  Image8 image;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::UnreadableFile, "corrupt PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int out_channels = png_get_channels(png, info);
  if (out_channels != 1 && out_channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::UnreadableFile, "unsupported PNG channel layout: " + path.string());
  }

  image.height = height;
  image.width = width;
  image.channels = static_cast<std::size_t>(out_channels);
  image.data.resize(image.height * image.width * image.channels);
  rows.resize(height);
  for (std::size_t r = 0; r < height; ++r) rows[r] = image.data.data() + r * image.width * image.channels;

  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

void write_png8(const std::filesystem::path& path, const Image8& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorKind::IoError, "write_png8 supports 1 or 3 channels");
  }
  if (image.data.size() != image.height * image.width * image.channels) {
    throw Error(ErrorKind::IoError, "write_png8: pixel buffer size does not match dimensions");
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorKind::IoError, "cannot create " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error(ErrorKind::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorKind::IoError, "png_create_info_struct failed");
  }

  std::vector<png_bytep> rows(image.height);
  for (std::size_t r = 0; r < image.height; ++r) {
    rows[r] = const_cast<png_bytep>(image.data.data() + r * image.width * image.channels);
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::IoError, "failed writing " + path.string());
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  if (std::fflush(file.get()) != 0) throw Error(ErrorKind::IoError, "failed flushing " + path.string());
}

}  // namespace samaug
