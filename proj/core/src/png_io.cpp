#include "unshade/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "unshade/errors.hpp"

namespace unshade {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  (void)png;
  throw Error(std::string("png: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

}  // namespace

RawImage read_png_rgb8(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  check(file != nullptr, "png: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warn_fn);
  check(png != nullptr, "png: read struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("png: info struct allocation failed");
  }

  try {
    png_init_io(png, file.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if ((color & PNG_COLOR_MASK_ALPHA) != 0 ||
        png_get_valid(png, info, PNG_INFO_tRNS)) {
      throw Error("png: alpha channel not supported: " + path);
    }
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY) png_set_gray_to_rgb(png);
    if (depth == 16) png_set_strip_16(png);
    (void)png_set_interlace_handling(png);
    png_read_update_info(png, info);

    check(png_get_channels(png, info) == 3,
          "png: expected 3 channels after expansion: " + path);

    RawImage img(static_cast<int>(h), static_cast<int>(w));
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
      rows[y] = img.rgb.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
}

void write_png_rgb8(const std::string& path, const RawImage& img) {
  check(img.height > 0 && img.width > 0, "png: empty image: " + path);
  check(img.rgb.size() == static_cast<std::size_t>(3) *
                              static_cast<std::size_t>(img.height) *
                              static_cast<std::size_t>(img.width),
        "png: buffer size mismatch: " + path);

  FilePtr file(std::fopen(path.c_str(), "wb"));
  check(file != nullptr, "png: cannot open for writing " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warn_fn);
  check(png != nullptr, "png: write struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png: info struct allocation failed");
  }

  try {
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
      png_write_row(png, const_cast<png_bytep>(
                             img.rgb.data() +
                             static_cast<std::size_t>(y) * img.width * 3));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
}

void write_png_gray8(const std::string& path, int height, int width,
                     const std::vector<std::uint8_t>& gray) {
  check(height > 0 && width > 0, "png: empty image: " + path);
  check(gray.size() == static_cast<std::size_t>(height) *
                           static_cast<std::size_t>(width),
        "png: buffer size mismatch: " + path);

  FilePtr file(std::fopen(path.c_str(), "wb"));
  check(file != nullptr, "png: cannot open for writing " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warn_fn);
  check(png != nullptr, "png: write struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png: info struct allocation failed");
  }

  try {
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
      png_write_row(png, const_cast<png_bytep>(
                             gray.data() + static_cast<std::size_t>(y) * width));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
}

}  // namespace unshade
