#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace unshade {

// 8-bit RGB image, interleaved HWC storage (the wire format for PNG IO).
struct RawImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> rgb;  // size 3*height*width

  RawImage() = default;
  RawImage(int h, int w)
      : height(h), width(w),
        rgb(static_cast<std::size_t>(3) * static_cast<std::size_t>(h) *
            static_cast<std::size_t>(w)) {}

  std::uint8_t& at(int y, int x, int c) {
    return rgb[static_cast<std::size_t>((y * width + x) * 3 + c)];
  }
  std::uint8_t at(int y, int x, int c) const {
    return rgb[static_cast<std::size_t>((y * width + x) * 3 + c)];
  }
};

// Reads an 8-bit PNG as RGB. Grayscale and palette images are expanded to
// RGB; 16-bit channels are narrowed to 8. Images with an alpha channel (or a
// transparency chunk) are rejected: compositing policy is out of scope here.
RawImage read_png_rgb8(const std::string& path);

void write_png_rgb8(const std::string& path, const RawImage& img);

// 8-bit grayscale PNG, one byte per pixel.
void write_png_gray8(const std::string& path, int height, int width,
                     const std::vector<std::uint8_t>& gray);

}  // namespace unshade
