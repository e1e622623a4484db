#pragma once

#include <cstdint>
#include <vector>

#include "unshade/errors.hpp"
#include "unshade/png_io.hpp"
#include "unshade/tensor.hpp"

namespace unshade {

// Normalized image: 3 channel planes (CHW), values in [-1, 1]. The byte
// value b maps to b/127.5 - 1, so 0 -> -1 and 255 -> +1.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // 3 * height * width, plane order R, G, B

  Image() = default;
  Image(int h, int w)
      : height(h), width(w),
        data(static_cast<std::size_t>(3) * static_cast<std::size_t>(h) *
             static_cast<std::size_t>(w)) {}

  double& at(int c, int y, int x) {
    return data[static_cast<std::size_t>((c * height + y) * width + x)];
  }
  double at(int c, int y, int x) const {
    return data[static_cast<std::size_t>((c * height + y) * width + x)];
  }
};

// 8-bit single-channel grid (e.g. the difference image fed to thresholding).
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int h, int w)
      : height(h), width(w),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w)) {}

  std::uint8_t& at(int y, int x) {
    return data[static_cast<std::size_t>(y * width + x)];
  }
  std::uint8_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y * width + x)];
  }
};

// Binary shadow mask; values are exactly 0 or 1.
struct ShadowMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  ShadowMask() = default;
  ShadowMask(int h, int w)
      : height(h), width(w),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w)) {}

  std::uint8_t& at(int y, int x) {
    return data[static_cast<std::size_t>(y * width + x)];
  }
  std::uint8_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y * width + x)];
  }
  std::int64_t count_ones() const {
    std::int64_t n = 0;
    for (auto v : data) n += v;
    return n;
  }
  bool operator==(const ShadowMask& o) const {
    return height == o.height && width == o.width && data == o.data;
  }
};

inline double encode_value(std::uint8_t b) {
  return static_cast<double>(b) / 127.5 - 1.0;
}

// Inverse of encode_value up to quantization: round half up, clamp to [0,255].
std::uint8_t decode_value(double v);

Image encode_image(const RawImage& raw);
RawImage decode_image(const Image& img);

Image crop(const Image& img, int y0, int x0, int h, int w);
Image hflip(const Image& img);

// Center crop so both dimensions become multiples of `m` (floor semantics;
// the extra rows/cols are split evenly with the top/left getting the smaller
// half). Errors if the image is smaller than m in either dimension.
Image center_crop_multiple(const Image& img, int m);

// Reads a PNG and normalizes; dims are forced to multiples of 4 via center
// crop, which is the precondition for the translation networks.
Image load_image_div4(const std::string& path);

// Horizontal strip of images separated by a 2-pixel white gutter; all images
// must share the same height.
RawImage hstack(const std::vector<RawImage>& imgs);

// Mask renderings: {0,1} -> {0,255}.
GrayImage mask_to_gray(const ShadowMask& mask);
RawImage mask_to_raw(const ShadowMask& mask);
// {0,255} (or anything >127) grayscale back to {0,1}.
ShadowMask mask_from_raw(const RawImage& raw);

template <typename T>
Tensor<T> image_to_tensor(const Image& img) {
  Tensor<T> t({3, img.height, img.width});
  for (std::int64_t i = 0; i < t.size(); ++i)
    t[i] = static_cast<T>(img.data[static_cast<std::size_t>(i)]);
  return t;
}

template <typename T>
Image tensor_to_image(const Tensor<T>& t) {
  check(t.ndim() == 3 && t.dim(0) == 3, "image: tensor must be [3,H,W]");
  Image img(static_cast<int>(t.dim(1)), static_cast<int>(t.dim(2)));
  for (std::int64_t i = 0; i < t.size(); ++i)
    img.data[static_cast<std::size_t>(i)] = static_cast<double>(t[i]);
  return img;
}

// Mask as a network input plane: 1 -> +1 (shadow), 0 -> -1 (no shadow).
template <typename T>
Tensor<T> mask_plane(const ShadowMask& mask) {
  Tensor<T> t({1, mask.height, mask.width});
  for (std::int64_t i = 0; i < t.size(); ++i)
    t[i] = mask.data[static_cast<std::size_t>(i)] ? T(1) : T(-1);
  return t;
}

// [3,H,W] image tensor + mask -> [4,H,W] network input.
template <typename T>
Tensor<T> with_mask_channel(const Tensor<T>& rgb, const ShadowMask& mask) {
  check(rgb.ndim() == 3 && rgb.dim(0) == 3, "image: tensor must be [3,H,W]");
  check(rgb.dim(1) == mask.height && rgb.dim(2) == mask.width,
        "image: mask size mismatch");
  Tensor<T> t({4, rgb.dim(1), rgb.dim(2)});
  std::int64_t plane = rgb.dim(1) * rgb.dim(2);
  for (std::int64_t i = 0; i < 3 * plane; ++i) t[i] = rgb[i];
  for (std::int64_t i = 0; i < plane; ++i)
    t[3 * plane + i] = mask.data[static_cast<std::size_t>(i)] ? T(1) : T(-1);
  return t;
}

}  // namespace unshade
