#include "unshade/image.hpp"

#include <cmath>

namespace unshade {

std::uint8_t decode_value(double v) {
  double b = std::floor(127.5 * (v + 1.0) + 0.5);
  if (b < 0.0) return 0;
  if (b > 255.0) return 255;
  return static_cast<std::uint8_t>(b);
}

Image encode_image(const RawImage& raw) {
  check(raw.height > 0 && raw.width > 0, "image: empty input");
  Image img(raw.height, raw.width);
  for (int y = 0; y < raw.height; ++y)
    for (int x = 0; x < raw.width; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = encode_value(raw.at(y, x, c));
  return img;
}

RawImage decode_image(const Image& img) {
  RawImage raw(img.height, img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        raw.at(y, x, c) = decode_value(img.at(c, y, x));
  return raw;
}

Image crop(const Image& img, int y0, int x0, int h, int w) {
  check(y0 >= 0 && x0 >= 0 && h > 0 && w > 0 && y0 + h <= img.height &&
            x0 + w <= img.width,
        "image: crop window out of bounds");
  Image out(h, w);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
  return out;
}

Image hflip(const Image& img) {
  Image out(img.height, img.width);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
  return out;
}

Image center_crop_multiple(const Image& img, int m) {
  check(m > 0, "image: crop multiple must be positive");
  int h = (img.height / m) * m;
  int w = (img.width / m) * m;
  check(h > 0 && w > 0, "image: smaller than crop multiple");
  if (h == img.height && w == img.width) return img;
  int y0 = (img.height - h) / 2;
  int x0 = (img.width - w) / 2;
  return crop(img, y0, x0, h, w);
}

Image load_image_div4(const std::string& path) {
  return center_crop_multiple(encode_image(read_png_rgb8(path)), 4);
}

RawImage hstack(const std::vector<RawImage>& imgs) {
  check(!imgs.empty(), "image: hstack of nothing");
  const int sep = 2;
  int h = imgs[0].height;
  int w = 0;
  for (const auto& im : imgs) {
    check(im.height == h, "image: hstack needs equal heights");
    w += im.width;
  }
  w += sep * static_cast<int>(imgs.size() - 1);
  RawImage out(h, w);
  for (auto& b : out.rgb) b = 255;
  int x0 = 0;
  for (const auto& im : imgs) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < im.width; ++x)
        for (int c = 0; c < 3; ++c) out.at(y, x0 + x, c) = im.at(y, x, c);
    x0 += im.width + sep;
  }
  return out;
}

GrayImage mask_to_gray(const ShadowMask& mask) {
  GrayImage g(mask.height, mask.width);
  for (std::size_t i = 0; i < mask.data.size(); ++i)
    g.data[i] = mask.data[i] ? 255 : 0;
  return g;
}

RawImage mask_to_raw(const ShadowMask& mask) {
  RawImage raw(mask.height, mask.width);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      for (int c = 0; c < 3; ++c) raw.at(y, x, c) = mask.at(y, x) ? 255 : 0;
  return raw;
}

ShadowMask mask_from_raw(const RawImage& raw) {
  ShadowMask mask(raw.height, raw.width);
  for (int y = 0; y < raw.height; ++y)
    for (int x = 0; x < raw.width; ++x) {
      int sum = raw.at(y, x, 0) + raw.at(y, x, 1) + raw.at(y, x, 2);
      mask.at(y, x) = sum > 3 * 127 ? 1 : 0;
    }
  return mask;
}

}  // namespace unshade
