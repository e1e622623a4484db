#pragma once

#include <array>
#include <cstdint>

#include "unshade/image.hpp"

namespace unshade {

// CIELAB conversion pinned to sRGB primaries with the D65/2-degree white
// point (X_n, Y_n, Z_n) = (95.047, 100.0, 108.883). All image-level paths go
// through 8-bit sRGB quantization first, matching how images are stored.
struct Lab {
  double l = 0, a = 0, b = 0;
};

Lab srgb8_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Inverse conversion; out-of-gamut values are clamped to [0,255].
std::array<std::uint8_t, 3> lab_to_srgb8(const Lab& lab);

// Planar L/a/b representation of a [-1,1] image (quantized to 8-bit first).
struct LabImage {
  std::int64_t height = 0, width = 0;
  std::vector<double> l, a, b;  // row-major planes

  std::int64_t pixels() const { return height * width; }
};

LabImage to_lab(const Image& img);

// RMSE over (selected pixels x 3 Lab channels). With a region mask, `inside`
// selects pixels where the mask is 1 (the shadow region) or 0. An empty
// selection yields NaN -- undefined, never silently zero.
double rmse_lab(const LabImage& pred, const LabImage& truth);
double rmse_lab_region(const LabImage& pred, const LabImage& truth,
                       const ShadowMask& region, bool inside);

}  // namespace unshade
