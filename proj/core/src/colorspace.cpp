#include "unshade/colorspace.hpp"

#include <cmath>
#include <limits>

#include "unshade/errors.hpp"

namespace unshade {

namespace {

// IEC 61966-2-1 sRGB transfer function and its inverse.
double srgb_linearize(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_delinearize(double c) {
  return c <= 0.0031308 ? 12.92 * c
                        : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

constexpr double kXn = 95.047, kYn = 100.0, kZn = 108.883;

// CIELAB companding function with the standard linear toe below (6/29)^3.
double lab_f(double t) {
  constexpr double d = 6.0 / 29.0;
  return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
}

double lab_f_inv(double u) {
  constexpr double d = 6.0 / 29.0;
  return u > d ? u * u * u : 3 * d * d * (u - 4.0 / 29.0);
}

std::uint8_t to_byte(double c01) {
  double v = std::floor(c01 * 255.0 + 0.5);
  if (v < 0) v = 0;
  if (v > 255) v = 255;
  return static_cast<std::uint8_t>(v);
}

}  // namespace

Lab srgb8_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  double r = srgb_linearize(r8 / 255.0);
  double g = srgb_linearize(g8 / 255.0);
  double b = srgb_linearize(b8 / 255.0);
  // sRGB-to-XYZ matrix (D65), scaled so that Y of white is 100.
  double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) * 100.0;
  double y = (0.2126729 * r + 0.7151522 * g + 0.0721750 * b) * 100.0;
  double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) * 100.0;
  double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<std::uint8_t, 3> lab_to_srgb8(const Lab& lab) {
  double fy = (lab.l + 16.0) / 116.0;
  double fx = fy + lab.a / 500.0;
  double fz = fy - lab.b / 200.0;
  double x = kXn * lab_f_inv(fx) / 100.0;
  double y = kYn * lab_f_inv(fy) / 100.0;
  double z = kZn * lab_f_inv(fz) / 100.0;
  // Inverse of the matrix above.
  double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  return {to_byte(srgb_delinearize(std::max(0.0, r))),
          to_byte(srgb_delinearize(std::max(0.0, g))),
          to_byte(srgb_delinearize(std::max(0.0, b)))};
}

LabImage to_lab(const Image& img) {
  LabImage out;
  out.height = img.height;
  out.width = img.width;
  std::size_t np = static_cast<std::size_t>(out.pixels());
  out.l.resize(np);
  out.a.resize(np);
  out.b.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    Lab lab = srgb8_to_lab(decode_value(img.data[i]),
                           decode_value(img.data[np + i]),
                           decode_value(img.data[2 * np + i]));
    out.l[i] = lab.l;
    out.a[i] = lab.a;
    out.b[i] = lab.b;
  }
  return out;
}

namespace {

double rmse_impl(const LabImage& pred, const LabImage& truth,
                 const ShadowMask* region, bool inside) {
  check(pred.height == truth.height && pred.width == truth.width,
        "rmse_lab size mismatch");
  if (region)
    check(region->height == pred.height && region->width == pred.width,
          "rmse_lab region size mismatch");
  double sum = 0;
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < pred.pixels(); ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (region) {
      bool in = region->data[idx] != 0;
      if (in != inside) continue;
    }
    double dl = pred.l[idx] - truth.l[idx];
    double da = pred.a[idx] - truth.a[idx];
    double db = pred.b[idx] - truth.b[idx];
    sum += dl * dl + da * da + db * db;
    ++n;
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(sum / (3.0 * static_cast<double>(n)));
}

}  // namespace

double rmse_lab(const LabImage& pred, const LabImage& truth) {
  return rmse_impl(pred, truth, nullptr, true);
}

double rmse_lab_region(const LabImage& pred, const LabImage& truth,
                       const ShadowMask& region, bool inside) {
  return rmse_impl(pred, truth, &region, inside);
}

}  // namespace unshade
