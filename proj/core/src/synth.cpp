#include "unshade/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "unshade/errors.hpp"
#include "unshade/rng.hpp"

namespace unshade {

namespace {

std::uint64_t mix(std::uint64_t x) {
  return splitmix64(x);
}

// Independent per-image streams: shadow images use tag 1, shadow-free tag 2.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                          std::uint64_t index) {
  return mix(mix(base ^ mix(tag)) ^ index);
}

std::uint8_t byte_in_palette(Rng& rng) {
  // Bright-ish backgrounds leave headroom for multiplicative darkening.
  return static_cast<std::uint8_t>(80 + rng.uniform_int(161));
}

struct Color {
  std::uint8_t c[3];
};

Color random_color(Rng& rng) {
  return {{byte_in_palette(rng), byte_in_palette(rng), byte_in_palette(rng)}};
}

std::uint8_t lerp_byte(std::uint8_t a, std::uint8_t b, double t) {
  double v = std::floor(a + (static_cast<double>(b) - a) * t + 0.5);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

RawImage flat_background(int size, Rng& rng) {
  Color c = random_color(rng);
  RawImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int ch = 0; ch < 3; ++ch) img.at(y, x, ch) = c.c[ch];
  return img;
}

RawImage gradient_background(int size, Rng& rng) {
  Color c0 = random_color(rng), c1 = random_color(rng);
  double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  double dx = std::cos(theta), dy = std::sin(theta);
  // Normalize the projection over the pixel grid to [0,1].
  double lo = 0, hi = 0;
  for (int cy = 0; cy <= 1; ++cy)
    for (int cx = 0; cx <= 1; ++cx) {
      double p = dx * cx * (size - 1) + dy * cy * (size - 1);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  double span = hi - lo > 1e-12 ? hi - lo : 1.0;
  RawImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double t = (dx * x + dy * y - lo) / span;
      for (int ch = 0; ch < 3; ++ch)
        img.at(y, x, ch) = lerp_byte(c0.c[ch], c1.c[ch], t);
    }
  return img;
}

RawImage checker_background(int size, Rng& rng) {
  Color c0 = random_color(rng), c1 = random_color(rng);
  int cell = 4 + static_cast<int>(rng.uniform_int(13));  // 4..16 px
  RawImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const Color& c = ((x / cell + y / cell) % 2 == 0) ? c0 : c1;
      for (int ch = 0; ch < 3; ++ch) img.at(y, x, ch) = c.c[ch];
    }
  return img;
}

// Value noise on a coarse lattice, quintic-smoothed, two octaves.
std::vector<double> value_noise(int size, int cells, Rng& rng) {
  int n = cells + 1;
  std::vector<double> lattice(static_cast<std::size_t>(n) * n);
  for (auto& v : lattice) v = rng.uniform01();
  std::vector<double> out(static_cast<std::size_t>(size) * size);
  auto fade = [](double u) { return u * u * u * (u * (6 * u - 15) + 10); };
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double fx = static_cast<double>(x) / size * cells;
      double fy = static_cast<double>(y) / size * cells;
      int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
      double ux = fade(fx - ix), uy = fade(fy - iy);
      auto l = [&](int yy, int xx) {
        return lattice[static_cast<std::size_t>(yy) * n + xx];
      };
      double top = l(iy, ix) + (l(iy, ix + 1) - l(iy, ix)) * ux;
      double bot = l(iy + 1, ix) + (l(iy + 1, ix + 1) - l(iy + 1, ix)) * ux;
      out[static_cast<std::size_t>(y) * size + x] = top + (bot - top) * uy;
    }
  return out;
}

RawImage perlin_background(int size, Rng& rng) {
  Color c0 = random_color(rng), c1 = random_color(rng);
  int cells = 4 + static_cast<int>(rng.uniform_int(5));  // 4..8
  std::vector<double> o1 = value_noise(size, cells, rng);
  std::vector<double> o2 = value_noise(size, cells * 2, rng);
  RawImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * size + x;
      double v = 0.65 * o1[i] + 0.35 * o2[i];
      for (int ch = 0; ch < 3; ++ch)
        img.at(y, x, ch) = lerp_byte(c0.c[ch], c1.c[ch], v);
    }
  return img;
}

RawImage make_background(const SynthConfig& cfg, Rng& rng) {
  switch (cfg.background) {
    case Background::flat_color: return flat_background(cfg.image_size, rng);
    case Background::gradient:
      return gradient_background(cfg.image_size, rng);
    case Background::checker: return checker_background(cfg.image_size, rng);
    case Background::perlin_texture:
      return perlin_background(cfg.image_size, rng);
  }
  throw Error("unreachable background kind");
}

ShadowMask polygon_mask(int size, Rng& rng) {
  int k = 3 + static_cast<int>(rng.uniform_int(5));  // 3..7 vertices
  double cx = rng.uniform(0.3, 0.7) * size;
  double cy = rng.uniform(0.3, 0.7) * size;
  std::vector<double> angles(static_cast<std::size_t>(k));
  for (auto& a : angles) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::sort(angles.begin(), angles.end());
  std::vector<double> vx(static_cast<std::size_t>(k)),
      vy(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double r = rng.uniform(0.15, 0.35) * size;
    vx[static_cast<std::size_t>(i)] = cx + r * std::cos(angles[i]);
    vy[static_cast<std::size_t>(i)] = cy + r * std::sin(angles[i]);
  }
  ShadowMask m(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double px = x + 0.5, py = y + 0.5;
      bool in = false;  // crossing-number test
      for (int i = 0, j = k - 1; i < k; j = i++) {
        bool straddles = (vy[i] > py) != (vy[j] > py);
        if (straddles &&
            px < (vx[j] - vx[i]) * (py - vy[i]) / (vy[j] - vy[i]) + vx[i])
          in = !in;
      }
      m.at(y, x) = in ? 1 : 0;
    }
  return m;
}

ShadowMask ellipse_mask(int size, Rng& rng) {
  double cx = rng.uniform(0.3, 0.7) * size;
  double cy = rng.uniform(0.3, 0.7) * size;
  double a = rng.uniform(0.12, 0.3) * size;
  double b = rng.uniform(0.12, 0.3) * size;
  double theta = rng.uniform(0.0, std::numbers::pi);
  double c = std::cos(theta), s = std::sin(theta);
  ShadowMask m(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      double u = (dx * c + dy * s) / a;
      double v = (-dx * s + dy * c) / b;
      m.at(y, x) = (u * u + v * v <= 1.0) ? 1 : 0;
    }
  return m;
}

ShadowMask blob_mask(int size, Rng& rng) {
  double cx = rng.uniform(0.35, 0.65) * size;
  double cy = rng.uniform(0.35, 0.65) * size;
  double r0 = rng.uniform(0.15, 0.28) * size;
  double amp[3], phase[3];
  for (int k = 0; k < 3; ++k) {
    amp[k] = rng.uniform(0.0, 0.25 / (k + 2));
    phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  ShadowMask m(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      double phi = std::atan2(dy, dx);
      double r = r0;
      for (int k = 0; k < 3; ++k)
        r += r0 * amp[k] * std::cos((k + 2) * phi + phase[k]);
      m.at(y, x) = (std::hypot(dx, dy) <= r) ? 1 : 0;
    }
  return m;
}

ShadowMask make_shape(const SynthConfig& cfg, Rng& rng) {
  switch (cfg.shadow_shape) {
    case ShadowShape::polygon: return polygon_mask(cfg.image_size, rng);
    case ShadowShape::ellipse: return ellipse_mask(cfg.image_size, rng);
    case ShadowShape::soft_blob: return blob_mask(cfg.image_size, rng);
  }
  throw Error("unreachable shadow shape kind");
}

// Separable box blur of a [0,1] field with window (2r+1); one pass.
std::vector<double> box_blur(const std::vector<double>& in, int size, int r) {
  std::vector<double> tmp(in.size()), out(in.size());
  double inv = 1.0 / (2 * r + 1);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double s = 0;
      for (int d = -r; d <= r; ++d) {
        int xx = std::clamp(x + d, 0, size - 1);
        s += in[static_cast<std::size_t>(y) * size + xx];
      }
      tmp[static_cast<std::size_t>(y) * size + x] = s * inv;
    }
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double s = 0;
      for (int d = -r; d <= r; ++d) {
        int yy = std::clamp(y + d, 0, size - 1);
        s += tmp[static_cast<std::size_t>(yy) * size + x];
      }
      out[static_cast<std::size_t>(y) * size + x] = s * inv;
    }
  return out;
}

}  // namespace

SynthPair synth_shadow_image(const SynthConfig& cfg, int index) {
  cfg.validate();
  check_usage(index >= 0 && index < cfg.n_shadow,
              "shadow image index out of range");
  Rng rng(derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(index)));
  SynthPair p;
  p.truth = make_background(cfg, rng);
  ShadowMask shape = make_shape(cfg, rng);
  double atten = rng.uniform(cfg.attenuation_min, cfg.attenuation_max);

  int size = cfg.image_size;
  std::vector<double> alpha(static_cast<std::size_t>(size) * size);
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = shape.data[i];
  if (cfg.penumbra_width > 0) alpha = box_blur(alpha, size, cfg.penumbra_width);

  p.shadow = RawImage(size, size);
  p.mask = ShadowMask(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double factor =
          1.0 - alpha[static_cast<std::size_t>(y) * size + x] * (1.0 - atten);
      bool changed = false;
      for (int ch = 0; ch < 3; ++ch) {
        double v = std::floor(p.truth.at(y, x, ch) * factor + 0.5);
        auto b = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        p.shadow.at(y, x, ch) = b;
        changed = changed || b != p.truth.at(y, x, ch);
      }
      p.mask.at(y, x) = changed ? 1 : 0;
    }
  return p;
}

RawImage synth_free_image(const SynthConfig& cfg, int index) {
  cfg.validate();
  check_usage(index >= 0 && index < cfg.n_shadowfree,
              "shadow-free image index out of range");
  Rng rng(derive_seed(cfg.seed, 2, static_cast<std::uint64_t>(index)));
  return make_background(cfg, rng);
}

SynthResult synth_dataset(const SynthConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::path root(out_dir);
  fs::create_directories(root / "images");
  fs::create_directories(root / "truth");

  auto name = [](const char* stem, int i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03d.png", stem, i);
    return std::string(buf);
  };

  std::ofstream manifest(root / "manifest.tsv");
  std::ofstream pairs(root / "truth" / "pairs.tsv");
  check(manifest.good() && pairs.good(),
        "cannot create dataset manifests under " + out_dir);

  for (int i = 0; i < cfg.n_shadow; ++i) {
    SynthPair p = synth_shadow_image(cfg, i);
    std::string img_name = name("shadow", i);
    std::string truth_name = name("shadow", i);
    truth_name.replace(truth_name.size() - 4, 4, "_truth.png");
    std::string mask_name = truth_name;
    mask_name.replace(mask_name.size() - 4, 4, "_mask.png");

    write_png_rgb8((root / "images" / img_name).string(), p.shadow);
    write_png_rgb8((root / "truth" / truth_name).string(), p.truth);
    write_png_rgb8((root / "truth" / mask_name).string(), mask_to_raw(p.mask));
    manifest << "s\timages/" << img_name << "\n";
    pairs << "../images/" << img_name << "\t" << truth_name << "\n";
  }
  for (int i = 0; i < cfg.n_shadowfree; ++i) {
    RawImage img = synth_free_image(cfg, i);
    std::string img_name = name("free", i);
    write_png_rgb8((root / "images" / img_name).string(), img);
    manifest << "f\timages/" << img_name << "\n";
  }
  manifest.flush();
  pairs.flush();
  check(manifest.good() && pairs.good(),
        "failed writing dataset manifests under " + out_dir);

  SynthResult r;
  r.manifest_path = (root / "manifest.tsv").string();
  r.pairs_path = (root / "truth" / "pairs.tsv").string();
  return r;
}

}  // namespace unshade
