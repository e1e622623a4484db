#pragma once

#include <string>

#include "unshade/image.hpp"
#include "unshade/mask.hpp"
#include "unshade/nn/layers.hpp"

namespace unshade {

// Residual translation generator. The stack predicts a tanh-bounded 3-channel
// residual which is added to the input image (first 3 channels) and clamped
// back to [-1, 1]. Input is [in_ch, H, W] with H and W multiples of 4 (two
// stride-2 stages must round-trip exactly); output is [3, H, W].
template <typename T>
struct GenCache {
  nn::Cache<T> body;
  Tensor<T> preclamp;
};

template <typename T>
class ResnetGenerator {
public:
  ResnetGenerator(int in_ch, int base, int blocks)
      : in_ch_(in_ch), base_(base), blocks_(blocks) {
    using namespace nn;
    body_.template emplace<Conv2d<T>>(in_ch, base, 7, 1, 3, PadMode::reflect);
    body_.template emplace<InstanceNorm2d<T>>(base);
    body_.template emplace<ReLU<T>>();
    body_.template emplace<Conv2d<T>>(base, 2 * base, 3, 2, 1,
                                      PadMode::reflect);
    body_.template emplace<InstanceNorm2d<T>>(2 * base);
    body_.template emplace<ReLU<T>>();
    body_.template emplace<Conv2d<T>>(2 * base, 4 * base, 3, 2, 1,
                                      PadMode::reflect);
    body_.template emplace<InstanceNorm2d<T>>(4 * base);
    body_.template emplace<ReLU<T>>();
    for (int i = 0; i < blocks; ++i)
      body_.template emplace<ResidualBlock<T>>(4 * base);
    body_.template emplace<ConvTranspose2d<T>>(4 * base, 2 * base);
    body_.template emplace<InstanceNorm2d<T>>(2 * base);
    body_.template emplace<ReLU<T>>();
    body_.template emplace<ConvTranspose2d<T>>(2 * base, base);
    body_.template emplace<InstanceNorm2d<T>>(base);
    body_.template emplace<ReLU<T>>();
    body_.template emplace<Conv2d<T>>(base, 3, 7, 1, 3, PadMode::reflect);
    body_.template emplace<Tanh<T>>();
  }

  Tensor<T> forward(const Tensor<T>& x, GenCache<T>* cache) const {
    check(x.ndim() == 3 && x.dim(0) == in_ch_,
          "networks: generator expects " + std::to_string(in_ch_) +
              " channels, got " + x.shape_string());
    check(x.dim(1) % 4 == 0 && x.dim(2) % 4 == 0 && x.dim(1) >= 8 &&
              x.dim(2) >= 8,
          "networks: generator input dims must be multiples of 4 and >= 8, "
          "got " + x.shape_string());
    Tensor<T> res = body_.forward(x, cache ? &cache->body : nullptr);
    const std::int64_t plane = x.dim(1) * x.dim(2);
    Tensor<T> pre({3, x.dim(1), x.dim(2)});
    for (std::int64_t i = 0; i < 3 * plane; ++i) pre[i] = x[i] + res[i];
    Tensor<T> y(pre.shape());
    for (std::int64_t i = 0; i < y.size(); ++i)
      y[i] = pre[i] < T(-1) ? T(-1) : (pre[i] > T(1) ? T(1) : pre[i]);
    if (cache) cache->preclamp = std::move(pre);
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy, const GenCache<T>& cache,
                     bool accum_param_grads, bool need_input_grad) {
    const Tensor<T>& pre = cache.preclamp;
    Tensor<T> dpre(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i)
      dpre[i] = (pre[i] > T(-1) && pre[i] < T(1)) ? gy[i] : T(0);
    Tensor<T> dx =
        body_.backward(dpre, cache.body, accum_param_grads, need_input_grad);
    if (!need_input_grad) return {};
    // The residual skip feeds the first 3 input channels directly.
    for (std::int64_t i = 0; i < dpre.size(); ++i) dx[i] += dpre[i];
    return dx;
  }

  nn::ParamList<T> params() {
    nn::ParamList<T> out;
    body_.collect_params("body", out);
    return out;
  }

  std::string fingerprint() const {
    return "resnet_generator(in=" + std::to_string(in_ch_) +
           ",base=" + std::to_string(base_) +
           ",blocks=" + std::to_string(blocks_) + ")";
  }

  int in_channels() const { return in_ch_; }

private:
  int in_ch_, base_, blocks_;
  nn::Sequential<T> body_;
};

// 70x70-receptive-field patch discriminator: five 4x4 convolutions (stride
// 2,2,2,1,1), instance norm on the middle three, leaky ReLU 0.2, raw score
// grid output [1, h', w'] (no sigmoid; the loss applies it).
template <typename T>
class PatchDiscriminator {
public:
  // with_norm=false builds the same conv topology without instance norm;
  // only used by tests that need strict receptive-field locality (the norm
  // statistics couple the whole plane weakly).
  PatchDiscriminator(int in_ch, int base, bool with_norm = true)
      : in_ch_(in_ch), base_(base), with_norm_(with_norm) {
    using namespace nn;
    body_.template emplace<Conv2d<T>>(in_ch, base, 4, 2, 1, PadMode::zero);
    body_.template emplace<LeakyReLU<T>>(T(0.2));
    body_.template emplace<Conv2d<T>>(base, 2 * base, 4, 2, 1, PadMode::zero);
    if (with_norm) body_.template emplace<InstanceNorm2d<T>>(2 * base);
    body_.template emplace<LeakyReLU<T>>(T(0.2));
    body_.template emplace<Conv2d<T>>(2 * base, 4 * base, 4, 2, 1,
                                      PadMode::zero);
    if (with_norm) body_.template emplace<InstanceNorm2d<T>>(4 * base);
    body_.template emplace<LeakyReLU<T>>(T(0.2));
    body_.template emplace<Conv2d<T>>(4 * base, 8 * base, 4, 1, 1,
                                      PadMode::zero);
    if (with_norm) body_.template emplace<InstanceNorm2d<T>>(8 * base);
    body_.template emplace<LeakyReLU<T>>(T(0.2));
    body_.template emplace<Conv2d<T>>(8 * base, 1, 4, 1, 1, PadMode::zero);
  }

  Tensor<T> forward(const Tensor<T>& x, nn::Cache<T>* cache) const {
    check(x.ndim() == 3 && x.dim(0) == in_ch_,
          "networks: discriminator expects " + std::to_string(in_ch_) +
              " channels, got " + x.shape_string());
    return body_.forward(x, cache);
  }

  Tensor<T> backward(const Tensor<T>& gy, const nn::Cache<T>& cache,
                     bool accum_param_grads, bool need_input_grad) {
    return body_.backward(gy, cache, accum_param_grads, need_input_grad);
  }

  nn::ParamList<T> params() {
    nn::ParamList<T> out;
    body_.collect_params("body", out);
    return out;
  }

  std::string fingerprint() const {
    return "patch_discriminator(in=" + std::to_string(in_ch_) +
           ",base=" + std::to_string(base_) +
           (with_norm_ ? "" : ",nonorm") + ")";
  }

private:
  int in_ch_, base_;
  bool with_norm_;
  nn::Sequential<T> body_;
};

// ---------------------------------------------------------------------------
// Inference entry points

// Shadow removal: 3-channel generator on a normalized image.
template <typename T>
Image generate_shadowfree(const ResnetGenerator<T>& g, const Image& img) {
  check(g.in_channels() == 3, "networks: expected the 3-channel generator");
  return tensor_to_image(g.forward(image_to_tensor<T>(img), nullptr));
}

// Shadow synthesis: 4-channel generator guided by a mask.
template <typename T>
Image generate_shadow(const ResnetGenerator<T>& g, const Image& img,
                      const ShadowMask& mask) {
  check(g.in_channels() == 4, "networks: expected the 4-channel generator");
  check(mask.height == img.height && mask.width == img.width,
        "networks: mask size mismatch");
  return tensor_to_image(
      g.forward(with_mask_channel(image_to_tensor<T>(img), mask), nullptr));
}

template <typename T>
Tensor<T> discriminate(const PatchDiscriminator<T>& d, const Image& img) {
  return d.forward(image_to_tensor<T>(img), nullptr);
}

// Full-size shadow removal for arbitrary dimensions: reflect-pads bottom and
// right up to the next multiple of 4, runs the generator, crops back.
template <typename T>
Image generate_shadowfree_fullsize(const ResnetGenerator<T>& g,
                                   const Image& img) {
  check(g.in_channels() == 3, "networks: expected the 3-channel generator");
  check(img.height >= 8 && img.width >= 8,
        "networks: image too small for inference");
  int padb = (4 - img.height % 4) % 4;
  int padr = (4 - img.width % 4) % 4;
  Tensor<T> x = image_to_tensor<T>(img);
  if (padb || padr) x = nn::reflect_pad(x, 0, padb, 0, padr);
  Tensor<T> y = g.forward(x, nullptr);
  if (padb || padr) {
    Tensor<T> cut({3, img.height, img.width});
    for (int c = 0; c < 3; ++c)
      for (int yy = 0; yy < img.height; ++yy)
        for (int xx = 0; xx < img.width; ++xx)
          cut.at(c, yy, xx) = y.at(c, yy, xx);
    y = std::move(cut);
  }
  return tensor_to_image(y);
}

// Full-size mask-guided shadow synthesis; the mask plane is reflect-padded
// together with the image so both stay aligned.
template <typename T>
Image generate_shadow_fullsize(const ResnetGenerator<T>& g, const Image& img,
                               const ShadowMask& mask) {
  check(g.in_channels() == 4, "networks: expected the 4-channel generator");
  check(mask.height == img.height && mask.width == img.width,
        "networks: mask size mismatch");
  check(img.height >= 8 && img.width >= 8,
        "networks: image too small for inference");
  int padb = (4 - img.height % 4) % 4;
  int padr = (4 - img.width % 4) % 4;
  Tensor<T> x = with_mask_channel(image_to_tensor<T>(img), mask);
  if (padb || padr) x = nn::reflect_pad(x, 0, padb, 0, padr);
  Tensor<T> y = g.forward(x, nullptr);
  if (padb || padr) {
    Tensor<T> cut({3, img.height, img.width});
    for (int c = 0; c < 3; ++c)
      for (int yy = 0; yy < img.height; ++yy)
        for (int xx = 0; xx < img.width; ++xx)
          cut.at(c, yy, xx) = y.at(c, yy, xx);
    y = std::move(cut);
  }
  return tensor_to_image(y);
}

}  // namespace unshade
