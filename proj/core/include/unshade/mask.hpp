#pragma once

#include <array>
#include <cstdint>
#include <deque>

#include "unshade/image.hpp"
#include "unshade/rng.hpp"

namespace unshade {

using OtsuHistogram = std::array<std::uint64_t, 256>;

// Per-pixel channel mean of (shadowfree - shadow), clamped to [0, 2] and
// rescaled to 0..255 (round half up). Shadow pixels are darker in the shadow
// image, so the difference is positive exactly where the shadow sits.
GrayImage difference_gray(const Image& shadow, const Image& shadowfree);

OtsuHistogram gray_histogram(const GrayImage& gray);

// Otsu's threshold: maximizes the between-class variance
// w0(t)*w1(t)*(mu0(t)-mu1(t))^2 with classes (<= t | > t). Ties are broken
// towards the smallest t. Scores are compared in exact integer arithmetic
// for pixel counts up to ~4*10^5 (see otsu_exact_limit), long double beyond.
// A histogram with a single occupied bin returns that bin's index.
int otsu_threshold(const OtsuHistogram& hist);

// Largest pixel count for which the exact integer comparison is used:
// the score comparison multiplies (255*N^2)^2 by N^2/4, which stays below
// 2^128 while N <= 400000.
constexpr std::uint64_t otsu_exact_limit = 400000;

// Binary shadow mask: 1 where difference_gray > otsu threshold (strict).
ShadowMask make_mask(const Image& shadow, const Image& shadowfree);

ShadowMask zero_mask(int height, int width);

// Bounded FIFO of recently produced masks. Capacity is fixed at
// construction; pushing into a full queue drops the oldest entry.
class MaskQueue {
public:
  explicit MaskQueue(std::size_t capacity);

  // Queue sizing rule: a quarter of the shadow-image count, at least 1.
  static std::size_t capacity_for(std::size_t n_shadow_images);

  void push(ShadowMask m);
  const ShadowMask& newest() const;
  // Uniformly random entry; the queue is unchanged.
  const ShadowMask& sample(Rng& rng) const;

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  // Oldest-first access (serialization order).
  const ShadowMask& at(std::size_t i) const { return items_[i]; }

private:
  std::size_t capacity_;
  std::deque<ShadowMask> items_;
};

}  // namespace unshade
