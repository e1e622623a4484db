#include "unshade/mask.hpp"

#include <cmath>

#include "unshade/errors.hpp"

namespace unshade {

GrayImage difference_gray(const Image& shadow, const Image& shadowfree) {
  check(shadow.height == shadowfree.height && shadow.width == shadowfree.width,
        "mask: image dimensions differ");
  GrayImage gray(shadow.height, shadow.width);
  for (int y = 0; y < shadow.height; ++y) {
    for (int x = 0; x < shadow.width; ++x) {
      double d = 0.0;
      for (int c = 0; c < 3; ++c)
        d += shadowfree.at(c, y, x) - shadow.at(c, y, x);
      d /= 3.0;
      if (d < 0.0) d = 0.0;
      if (d > 2.0) d = 2.0;
      gray.at(y, x) = static_cast<std::uint8_t>(
          std::floor(255.0 * d / 2.0 + 0.5));
    }
  }
  return gray;
}

OtsuHistogram gray_histogram(const GrayImage& gray) {
  OtsuHistogram hist{};
  for (auto v : gray.data) hist[v]++;
  return hist;
}

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

struct OtsuScore {
  // Between-class variance at threshold t is proportional to
  //   (s0*N - S*c0)^2 / (c0*(N - c0))
  // where c0/s0 are the count/intensity-sum of the low class. Keeping the
  // numerator and denominator separate allows exact comparison.
  u128 num = 0;
  std::uint64_t den = 0;  // c0*(N-c0) <= N^2/4, fits easily
  bool valid = false;
};

bool better_exact(const OtsuScore& a, const OtsuScore& b) {
  // a > b  <=>  a.num * b.den > b.num * a.den (both denominators positive).
  return a.num * b.den > b.num * a.den;
}

bool better_approx(const OtsuScore& a, const OtsuScore& b) {
  long double fa = static_cast<long double>(a.num) / a.den;
  long double fb = static_cast<long double>(b.num) / b.den;
  return fa > fb;
}

}  // namespace

int otsu_threshold(const OtsuHistogram& hist) {
  std::uint64_t n = 0, s = 0;
  int occupied = -1, occupied_count = 0;
  for (int i = 0; i < 256; ++i) {
    if (hist[static_cast<std::size_t>(i)]) {
      occupied = i;
      ++occupied_count;
    }
    n += hist[static_cast<std::size_t>(i)];
    s += static_cast<std::uint64_t>(i) * hist[static_cast<std::size_t>(i)];
  }
  check(n > 0, "mask: empty histogram");
  if (occupied_count == 1) return occupied;  // no valid two-class split

  const bool exact = n <= otsu_exact_limit;
  OtsuScore best;
  int best_t = 0;
  std::uint64_t c0 = 0, s0 = 0;
  for (int t = 0; t < 256; ++t) {
    c0 += hist[static_cast<std::size_t>(t)];
    s0 += static_cast<std::uint64_t>(t) * hist[static_cast<std::size_t>(t)];
    if (c0 == 0 || c0 == n) continue;
    i128 u = i128(s0) * i128(n) - i128(s) * i128(c0);
    OtsuScore score;
    score.num = u128(u < 0 ? -u : u);
    score.num *= score.num;
    score.den = c0 * (n - c0);
    score.valid = true;
    bool take;
    if (!best.valid) {
      take = true;
    } else if (exact) {
      take = better_exact(score, best);
    } else {
      take = better_approx(score, best);
    }
    if (take) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

ShadowMask make_mask(const Image& shadow, const Image& shadowfree) {
  GrayImage gray = difference_gray(shadow, shadowfree);
  int t = otsu_threshold(gray_histogram(gray));
  ShadowMask mask(gray.height, gray.width);
  for (std::size_t i = 0; i < gray.data.size(); ++i)
    mask.data[i] = gray.data[i] > t ? 1 : 0;
  return mask;
}

ShadowMask zero_mask(int height, int width) {
  check(height > 0 && width > 0, "mask: dimensions must be positive");
  return ShadowMask(height, width);
}

MaskQueue::MaskQueue(std::size_t capacity) : capacity_(capacity) {
  check(capacity_ >= 1, "mask: queue capacity must be at least 1");
}

std::size_t MaskQueue::capacity_for(std::size_t n_shadow_images) {
  std::size_t cap = n_shadow_images / 4;
  return cap < 1 ? 1 : cap;
}

void MaskQueue::push(ShadowMask m) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(m));
}

const ShadowMask& MaskQueue::newest() const {
  check(!items_.empty(), "mask: queue is empty");
  return items_.back();
}

const ShadowMask& MaskQueue::sample(Rng& rng) const {
  check(!items_.empty(), "mask: cannot sample from empty queue");
  return items_[rng.uniform_int(items_.size())];
}

}  // namespace unshade
