#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace unshade {

// Deterministic random source: an mt19937_64 engine plus hand-rolled
// distributions. std::uniform_*_distribution output is not pinned by the
// standard, so every distribution here is implemented directly on top of the
// raw 64-bit stream to make sequences reproducible across toolchains.
class Rng {
public:
  static constexpr std::uint64_t default_seed = std::mt19937_64::default_seed;

  Rng() : engine_(default_seed) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n); n must be >= 1. Single draw, fixed-point
  // multiply (bias is < n / 2^64, irrelevant at our ranges and deterministic).
  std::uint64_t uniform_int(std::uint64_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((u128(next_u64()) * u128(n)) >> 64);
  }

  // Standard normal via Box-Muller. Exactly two draws per call and no cached
  // spare, so the stream position is a pure function of the call count.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Engine state as mt19937_64's standard decimal text form.
  std::string save_state() const;
  void load_state(const std::string& text);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
  std::mt19937_64 engine_;
};

// One SplitMix64 step; used to derive independent stream seeds from one
// user-facing seed.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace unshade
