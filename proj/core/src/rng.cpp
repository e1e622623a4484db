#include "unshade/rng.hpp"

#include <cmath>
#include <sstream>

#include "unshade/errors.hpp"

namespace unshade {

double Rng::normal() {
  // r = sqrt(-2 ln(1 - u1)) stays finite because 1 - u1 is in (0, 1].
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  double theta = 2.0 * M_PI * u2;
  return r * std::cos(theta);
}

std::string Rng::save_state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void Rng::load_state(const std::string& text) {
  std::istringstream is(text);
  is >> engine_;
  check(!is.fail(), "rng: malformed engine state text");
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace unshade
