#include "itodil/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace itodil::rng {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t index)
    : state_(mix(mix(seed) ^ mix(index + 0x51a0b7d8e642f3c1ULL))) {}

std::uint64_t Stream::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Stream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::int64_t Stream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) throw std::invalid_argument("poisson: mean must be finite and nonnegative");
  std::int64_t total = 0;
  while (mean > 0.0) {
    const double chunk = mean > 10.0 ? 10.0 : mean;
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double p = 1.0;
    std::int64_t k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    total += k - 1;
  }
  return total;
}

}  // namespace itodil::rng
