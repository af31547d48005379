#pragma once

#include <cstdint>

namespace itodil::rng {

// Counter-based substream: the initial state hashes (seed, index), so each
// draw index owns an independent stream no matter in which order the draws
// are evaluated. The generator itself is splitmix64.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  // Poisson variate; mean is split into chunks of at most 10 so the
  // product-of-uniforms method never underflows.
  std::int64_t poisson(double mean);

 private:
  std::uint64_t state_;
};

}  // namespace itodil::rng
