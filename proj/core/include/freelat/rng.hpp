#pragma once

#include <cstdint>

#include "freelat/vec.hpp"

namespace fbl {

// Splitmix64-based generator. Hand-rolled so that streams are identical
// across standard libraries and platforms; every stochastic result in a
// report must be reproducible from (seed, restarts) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent substream for restart/trial index `i` of a run seeded with
  // `seed`. Substreams never share state with one another.
  static Rng substream(std::uint64_t seed, std::uint64_t i) {
    Rng mix(seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
    return Rng(mix.next_u64());
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

  Vec uniform_vec(std::size_t dim, double lo, double hi) {
    Vec v(dim);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace fbl
