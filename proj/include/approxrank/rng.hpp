#pragma once

#include <cmath>
#include <cstdint>

namespace approxrank {

// Counter-based pseudorandom generator.  Output i is a pure function of
// (key, i), so streams can be split by deriving child keys and any draw can
// be reproduced from the seed alone.  The mixer is the splitmix64 finalizer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  // Child generator with an independent stream.  Deriving with the same
  // label twice gives the same child.
  Rng split(std::uint64_t label) const {
    return Rng(mix(key_ ^ mix(label + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Fair coin in {-1, +1}.
  int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 1e-300) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace approxrank
