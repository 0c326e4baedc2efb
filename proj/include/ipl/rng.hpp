#pragma once

#include <cstdint>

namespace ipl {

/// SplitMix64 (Steele, Lea, Flood 2014), as listed at https://prng.di.unimi.it.
///
/// Chosen because it is a few lines of integer arithmetic and therefore
/// reproduces bit-exactly in any language; the seed is recorded in every
/// run manifest.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double on [0, 1) from the top 53 bits of the next draw.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Affine map of uniform() onto [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// One fair bit, taken from the most significant bit of the next draw.
  constexpr bool coin() noexcept { return ((*this)() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace ipl
