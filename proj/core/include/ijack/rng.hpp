#pragma once

#include <cstdint>
#include <limits>

namespace ijack {

/// SplitMix64 (Steele, Lea & Flood 2014): a 64-bit state advanced by the
/// golden-ratio increment and passed through a fixed output mix.
///
/// Independent streams come from `SplitMix64::stream(seed, tag, index)`, whose
/// starting state is mix(mix(mix(seed) ^ tag) ^ index). The estimators use one
/// stream per (seed, estimator tag, sample index), so a sample's draws depend
/// only on those three numbers and never on how samples are split across
/// workers.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    return SplitMix64(mix(mix(mix(seed) ^ tag) ^ index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ijack
