#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vdt {

// Deterministic generators used everywhere randomness is needed. The std
// distributions are implementation-defined, so outputs would not be stable
// across toolchains; these are fully specified instead.

/// SplitMix64 finalizer. Maps any 64-bit value to a well-mixed one.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed for an independent substream (per frame, per pixel, ...).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
}

/// SplitMix64 sequence generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

  /// Uniform double in [0, 1).
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// 64-bit linear congruential generator (Knuth MMIX constants:
/// state = state * 6364136223846793005 + 1442695040888963407).
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
    return state_;
  }

  /// Uniform double in the open interval (0, 1): ((next() >> 11) + 0.5) * 2^-53.
  double unit_open() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Standard normal deviates: Box-Muller over Lcg64. Draws u1, u2, emits
/// sqrt(-2 ln u1) * cos(2 pi u2) first, the sin twin on the next call.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) noexcept : gen_(seed) {}

  double next() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.unit_open();
    const double u2 = gen_.unit_open();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  Lcg64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vdt
