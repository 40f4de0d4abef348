#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace seqcoint::rng {

/// Roles used to derive independent named substreams from one base seed.
enum class Role : std::uint64_t {
  RegressorInnov = 1,  // v^u innovations driving the I(1) regressors
  ErrorInnov = 2,      // v^e innovations driving the stationary error
  BreakExtra = 3,      // extra draws for local-to-null random walks
  Randomizer = 4,      // xi draws of the randomised statistic
  BoundarySim = 5,     // Brownian paths for critical-value simulation
};

/// splitmix64 finalizer; the standard 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t base, std::uint64_t a) {
  return mix64(base ^ mix64(a ^ 0xd1b54a32d192ed03ULL));
}
inline std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive(derive(base, a), b);
}
inline std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
  return derive(derive(base, a, b), c);
}

/// One named random stream. Substreams are derived from the stream's key,
/// not its consumption state, so derivation is order-free and safe to do
/// from parallel workers.
///
/// Deviates are produced by mt19937_64 (bit-exact per the ISO spec) plus an
/// explicit 53-bit uniform mapping and Box-Muller, so sequences are
/// reproducible across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key), eng_(mix64(key)) {}

  std::uint64_t key() const { return key_; }

  Stream substream(std::uint64_t index) const { return Stream(derive(key_, index)); }
  Stream substream(Role role) const {
    return Stream(derive(key_, static_cast<std::uint64_t>(role)));
  }
  Stream substream(Role role, std::uint64_t index) const {
    return Stream(derive(key_, static_cast<std::uint64_t>(role), index));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on (0,1]; 53-bit resolution, never 0 so log() is safe.
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  std::uint64_t key_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace seqcoint::rng
