#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace gridwatch {

// splitmix64 step (Steele et al.). Used both as the stream generator and for
// seed derivation; it produces high-quality 64-bit outputs from sequential
// states and is exactly reproducible on every platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic substream seeds. Every consumer of randomness (per-node
// baselines, schedule sampling, parameter init, shuffles, dropout masks)
// derives its own stream from (base seed, purpose tag, indices), so adding or
// removing one consumer never shifts another's stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(base ^ fnv1a64(tag));
  h = splitmix64(h ^ (a * 0x9e3779b97f4a7c15ull));
  h = splitmix64(h ^ (b * 0xff51afd7ed558ccdull));
  return h;
}

// Small deterministic generator: splitmix64 counter stream with uniform and
// Box-Muller normal draws. Not hardened for cryptography, ample for
// simulation and initialization.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_++); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is irrelevant at simulation scale
  // and keeps the draw sequence platform-exact.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller; second value cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard u1 == 0 so log stays finite.
    double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-53));
    double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gridwatch
