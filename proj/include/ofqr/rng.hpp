#pragma once

#include <cmath>
#include <cstdint>

namespace ofqr::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kPurposeSalt = 0xD1B54A32D192ED03ULL;

/// Substream tags. Every random decision in the pipeline draws from a stream
/// keyed by (master seed, sample id, purpose), so samples can be generated in
/// any order and on any worker count with identical results.
enum class Purpose : std::uint64_t {
  payload = 1,
  noise = 2,
  pose = 3,
  shuffle = 4,
  init = 5,
};

/// SplitMix64 finalizer (Stafford mix13). All arithmetic wraps mod 2^64.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Initial SplitMix64 state for a (master, sample, purpose) stream:
/// one mixing round over the sample index, one over the purpose tag.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t sample_id, Purpose p) {
  return mix64(mix64(master_seed + kGamma * sample_id) +
               kPurposeSalt * static_cast<std::uint64_t>(p));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform in [0,1), 53 mantissa bits.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (0,1); safe as a log() argument.
  double u01_open() { return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52; }

  /// Index in [0,n). Modulo bias is < 2^-57 for the n used here (n <= 62).
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

  /// Standard normal via Box-Muller; consumes exactly two draws.
  double normal() {
    const double u = u01_open();
    const double v = u01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
  }

  /// Poisson draw: Knuth multiplication for small means, Hormann's PTRS
  /// transformed rejection otherwise. Consumes a variable number of draws.
  long long poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 10.0) {
      const double limit = std::exp(-lambda);
      long long k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= u01_open();
      } while (p > limit);
      return k - 1;
    }
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = u01() - 0.5;
      const double v = u01_open();
      const double us = 0.5 - std::fabs(u);
      const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const double k = kf;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          k * loglam - lambda - std::lgamma(k + 1.0)) {
        return static_cast<long long>(kf);
      }
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace ofqr::rng
