#pragma once

#include <cstdint>
#include <random>

namespace qperm {

// splitmix64 finalizer, used to decorrelate (seed, stream) pairs.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded random stream. Output depends only on (seed, stream), never on the
/// standard library implementation, so runs are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), engine_(mix64(seed ^ mix64(stream + 0x5851f42d4c957f2dULL))) {}

  /// Independent stream for trial `id`, derived from this stream's seed.
  [[nodiscard]] Rng substream(std::uint64_t id) const {
    return Rng(mix64(seed_) ^ mix64(stream_ * 0x2545f4914f6cdd1dULL + 1), id);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Discard the low 2^64 mod bound values so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t v = engine_();
      if (v >= threshold) return v % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace qperm
