#pragma once

#include <cstdint>

namespace iclab::rng {

// SplitMix64 run in counter mode. block(key, i) equals the i-th output of
// Vigna's splitmix64 seeded with `key`, but is addressable by counter, so
// trials keyed by independent child streams never contend for generator
// state. The algorithm and its test vectors are part of the public contract
// (docs/prng.md); changing either is a breaking change.
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t block(std::uint64_t counter) const {
    return scramble(key_ + (counter + 1) * kGamma);
  }

  // Re-keyed child stream. Folding a salt never consumes blocks of the
  // parent, so siblings are independent and safe to draw from concurrently.
  constexpr Stream child(std::uint64_t salt) const {
    return Stream(scramble((key_ ^ 0x517CC1B727220A95ull) + (salt + 1) * kGamma));
  }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Fixed purpose salts, so distinct uses of one master seed never overlap.
enum : std::uint64_t {
  kSaltLambda = 1,
  kSaltPerm = 2,
  kSaltBattery = 3,
  kSaltDomain = 4,
  kSaltPrefix = 5,
  kSaltCorpus = 6,
  kSaltExperiment = 7,
};

// Sequential cursor over a stream. Deterministic given (stream, start);
// rejection loops simply advance the counter.
class Drawer {
 public:
  explicit Drawer(Stream s, std::uint64_t start = 0) : s_(s), ctr_(start) {}

  std::uint64_t next() { return s_.block(ctr_++); }

  // Uniform in [0, 1), 53 mantissa bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased uniform in [0, bound) via modulo rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

 private:
  Stream s_;
  std::uint64_t ctr_;
};

}  // namespace iclab::rng
