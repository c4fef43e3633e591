#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iclab {

inline constexpr const char* kVersion = "1.0.0";

// Truncation bound N standing in for an initial segment of the naturals.
// Everything downstream indexes 1-based within [1, N].
class Horizon {
 public:
  explicit Horizon(std::uint64_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("Horizon: bound must be >= 2");
  }
  std::uint64_t value() const { return n_; }
  friend bool operator==(Horizon a, Horizon b) { return a.n_ == b.n_; }
  friend bool operator!=(Horizon a, Horizon b) { return a.n_ != b.n_; }

 private:
  std::uint64_t n_;
};

// Exact rational threshold in (0,1). Decision rules compare via 128-bit
// cross multiplication so verdicts never depend on floating-point rounding.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline bool frac_in_unit_interval(Fraction f) {
  return f.den != 0 && f.num > 0 && f.num < f.den;
}

// a/b < c/d
inline bool frac_less(Fraction a, Fraction b) {
  return static_cast<unsigned __int128>(a.num) * b.den <
         static_cast<unsigned __int128>(b.num) * a.den;
}

// ceil(f * n)
inline std::uint64_t frac_ceil_mul(Fraction f, std::uint64_t n) {
  unsigned __int128 p = static_cast<unsigned __int128>(f.num) * n;
  return static_cast<std::uint64_t>((p + f.den - 1) / f.den);
}

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested construction has no general recipe (e.g. interval witness for a
// custom membership oracle).
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A lazily materialized witness pool ran out before a block completed.
struct witness_exhausted_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The divergent-selection construction has no raw material: the sequence is
// judged convergent, or no convergent subsequence exists at this scale.
struct not_constructible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace iclab
