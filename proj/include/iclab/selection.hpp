#pragma once

#include <cstdint>
#include <vector>

#include "iclab/common.hpp"
#include "iclab/rng.hpp"

namespace iclab {

// Truncated element of S: a strictly increasing selection s(1) < s(2) < ...
// with entries bounded by the source horizon.
class SubseqPrefix {
 public:
  SubseqPrefix(std::vector<std::uint64_t> entries, Horizon source_horizon);

  const std::vector<std::uint64_t>& entries() const { return entries_; }
  Horizon source_horizon() const { return source_horizon_; }
  std::uint64_t length() const { return entries_.size(); }
  // 1-based application s(n)
  std::uint64_t at(std::uint64_t n) const;

  static SubseqPrefix identity(Horizon h);

 private:
  std::vector<std::uint64_t> entries_;
  Horizon source_horizon_;
};

// Truncated element of T: a 0/1 vector of fixed length. The full space wants
// infinitely many ones; at truncation, conversion back to S requires >= 1.
class CoinVector {
 public:
  explicit CoinVector(std::vector<std::uint8_t> bits);

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::uint64_t length() const { return bits_.size(); }
  // 1-based
  bool bit(std::uint64_t j) const { return bits_.at(j - 1) != 0; }
  std::uint64_t ones() const;

 private:
  std::vector<std::uint8_t> bits_;
};

// Truncated element of P: an injective prefix p(1), ..., p(k) of a bijection
// of the naturals. No infinite completion is represented; the marker records
// that convention.
enum class PermCompletion { truncated };

class PermPrefix {
 public:
  PermPrefix(std::vector<std::uint64_t> entries, Horizon source_horizon,
             PermCompletion completion = PermCompletion::truncated);

  const std::vector<std::uint64_t>& entries() const { return entries_; }
  Horizon source_horizon() const { return source_horizon_; }
  std::uint64_t length() const { return entries_.size(); }
  std::uint64_t at(std::uint64_t n) const;
  PermCompletion completion() const { return completion_; }

 private:
  std::vector<std::uint64_t> entries_;
  Horizon source_horizon_;
  PermCompletion completion_;
};

// The natural bijection h between S and T: coins flag selected positions.
CoinVector subseq_to_coins(const SubseqPrefix& s, Horizon n);
SubseqPrefix coins_to_subseq(const CoinVector& t);

// Draw from the fair-coin product measure transported to S: N iid fair bits,
// all-zero outcomes resampled (they fall outside T). Pure in (seed, trial, n).
SubseqPrefix sample_lambda(std::uint64_t seed, std::uint64_t trial, Horizon n);

// Uniform permutation of [1..N] by unbiased index-swap shuffle.
// Pure in (seed, trial, n).
PermPrefix sample_perm(std::uint64_t seed, std::uint64_t trial, Horizon n);

}  // namespace iclab
