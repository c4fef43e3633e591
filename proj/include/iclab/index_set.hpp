#pragma once

#include <cstdint>
#include <vector>

#include "iclab/common.hpp"
#include "iclab/rng.hpp"

namespace iclab {

// Finite stand-in for a set A of naturals, truncated to [1, horizon].
// Elements are strictly increasing; counting queries are O(log |A|).
class IndexSet {
 public:
  IndexSet(std::vector<std::uint64_t> elements, Horizon horizon);

  const std::vector<std::uint64_t>& elements() const { return elements_; }
  Horizon horizon() const { return horizon_; }
  std::uint64_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  // |A ∩ [1, n]|
  std::uint64_t count_leq(std::uint64_t n) const;
  // |A ∩ [lo, hi)|
  std::uint64_t count_range(std::uint64_t lo, std::uint64_t hi) const;
  // [lo, hi) ⊆ A
  bool contains_range(std::uint64_t lo, std::uint64_t hi) const;
  bool contains(std::uint64_t n) const;

  static IndexSet range(std::uint64_t lo, std::uint64_t hi, Horizon h);  // [lo, hi)
  static IndexSet evens(Horizon h);
  static IndexSet odds(Horizon h);
  static IndexSet squares(Horizon h);
  // a_1 = 2, a_{k+1} = a_k + max(1, floor(k ln k)); density -> 0
  static IndexSet log_spaced(Horizon h);
  // union of blocks [4^i, 4^i + 2^i), i >= 1
  static IndexSet geometric_blocks(Horizon h);
  static IndexSet bernoulli(Horizon h, double p, rng::Stream stream);

 private:
  std::vector<std::uint64_t> elements_;
  Horizon horizon_;
};

}  // namespace iclab
