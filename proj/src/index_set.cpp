#include "iclab/index_set.hpp"

#include <algorithm>
#include <cmath>

namespace iclab {

IndexSet::IndexSet(std::vector<std::uint64_t> elements, Horizon horizon)
    : elements_(std::move(elements)), horizon_(horizon) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 1 || elements_[i] > horizon_.value())
      throw std::invalid_argument("IndexSet: element outside [1, horizon]");
    if (i > 0 && elements_[i] <= elements_[i - 1])
      throw std::invalid_argument("IndexSet: elements must be strictly increasing");
  }
}

std::uint64_t IndexSet::count_leq(std::uint64_t n) const {
  return static_cast<std::uint64_t>(
      std::upper_bound(elements_.begin(), elements_.end(), n) - elements_.begin());
}

std::uint64_t IndexSet::count_range(std::uint64_t lo, std::uint64_t hi) const {
  if (hi <= lo) return 0;
  return count_leq(hi - 1) - (lo > 1 ? count_leq(lo - 1) : 0);
}

bool IndexSet::contains_range(std::uint64_t lo, std::uint64_t hi) const {
  if (hi <= lo) return true;
  return count_range(lo, hi) == hi - lo;
}

bool IndexSet::contains(std::uint64_t n) const {
  return std::binary_search(elements_.begin(), elements_.end(), n);
}

IndexSet IndexSet::range(std::uint64_t lo, std::uint64_t hi, Horizon h) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 1); n < hi && n <= h.value(); ++n)
    e.push_back(n);
  return IndexSet(std::move(e), h);
}

IndexSet IndexSet::evens(Horizon h) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = 2; n <= h.value(); n += 2) e.push_back(n);
  return IndexSet(std::move(e), h);
}

IndexSet IndexSet::odds(Horizon h) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = 1; n <= h.value(); n += 2) e.push_back(n);
  return IndexSet(std::move(e), h);
}

IndexSet IndexSet::squares(Horizon h) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t k = 1; k * k <= h.value(); ++k) e.push_back(k * k);
  return IndexSet(std::move(e), h);
}

IndexSet IndexSet::log_spaced(Horizon h) {
  std::vector<std::uint64_t> e;
  std::uint64_t a = 2, k = 1;
  while (a <= h.value()) {
    e.push_back(a);
    double gap = std::floor(static_cast<double>(k) * std::log(static_cast<double>(k)));
    a += std::max<std::uint64_t>(1, static_cast<std::uint64_t>(gap));
    ++k;
  }
  return IndexSet(std::move(e), h);
}

IndexSet IndexSet::geometric_blocks(Horizon h) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t i = 1; i < 32; ++i) {
    std::uint64_t base = 1ull << (2 * i);  // 4^i
    if (base > h.value()) break;
    std::uint64_t len = 1ull << i;  // 2^i
    for (std::uint64_t n = base; n < base + len && n <= h.value(); ++n) e.push_back(n);
  }
  return IndexSet(std::move(e), h);
}

IndexSet IndexSet::bernoulli(Horizon h, double p, rng::Stream stream) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bernoulli: p must be in (0,1)");
  std::vector<std::uint64_t> e;
  rng::Drawer draw(stream);
  for (std::uint64_t n = 1; n <= h.value(); ++n)
    if (draw.unit() < p) e.push_back(n);
  return IndexSet(std::move(e), h);
}

}  // namespace iclab
