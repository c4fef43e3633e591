#include "iclab/selection.hpp"

#include <numeric>

namespace iclab {

SubseqPrefix::SubseqPrefix(std::vector<std::uint64_t> entries, Horizon source_horizon)
    : entries_(std::move(entries)), source_horizon_(source_horizon) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 1 || entries_[i] > source_horizon_.value())
      throw std::invalid_argument("SubseqPrefix: entry outside [1, horizon]");
    if (i > 0 && entries_[i] <= entries_[i - 1])
      throw std::invalid_argument("SubseqPrefix: entries must be strictly increasing");
  }
}

std::uint64_t SubseqPrefix::at(std::uint64_t n) const {
  if (n < 1 || n > entries_.size())
    throw std::domain_error("SubseqPrefix: index outside enumerated prefix");
  return entries_[n - 1];
}

SubseqPrefix SubseqPrefix::identity(Horizon h) {
  std::vector<std::uint64_t> e(h.value());
  std::iota(e.begin(), e.end(), 1);
  return SubseqPrefix(std::move(e), h);
}

CoinVector::CoinVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("CoinVector: empty");
  for (auto b : bits_)
    if (b > 1) throw std::invalid_argument("CoinVector: bits must be 0 or 1");
}

std::uint64_t CoinVector::ones() const {
  std::uint64_t c = 0;
  for (auto b : bits_) c += b;
  return c;
}

CoinVector subseq_to_coins(const SubseqPrefix& s, Horizon n) {
  std::vector<std::uint8_t> bits(n.value(), 0);
  for (auto e : s.entries()) {
    if (e > n.value()) throw std::domain_error("subseq_to_coins: entry exceeds target length");
    bits[e - 1] = 1;
  }
  return CoinVector(std::move(bits));
}

SubseqPrefix coins_to_subseq(const CoinVector& t) {
  std::vector<std::uint64_t> entries;
  for (std::uint64_t j = 1; j <= t.length(); ++j)
    if (t.bit(j)) entries.push_back(j);
  if (entries.empty())
    throw std::domain_error("coins_to_subseq: all-zero vector is not a selection");
  return SubseqPrefix(std::move(entries), Horizon(t.length()));
}

SubseqPrefix sample_lambda(std::uint64_t seed, std::uint64_t trial, Horizon n) {
  const std::uint64_t N = n.value();
  const std::uint64_t blocks = (N + 63) / 64;
  rng::Stream st = rng::Stream(seed).child(rng::kSaltLambda).child(trial);
  // Attempt a uses blocks [a*blocks, (a+1)*blocks); the all-zero draw (outside
  // T) is resampled from the next band.
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::vector<std::uint64_t> entries;
    entries.reserve(N / 2 + 64);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      std::uint64_t w = st.block(attempt * blocks + b);
      std::uint64_t base = b * 64;
      std::uint64_t top = std::min<std::uint64_t>(64, N - base);
      for (std::uint64_t i = 0; i < top; ++i)
        if ((w >> i) & 1ull) entries.push_back(base + i + 1);
    }
    if (!entries.empty()) return SubseqPrefix(std::move(entries), n);
  }
}

PermPrefix::PermPrefix(std::vector<std::uint64_t> entries, Horizon source_horizon,
                       PermCompletion completion)
    : entries_(std::move(entries)), source_horizon_(source_horizon), completion_(completion) {
  std::vector<std::uint64_t> sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 1 || sorted[i] > source_horizon_.value())
      throw std::invalid_argument("PermPrefix: entry outside [1, horizon]");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw std::invalid_argument("PermPrefix: entries must be injective");
  }
}

std::uint64_t PermPrefix::at(std::uint64_t n) const {
  if (n < 1 || n > entries_.size())
    throw std::domain_error("PermPrefix: index outside enumerated prefix");
  return entries_[n - 1];
}

PermPrefix sample_perm(std::uint64_t seed, std::uint64_t trial, Horizon n) {
  const std::uint64_t N = n.value();
  std::vector<std::uint64_t> p(N);
  std::iota(p.begin(), p.end(), 1);
  rng::Drawer draw(rng::Stream(seed).child(rng::kSaltPerm).child(trial));
  // Fisher-Yates with unbiased bounded draws.
  for (std::uint64_t i = N - 1; i > 0; --i) {
    std::uint64_t j = draw.below(i + 1);
    std::swap(p[i], p[j]);
  }
  return PermPrefix(std::move(p), n);
}

}  // namespace iclab
