#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "iclab/rng.hpp"
#include "iclab/selection.hpp"
#include "iclab/serialize.hpp"

using namespace iclab;

TEST_CASE("rng: frozen splitmix64 counter-mode vectors") {
  // Counter mode must equal the sequential splitmix64 reference outputs.
  CHECK(rng::Stream(0).block(0) == 0xe220a8397b1dcdafULL);
  CHECK(rng::Stream(0).block(1) == 0x6e789e6aa1b965f4ULL);
  CHECK(rng::Stream(0).block(2) == 0x06c45d188009454fULL);
  CHECK(rng::Stream(42).block(0) == 0xbdd732262feb6e95ULL);
  CHECK(rng::Stream(42).child(7).key() == 0xd0ca4ba1febe3956ULL);
  CHECK(rng::Stream(42).child(7).block(3) == 0x975a0ceaaebb327eULL);
  rng::Drawer d(rng::Stream(123));
  CHECK(d.below(52) == 15);
  CHECK(d.below(52) == 48);
  rng::Drawer u(rng::Stream(123));
  CHECK(u.unit() == doctest::Approx(0.70649122176370671).epsilon(1e-15));
}

TEST_CASE("h: coins from subsequence entries") {
  SubseqPrefix s({2, 3}, Horizon(4));
  auto t = subseq_to_coins(s, Horizon(4));
  CHECK(t.bits() == std::vector<std::uint8_t>{0, 1, 1, 0});

  SubseqPrefix s2({1, 3, 5}, Horizon(5));
  CHECK(subseq_to_coins(s2, Horizon(5)).bits() == std::vector<std::uint8_t>{1, 0, 1, 0, 1});

  auto id = SubseqPrefix::identity(Horizon(6));
  CHECK(subseq_to_coins(id, Horizon(6)).ones() == 6);

  CHECK_THROWS_AS(subseq_to_coins(s2, Horizon(4)), std::domain_error);
}

TEST_CASE("h: subsequence from coins") {
  CoinVector t({1, 0, 1, 0, 1});
  CHECK(coins_to_subseq(t).entries() == std::vector<std::uint64_t>{1, 3, 5});
  CHECK(coins_to_subseq(CoinVector({1, 1, 1, 1})).entries() ==
        std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK_THROWS_AS(coins_to_subseq(CoinVector({0, 0, 0, 0})), std::domain_error);
}

TEST_CASE("h: exhaustive round trip at length 16") {
  for (std::uint32_t mask = 1; mask < (1u << 16); ++mask) {
    std::vector<std::uint8_t> bits(16);
    for (int j = 0; j < 16; ++j) bits[j] = (mask >> j) & 1;
    CoinVector t(bits);
    auto s = coins_to_subseq(t);
    auto back = subseq_to_coins(s, Horizon(16));
    REQUIRE(back.bits() == t.bits());
  }
}

TEST_CASE("h: randomized round trip at horizon 1e5") {
  const Horizon h(100000);
  for (std::uint64_t trial = 0; trial < 32; ++trial) {
    auto s = sample_lambda(7, trial, h);
    auto t = subseq_to_coins(s, h);
    auto back = coins_to_subseq(t);
    REQUIRE(back.entries() == s.entries());
    REQUIRE(subseq_to_coins(back, h).bits() == t.bits());
  }
}

TEST_CASE("sample_lambda: determinism and trial independence") {
  const Horizon h(100000);
  auto a = sample_lambda(99, 5, h);
  auto b = sample_lambda(99, 5, h);
  CHECK(a.entries() == b.entries());
  auto c = sample_lambda(99, 6, h);
  CHECK(a.entries() != c.entries());

  double frac = static_cast<double>(a.length()) / 100000.0;
  CHECK(frac > 0.495);
  CHECK(frac < 0.505);
}

TEST_CASE("sample_lambda: per-bit marginals over many trials") {
  const Horizon h(256);
  const std::uint64_t trials = 10000;
  std::vector<std::uint64_t> hits(256, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto s = sample_lambda(2025, t, h);
    for (auto e : s.entries()) ++hits[e - 1];
  }
  const double band = 3.0 / (2.0 * std::sqrt(static_cast<double>(trials)));
  for (int j = 0; j < 256; ++j) {
    double freq = static_cast<double>(hits[j]) / static_cast<double>(trials);
    REQUIRE(freq > 0.5 - band);
    REQUIRE(freq < 0.5 + band);
  }
}

TEST_CASE("sample_perm: uniformity over S_3") {
  std::map<std::vector<std::uint64_t>, int> counts;
  for (std::uint64_t t = 0; t < 6000; ++t) counts[sample_perm(31337, t, Horizon(3)).entries()]++;
  CHECK(counts.size() == 6);
  for (auto& [perm, c] : counts) {
    CHECK(c > 880);   // 1000 +- 120, multinomial 3 sigma
    CHECK(c < 1120);
  }
}

TEST_CASE("sample_perm: injectivity and determinism") {
  auto p = sample_perm(5, 17, Horizon(1000));
  std::vector<std::uint64_t> sorted = p.entries();
  std::sort(sorted.begin(), sorted.end());
  for (std::uint64_t i = 0; i < 1000; ++i) REQUIRE(sorted[i] == i + 1);
  CHECK(sample_perm(5, 17, Horizon(1000)).entries() == p.entries());
}

TEST_CASE("coin vector hex serialization round trip") {
  for (std::uint64_t trial = 0; trial < 16; ++trial) {
    auto s = sample_lambda(3, trial, Horizon(77));
    auto t = subseq_to_coins(s, Horizon(77));
    std::ostringstream out;
    write_coin_vector(out, t);
    std::istringstream in(out.str());
    REQUIRE(read_coin_vector(in).bits() == t.bits());
  }
  // tampered padding is rejected
  std::istringstream bad("len=4 hex=f8");
  CHECK_THROWS_AS(read_coin_vector(bad), std::domain_error);
}

TEST_CASE("subseq and perm file round trip") {
  auto s = sample_lambda(11, 0, Horizon(500));
  std::ostringstream out;
  write_subseq(out, s);
  std::istringstream in(out.str());
  auto back = read_subseq(in);
  CHECK(back.entries() == s.entries());
  CHECK(back.source_horizon() == s.source_horizon());

  auto p = sample_perm(11, 0, Horizon(64));
  std::ostringstream pout;
  write_perm(pout, p);
  std::istringstream pin(pout.str());
  CHECK(read_perm(pin).entries() == p.entries());
}

TEST_CASE("prefix invariants are enforced") {
  CHECK_THROWS_AS(SubseqPrefix({3, 3}, Horizon(5)), std::invalid_argument);
  CHECK_THROWS_AS(SubseqPrefix({0, 2}, Horizon(5)), std::invalid_argument);
  CHECK_THROWS_AS(SubseqPrefix({2, 9}, Horizon(5)), std::invalid_argument);
  CHECK_THROWS_AS(PermPrefix({2, 2}, Horizon(5)), std::invalid_argument);
  CHECK_THROWS_AS(Horizon(1), std::invalid_argument);
}
