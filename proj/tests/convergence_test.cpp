#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "iclab/convergence.hpp"
#include "iclab/families.hpp"
#include "iclab/serialize.hpp"

using namespace iclab;

namespace {

PointSeq harmonic(Horizon h) { return sequence_by_name("harmonic", h); }
PointSeq alternating(Horizon h) { return sequence_by_name("alternating", h); }
PointSeq square_indicator(Horizon h) { return sequence_by_name("square-indicator", h); }

}  // namespace

TEST_CASE("i_converges: worked verdicts") {
  auto grid = default_eps_grid();
  Horizon h(131072);

  auto v1 = i_converges(harmonic(h), IdealSpec::fin(), grid);
  CHECK(v1.tag == ConvergenceTag::convergent);
  CHECK(std::fabs(v1.limit[0]) <= grid.back());

  auto v2 = i_converges(alternating(h), IdealSpec::density(), grid);
  CHECK(v2.tag == ConvergenceTag::divergent);

  auto v3 = i_converges(square_indicator(h), IdealSpec::density(), grid);
  CHECK(v3.tag == ConvergenceTag::convergent);
  CHECK(v3.limit[0] == 0.0);

  // under fin, the square indicator keeps both values forever
  CHECK(i_converges(square_indicator(h), IdealSpec::fin(), grid).tag ==
        ConvergenceTag::divergent);

  CHECK_THROWS_AS(i_converges(harmonic(h), IdealSpec::fin(), std::vector<double>{}),
                  config_error);
  CHECK_THROWS_AS(i_converges(harmonic(h), IdealSpec::fin(), std::vector<double>{0.1, 0.2}),
                  config_error);
}

TEST_CASE("i_cauchy: worked verdicts") {
  auto grid = default_eps_grid();
  Horizon h(131072);
  CHECK(i_cauchy(harmonic(h), IdealSpec::fin(), grid).tag == CauchyTag::cauchy);
  CHECK(i_cauchy(alternating(h), IdealSpec::density(), grid).tag == CauchyTag::not_cauchy);
  CHECK(i_cauchy(square_indicator(h), IdealSpec::density(), grid).tag == CauchyTag::cauchy);
}

TEST_CASE("detectors agree on a generated corpus") {
  auto grid = default_eps_grid();
  Horizon h(16384);
  std::uint64_t agreements = 0, comparable = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    rng::Drawer draw(rng::Stream(555).child(i));
    PointSeq x = [&]() -> PointSeq {
      switch (i % 5) {
        case 0: {
          double a = 0.5 + draw.unit(), c = draw.unit() - 0.5;
          return PointSeq::from_formula(Metric::real_abs(), h, [a, c](std::uint64_t n) {
            return c + a / static_cast<double>(n);
          });
        }
        case 1: {
          double a = 0.4 + draw.unit();
          return PointSeq::from_formula(Metric::real_abs(), h, [a](std::uint64_t n) {
            return n % 2 == 0 ? a : -a;
          });
        }
        case 2: {
          auto sparse = IndexSet::bernoulli(h, 0.004, rng::Stream(9000).child(i));
          auto shared = std::make_shared<IndexSet>(std::move(sparse));
          return PointSeq::from_formula(Metric::real_abs(), h, [shared](std::uint64_t n) {
            return shared->contains(n) ? 1.0 : 0.0;
          });
        }
        case 3: {
          double theta = 0.5 + 2.5 * draw.unit();
          return PointSeq::from_formula(Metric::real_abs(), h, [theta](std::uint64_t n) {
            return std::sin(theta * static_cast<double>(n));
          });
        }
        default: {
          double rho = 0.9 + 0.09 * draw.unit(), c = draw.unit();
          return PointSeq::from_formula(Metric::real_abs(), h, [rho, c](std::uint64_t n) {
            return c + std::pow(rho, static_cast<double>(n % 4096));
          });
        }
      }
    }();
    // geometric decay family restarts every 4096 steps; treat index mod as tail noise
    auto ideal = i % 2 == 0 ? IdealSpec::density() : IdealSpec::fin();
    auto conv = i_converges(x, ideal, grid);
    auto cauchy = i_cauchy(x, ideal, grid);
    if (conv.tag == ConvergenceTag::undecided || cauchy.tag == CauchyTag::undecided) continue;
    ++comparable;
    bool agree = (conv.tag == ConvergenceTag::convergent && cauchy.tag == CauchyTag::cauchy) ||
                 (conv.tag == ConvergenceTag::divergent && cauchy.tag == CauchyTag::not_cauchy);
    if (agree) ++agreements;
  }
  CHECK(comparable >= 15);
  CHECK(agreements == comparable);
}

TEST_CASE("classical convergence transfers to the density ideal") {
  auto grid = default_eps_grid();
  Horizon h(32768);
  for (std::uint64_t i = 0; i < 8; ++i) {
    double c = 0.25 * static_cast<double>(i) - 1.0;
    auto x = PointSeq::from_formula(Metric::real_abs(), h, [c, i](std::uint64_t n) {
      return c + 2.0 / static_cast<double>(n + i);
    });
    auto fin_v = i_converges(x, IdealSpec::fin(), grid);
    REQUIRE(fin_v.tag == ConvergenceTag::convergent);
    auto dens_v = i_converges(x, IdealSpec::density(), grid);
    REQUIRE(dens_v.tag == ConvergenceTag::convergent);
    REQUIRE(std::fabs(fin_v.limit[0] - dens_v.limit[0]) <= grid.back());
  }
}

TEST_CASE("translation equivariance on exact-valued sequences") {
  auto grid = default_eps_grid();
  Horizon h(16384);
  for (double c : {1.5, -2.25, 0.125}) {
    auto base = square_indicator(h);
    auto shifted = PointSeq::from_formula(Metric::real_abs(), h, [c](std::uint64_t n) {
      std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
      while (r * r > n) --r;
      while ((r + 1) * (r + 1) <= n) ++r;
      return (r * r == n ? 1.0 : 0.0) + c;
    });
    auto v0 = i_converges(base, IdealSpec::density(), grid);
    auto v1 = i_converges(shifted, IdealSpec::density(), grid);
    REQUIRE(v0.tag == v1.tag);
    REQUIRE(v1.limit[0] == v0.limit[0] + c);

    auto a0 = i_converges(alternating(h), IdealSpec::density(), grid);
    auto a1 = i_converges(
        PointSeq::from_formula(Metric::real_abs(), h,
                               [c](std::uint64_t n) { return (n % 2 == 0 ? 1.0 : -1.0) + c; }),
        IdealSpec::density(), grid);
    REQUIRE(a0.tag == a1.tag);
  }
}

TEST_CASE("witness_pair: alternating splits into evens and odds") {
  auto pair = witness_pair(alternating(Horizon(128)));
  REQUIRE(pair.has_value());
  CHECK(pair->center == std::vector<double>{1.0});
  CHECK(pair->radius == 1.0);
  CHECK(pair->u.entries() == IndexSet::evens(Horizon(128)).elements());
  CHECK(pair->v.entries() == IndexSet::odds(Horizon(128)).elements());
  CHECK(witness_pair_valid(*pair, alternating(Horizon(128))));
}

TEST_CASE("witness_pair: absent for convergent or escaping sequences") {
  CHECK_FALSE(witness_pair(harmonic(Horizon(100000))).has_value());
  auto escaping = PointSeq::from_formula(Metric::real_abs(), Horizon(4096),
                                         [](std::uint64_t n) { return static_cast<double>(n); });
  CHECK_FALSE(witness_pair(escaping).has_value());
  CHECK_THROWS_AS(witness_pair(alternating(Horizon(32))), std::invalid_argument);
}

TEST_CASE("witness_pair: sparse far set is still witnessed") {
  auto tw = FunctionFamily::typewriter().slice(0.4123, Horizon(65536));
  auto pair = witness_pair(tw);
  REQUIRE(pair.has_value());
  CHECK(pair->center == std::vector<double>{0.0});
  CHECK(pair->v.length() >= 2);
  CHECK(pair->v.length() < 64);
  CHECK(pair->u.length() >= 65536 / 8);
  CHECK(witness_pair_valid(*pair, tw));
}

TEST_CASE("indicator_sequence: worked bit patterns") {
  Horizon h(64);
  auto id = SubseqPrefix::identity(h);
  auto bits = indicator_sequence(alternating(h), id, 2, 1);
  for (std::uint64_t j = 1; j <= 64; ++j) REQUIRE(bits.bit(j) == (j % 2 == 1));

  // the anchor position always reads zero
  auto bits2 = indicator_sequence(harmonic(h), id, 17, 3);
  CHECK_FALSE(bits2.bit(17));

  auto constant = PointSeq::from_formula(Metric::real_abs(), h, [](std::uint64_t) { return 2.5; });
  CHECK(indicator_sequence(constant, id, 5, 7).ones() == 0);

  CHECK_THROWS_AS(indicator_sequence(harmonic(h), id, 65, 1), std::domain_error);
}

TEST_CASE("indicator_sequence: bits only turn on as k grows") {
  Horizon h(512);
  auto id = SubseqPrefix::identity(h);
  auto x = harmonic(h);
  CoinVector prev = indicator_sequence(x, id, 100, 1);
  for (std::uint64_t k = 2; k <= 64; k *= 2) {
    CoinVector cur = indicator_sequence(x, id, 100, k);
    for (std::uint64_t j = 1; j <= 512; ++j)
      if (prev.bit(j)) REQUIRE(cur.bit(j));
    prev = cur;
  }
}

TEST_CASE("point sequences load from csv") {
  const char* path = "seq_test_tmp.csv";
  {
    std::ofstream out(path);
    out << "index,value\n";
    for (int n = 1; n <= 300; ++n) out << n << "," << (n % 2 == 0 ? 1.0 : -1.0) << "\n";
  }
  auto x = read_point_seq_csv(path);
  CHECK(x.horizon().value() == 300);
  CHECK(x.scalar(2) == 1.0);
  CHECK(x.scalar(3) == -1.0);
  std::remove(path);

  {
    std::ofstream out(path);
    out << "1,0.5,1.5\n2,0.25,1.25\n3,0.1,1.1\n";
  }
  auto e = read_point_seq_csv(path);
  CHECK(e.metric().kind() == MetricKind::euclid);
  CHECK(e.metric().dim() == 2);
  std::remove(path);

  {
    std::ofstream out(path);
    out << "1,0.5\n3,0.25\n";  // gap
  }
  CHECK_THROWS_AS(read_point_seq_csv(path), config_error);
  std::remove(path);
}

TEST_CASE("euclidean and discrete metrics behave") {
  Horizon h(16384);
  // spiral shrinking to (1, -1)
  std::vector<double> flat;
  for (std::uint64_t n = 1; n <= h.value(); ++n) {
    double r = 1.0 / static_cast<double>(n);
    flat.push_back(1.0 + r * std::cos(0.7 * static_cast<double>(n)));
    flat.push_back(-1.0 + r * std::sin(0.7 * static_cast<double>(n)));
  }
  auto spiral = PointSeq::from_vector_values(Metric::euclid(2), std::move(flat), 2);
  auto grid = default_eps_grid();
  auto v = i_converges(spiral, IdealSpec::fin(), grid);
  REQUIRE(v.tag == ConvergenceTag::convergent);
  CHECK(std::fabs(v.limit[0] - 1.0) < 0.01);
  CHECK(std::fabs(v.limit[1] + 1.0) < 0.01);

  auto flip = PointSeq::from_formula(Metric::discrete(), h,
                                     [](std::uint64_t n) { return n % 2 == 0 ? 1.0 : 2.0; });
  CHECK(i_converges(flip, IdealSpec::density(), grid).tag == ConvergenceTag::divergent);
}

TEST_CASE("non-finite payloads are rejected") {
  auto bad = PointSeq::from_formula(Metric::real_abs(), Horizon(128), [](std::uint64_t n) {
    return n == 64 ? std::nan("") : 0.0;
  });
  CHECK_THROWS_AS(i_converges(bad, IdealSpec::fin(), default_eps_grid()), std::domain_error);
  CHECK_THROWS_AS(
      PointSeq::from_values(Metric::real_abs(), std::vector<double>{1.0, INFINITY}),
      std::domain_error);
}
