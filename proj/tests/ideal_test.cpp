#include <doctest.h>

#include <sstream>

#include "iclab/ideal.hpp"
#include "iclab/serialize.hpp"

using namespace iclab;

namespace {

// Counting oracle: walks the whole set per checkpoint instead of bisecting.
std::uint64_t naive_count_leq(const IndexSet& a, std::uint64_t n) {
  std::uint64_t c = 0;
  for (auto e : a.elements())
    if (e <= n) ++c;
  return c;
}

// Containment oracle: per interval, test every point.
std::uint64_t naive_check_witness(const IntervalWitness& w, const IndexSet& a) {
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i + 1 < w.cutpoints.size(); ++i) {
    bool all = true;
    for (std::uint64_t n = w.cutpoints[i]; n < w.cutpoints[i + 1]; ++n)
      all = all && a.contains(n);
    if (all) ++hits;
  }
  return hits;
}

IndexSet random_set(Horizon h, double p, std::uint64_t salt) {
  return IndexSet::bernoulli(h, p, rng::Stream(0xABCD).child(salt));
}

}  // namespace

TEST_CASE("density_profile: worked values") {
  Horizon h(1000);
  auto evens = IndexSet::evens(h);
  auto prof = density_profile(evens, std::vector<std::uint64_t>{1000});
  CHECK(prof[0].count == 500);
  CHECK(prof[0].ratio() == 0.5);

  IndexSet empty({}, h);
  CHECK(density_profile(empty, std::vector<std::uint64_t>{10, 1000})[1].count == 0);

  auto squares = IndexSet::squares(Horizon(10000));
  auto sp = density_profile(squares, std::vector<std::uint64_t>{10000});
  CHECK(sp[0].count == 100);  // floor(sqrt(10^4))
  CHECK(sp[0].ratio() == 0.01);

  CHECK_THROWS_AS(density_profile(evens, std::vector<std::uint64_t>{2000}), std::domain_error);
  CHECK_THROWS_AS(density_profile(evens, std::vector<std::uint64_t>{30, 20}), std::domain_error);
}

TEST_CASE("density_profile: matches the naive counting oracle") {
  for (std::uint64_t salt = 0; salt < 12; ++salt) {
    Horizon h(500 + 793 * salt);
    auto a = random_set(h, 0.1 + 0.07 * static_cast<double>(salt), salt);
    std::vector<std::uint64_t> cps{1, h.value() / 3 + 1, h.value()};
    auto prof = density_profile(a, cps);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      REQUIRE(prof[i].count == naive_count_leq(a, cps[i]));
      REQUIRE(prof[i].ratio() >= 0.0);
      REQUIRE(prof[i].ratio() <= 1.0);
    }
  }
}

TEST_CASE("density: subadditivity of prefix counts") {
  Horizon h(4096);
  auto a = random_set(h, 0.3, 101);
  auto b = random_set(h, 0.2, 202);
  std::vector<std::uint64_t> merged;
  std::set_union(a.elements().begin(), a.elements().end(), b.elements().begin(),
                 b.elements().end(), std::back_inserter(merged));
  IndexSet ab(std::move(merged), h);
  for (std::uint64_t cp : {7ull, 512ull, 4096ull}) {
    CHECK(ab.count_leq(cp) <= a.count_leq(cp) + b.count_leq(cp));
  }
}

TEST_CASE("membership: worked verdicts") {
  auto fin = IdealSpec::fin();
  auto density = IdealSpec::density();
  Horizon h(100000);

  CHECK(membership(fin, IndexSet({1, 2, 3}, h)).tag == MembershipTag::member);
  CHECK(membership(density, IndexSet::evens(h)).tag == MembershipTag::non_member);
  CHECK(membership(density, IndexSet::squares(h)).tag == MembershipTag::member);
  CHECK(membership(fin, IndexSet::squares(h)).tag == MembershipTag::non_member);
  // one straggler in the fin window stays undecided
  CHECK(membership(fin, IndexSet({50000}, h)).tag == MembershipTag::undecided);
  // empty set is a member of both
  CHECK(membership(fin, IndexSet({}, h)).tag == MembershipTag::member);
  CHECK(membership(density, IndexSet({}, h)).tag == MembershipTag::member);
}

TEST_CASE("membership: custom oracle is consulted") {
  auto oracle = [](const IndexSet& a) {
    MembershipVerdict v;
    v.tag = a.size() % 2 == 0 ? MembershipTag::member : MembershipTag::non_member;
    return v;
  };
  auto ideal = IdealSpec::custom("parity", oracle);
  CHECK(membership(ideal, IndexSet({1, 2}, Horizon(10))).tag == MembershipTag::member);
  CHECK(membership(ideal, IndexSet({1}, Horizon(10))).tag == MembershipTag::non_member);
}

TEST_CASE("membership: fin member implies density member") {
  auto fin = IdealSpec::fin();
  auto density = IdealSpec::density();
  for (std::uint64_t salt = 0; salt < 24; ++salt) {
    Horizon h(1024 + 997 * salt);
    // adversarial shape: dense initial segment, nothing in the tail
    std::uint64_t head = (salt % 5 + 1) * h.value() / 50;
    auto seg = IndexSet::range(1, head + 1, h);
    if (membership(fin, seg).tag == MembershipTag::member)
      REQUIRE(membership(density, seg).tag == MembershipTag::member);
    auto rnd = random_set(h, 0.02 + 0.03 * (salt % 4), salt + 77);
    if (membership(fin, rnd).tag == MembershipTag::member)
      REQUIRE(membership(density, rnd).tag == MembershipTag::member);
  }
}

TEST_CASE("interval_witness: rules per ideal") {
  auto w = interval_witness(IdealSpec::density(), 5);
  CHECK(w.cutpoints == std::vector<std::uint64_t>{2, 4, 8, 16, 32});
  auto wf = interval_witness(IdealSpec::fin(), 3);
  CHECK(wf.cutpoints == std::vector<std::uint64_t>{2, 3, 4});
  auto oracle = [](const IndexSet&) { return MembershipVerdict{}; };
  CHECK_THROWS_AS(interval_witness(IdealSpec::custom("x", oracle), 3), unsupported_error);
}

TEST_CASE("check_witness: worked counts") {
  Horizon h(16);
  IntervalWitness w{{2, 4, 8, 16}, ""};
  std::vector<std::uint64_t> two_blocks;
  for (std::uint64_t n = 2; n < 4; ++n) two_blocks.push_back(n);
  for (std::uint64_t n = 8; n < 16; ++n) two_blocks.push_back(n);
  CHECK(check_witness(w, IndexSet(two_blocks, h)) == 2);
  CHECK(check_witness(w, IndexSet::squares(h)) == 0);
  CHECK(check_witness(w, IndexSet::range(1, 17, h)) == 3);
}

TEST_CASE("check_witness: matches the brute containment oracle") {
  for (std::uint64_t salt = 0; salt < 16; ++salt) {
    Horizon h(2000 + 499 * salt);
    auto a = random_set(h, 0.65, salt + 9);
    auto w = interval_witness(IdealSpec::density(), 9);
    REQUIRE(check_witness(w, a) == naive_check_witness(w, a));
    auto wf = interval_witness(IdealSpec::fin(), 64);
    REQUIRE(check_witness(wf, a) == naive_check_witness(wf, a));
  }
}

TEST_CASE("image_set: worked examples and properties") {
  // map s(n) = 2n as the evens prefix
  Horizon big(20000);
  auto doubling = IndexSet::evens(big);
  SubseqPrefix map(doubling.elements(), big);

  auto img = image_set(map, IndexSet({1, 2, 3}, Horizon(10000)));
  CHECK(img.elements() == std::vector<std::uint64_t>{2, 4, 6});

  auto id = SubseqPrefix::identity(Horizon(512));
  auto a = random_set(Horizon(512), 0.4, 5);
  CHECK(image_set(id, a).elements() == a.elements());

  auto squares = IndexSet::squares(Horizon(10000));
  auto img_sq = image_set(map, squares);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t k = 1; k * k <= 10000; ++k) expect.push_back(2 * k * k);
  CHECK(img_sq.elements() == expect);

  // monotone: subset maps to subset
  auto sub = IndexSet({4, 16, 256}, Horizon(10000));
  auto img_sub = image_set(map, sub);
  for (auto e : img_sub.elements()) REQUIRE(img_sq.contains(e));

  CHECK_THROWS_AS(image_set(SubseqPrefix({2, 4}, Horizon(8)), IndexSet({3}, Horizon(8))),
                  std::domain_error);
}

TEST_CASE("is_invariant_sample: identity and doubling act invariantly") {
  Horizon h(65536);
  auto battery = standard_battery(h, rng::Stream(404));
  auto id = SubseqPrefix::identity(h);
  CHECK(is_invariant_sample(id, IdealSpec::density(), battery).tag == InvarianceTag::invariant);

  Horizon big(131072);
  SubseqPrefix doubling(IndexSet::evens(big).elements(), big);
  std::vector<NamedSet> half_battery = standard_battery(h, rng::Stream(404));
  CHECK(is_invariant_sample(doubling, IdealSpec::density(), half_battery).tag ==
        InvarianceTag::invariant);
}

TEST_CASE("is_invariant_sample: dense/sparse alternation is caught") {
  // s(2k-1) = (k+1)^2 - 1, s(2k) = (k+1)^2: evens (positive density) land on
  // squares (density zero)
  std::uint64_t L = 4096;
  std::vector<std::uint64_t> entries;
  for (std::uint64_t k = 1; k <= L / 2; ++k) {
    entries.push_back((k + 1) * (k + 1) - 1);
    entries.push_back((k + 1) * (k + 1));
  }
  Horizon big(entries.back() + 1);
  SubseqPrefix map(entries, big);
  std::vector<NamedSet> battery{{"evens", IndexSet::evens(Horizon(L))}};
  auto v = is_invariant_sample(map, IdealSpec::density(), battery);
  CHECK(v.tag == InvarianceTag::not_invariant);
  CHECK(v.families[0].set_tag == MembershipTag::non_member);
  CHECK(v.families[0].image_tag == MembershipTag::member);
}

TEST_CASE("is_invariant_sample: undecidable family keeps the verdict open") {
  // a set pinned between the two thresholds on one side of the pair only
  Horizon h(8192);
  auto id = SubseqPrefix::identity(h);
  auto oracle = [](const IndexSet& a) {
    MembershipVerdict v;
    v.tag = a.size() > 4000 ? MembershipTag::undecided : MembershipTag::member;
    return v;
  };
  auto ideal = IdealSpec::custom("adversarial", oracle);
  std::vector<NamedSet> battery{{"evens", IndexSet::evens(h)},
                                {"squares", IndexSet::squares(h)}};
  auto v = is_invariant_sample(id, ideal, battery);
  // identity pairs always tag-equal, even when undecided
  CHECK(v.tag == InvarianceTag::invariant);
}

TEST_CASE("index set text formats round trip") {
  Horizon h(9999);
  auto a = random_set(h, 0.2, 3);
  for (bool runs : {false, true}) {
    std::ostringstream out;
    write_index_set(out, a, runs);
    std::istringstream in(out.str());
    auto back = read_index_set(in);
    REQUIRE(back.elements() == a.elements());
    REQUIRE(back.horizon() == a.horizon());
  }
  // run format actually emits runs for a block
  std::ostringstream out;
  write_index_set(out, IndexSet::range(5, 10, Horizon(20)), true);
  CHECK(out.str().find("5..9") != std::string::npos);
}

TEST_CASE("decision params are validated") {
  DecisionParams p;
  p.tau_in = {1, 4};
  p.tau_out = {1, 5};
  CHECK_THROWS_AS(IdealSpec::density(p), std::invalid_argument);
  DecisionParams q;
  q.tail_window = {0, 2};
  CHECK_THROWS_AS(IdealSpec::fin(q), std::invalid_argument);
}
