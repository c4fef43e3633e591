#include "iclab/ideal.hpp"

#include <algorithm>

namespace iclab {

namespace {

void validate_params(const DecisionParams& p) {
  if (!frac_in_unit_interval(p.tail_window) || !frac_in_unit_interval(p.tau_in) ||
      !frac_in_unit_interval(p.tau_out) || !frac_in_unit_interval(p.fin_guard))
    throw std::invalid_argument("DecisionParams: thresholds must lie in (0,1)");
  if (!frac_less(p.tau_in, p.tau_out))
    throw std::invalid_argument("DecisionParams: need tau_in < tau_out");
}

// count/n <= f
bool ratio_leq(std::uint64_t count, std::uint64_t n, Fraction f) {
  return static_cast<unsigned __int128>(count) * f.den <=
         static_cast<unsigned __int128>(f.num) * n;
}

// count/n >= f
bool ratio_geq(std::uint64_t count, std::uint64_t n, Fraction f) {
  return static_cast<unsigned __int128>(count) * f.den >=
         static_cast<unsigned __int128>(f.num) * n;
}

// c2/n2 <= c1/n1
bool ratio_nonincreasing(std::uint64_t c1, std::uint64_t n1, std::uint64_t c2, std::uint64_t n2) {
  return static_cast<unsigned __int128>(c2) * n1 <= static_cast<unsigned __int128>(c1) * n2;
}

}  // namespace

IdealSpec::IdealSpec(IdealKind kind, DecisionParams params, std::string name,
                     MembershipOracle oracle)
    : kind_(kind), params_(params), name_(std::move(name)), oracle_(std::move(oracle)) {}

IdealSpec IdealSpec::fin(DecisionParams params) {
  validate_params(params);
  return IdealSpec(IdealKind::fin, params, "fin", nullptr);
}

IdealSpec IdealSpec::density(DecisionParams params) {
  validate_params(params);
  return IdealSpec(IdealKind::density, params, "density", nullptr);
}

IdealSpec IdealSpec::custom(std::string name, MembershipOracle oracle) {
  if (!oracle) throw std::invalid_argument("IdealSpec::custom: null oracle");
  return IdealSpec(IdealKind::custom, DecisionParams{}, std::move(name), std::move(oracle));
}

std::vector<DensityPoint> density_profile(const IndexSet& a,
                                          std::span<const std::uint64_t> checkpoints) {
  std::vector<DensityPoint> out;
  out.reserve(checkpoints.size());
  std::uint64_t prev = 0;
  for (auto n : checkpoints) {
    if (n < 1 || n > a.horizon().value())
      throw std::domain_error("density_profile: checkpoint exceeds horizon");
    if (n <= prev) throw std::domain_error("density_profile: checkpoints must increase");
    prev = n;
    out.push_back({n, a.count_leq(n)});
  }
  return out;
}

std::vector<std::uint64_t> decision_positions(const IdealSpec& ideal, Horizon n) {
  const std::uint64_t N = n.value();
  switch (ideal.kind()) {
    case IdealKind::density: {
      std::uint64_t start = std::max<std::uint64_t>(1, frac_ceil_mul(ideal.params().tail_window, N));
      std::vector<std::uint64_t> cps{start};
      // Interior powers of two, spaced at least 5/4 from both window edges;
      // near-coincident checkpoints make counting profiles locally
      // non-monotone and would poison the non-increasing test.
      for (std::uint64_t p = 2; p < N; p <<= 1)
        if (p > start && 4 * p >= 5 * start && 5 * p <= 4 * N) cps.push_back(p);
      if (cps.back() != N) cps.push_back(N);
      return cps;
    }
    case IdealKind::fin: {
      std::uint64_t start = std::max<std::uint64_t>(1, frac_ceil_mul(ideal.params().fin_guard, N));
      std::vector<std::uint64_t> cps;
      if (start > 1) cps.push_back(start - 1);
      cps.push_back(N);
      return cps;
    }
    case IdealKind::custom:
      return {};
  }
  return {};
}

MembershipVerdict decide_membership(const IdealSpec& ideal, Horizon /*n*/,
                                    std::span<const DensityPoint> counts) {
  MembershipVerdict v;
  v.evidence.assign(counts.begin(), counts.end());
  switch (ideal.kind()) {
    case IdealKind::density: {
      bool small = true, large = true, mono = true;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        small = small && ratio_leq(counts[i].count, counts[i].n, ideal.params().tau_in);
        large = large && ratio_geq(counts[i].count, counts[i].n, ideal.params().tau_out);
        if (i > 0)
          mono = mono && ratio_nonincreasing(counts[i - 1].count, counts[i - 1].n,
                                             counts[i].count, counts[i].n);
      }
      if (small && mono)
        v.tag = MembershipTag::member;
      else if (large)
        v.tag = MembershipTag::non_member;
      else
        v.tag = MembershipTag::undecided;
      return v;
    }
    case IdealKind::fin: {
      // counts = {start-1 (when start > 1), N}; window count by difference
      std::uint64_t inside = counts.back().count - (counts.size() == 2 ? counts.front().count : 0);
      if (inside == 0)
        v.tag = MembershipTag::member;
      else if (inside >= 2)
        v.tag = MembershipTag::non_member;
      else
        v.tag = MembershipTag::undecided;
      return v;
    }
    case IdealKind::custom:
      throw std::logic_error("decide_membership: custom ideals decide on the set");
  }
  return v;
}

MembershipVerdict membership(const IdealSpec& ideal, const IndexSet& a) {
  if (ideal.kind() == IdealKind::custom) return ideal.oracle()(a);
  auto positions = decision_positions(ideal, a.horizon());
  std::vector<DensityPoint> counts;
  counts.reserve(positions.size());
  for (auto p : positions) counts.push_back({p, a.count_leq(p)});
  return decide_membership(ideal, a.horizon(), counts);
}

IntervalWitness interval_witness(const IdealSpec& ideal, std::uint64_t count) {
  if (count < 1) throw std::invalid_argument("interval_witness: count must be >= 1");
  IntervalWitness w;
  switch (ideal.kind()) {
    case IdealKind::density: {
      if (count > 62) throw std::invalid_argument("interval_witness: dyadic cutpoints overflow");
      for (std::uint64_t i = 1; i <= count; ++i) w.cutpoints.push_back(1ull << i);
      w.rule = "n_i = 2^i";
      return w;
    }
    case IdealKind::fin: {
      for (std::uint64_t i = 1; i <= count; ++i) w.cutpoints.push_back(i + 1);
      w.rule = "n_i = i + 1";
      return w;
    }
    case IdealKind::custom:
      throw unsupported_error("interval_witness: no construction for custom oracles");
  }
  return w;
}

std::uint64_t check_witness(const IntervalWitness& witness, const IndexSet& a) {
  const auto& cut = witness.cutpoints;
  if (cut.size() < 2) return 0;
  if (cut.back() > a.horizon().value() + 1)
    throw std::domain_error("check_witness: cutpoints exceed set horizon");
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i + 1 < cut.size(); ++i)
    if (a.contains_range(cut[i], cut[i + 1])) ++hits;
  return hits;
}

namespace {

template <typename Map>
IndexSet image_impl(const Map& map, const IndexSet& a) {
  std::vector<std::uint64_t> img;
  img.reserve(a.size());
  for (auto e : a.elements()) {
    if (e > map.length())
      throw std::domain_error("image_set: element outside the map's enumerated prefix");
    std::uint64_t v = map.at(e);
    if (v <= map.source_horizon().value()) img.push_back(v);
  }
  std::sort(img.begin(), img.end());
  return IndexSet(std::move(img), map.source_horizon());
}

}  // namespace

IndexSet image_set(const SubseqPrefix& map, const IndexSet& a) { return image_impl(map, a); }
IndexSet image_set(const PermPrefix& map, const IndexSet& a) { return image_impl(map, a); }

std::vector<NamedSet> standard_battery(Horizon h, rng::Stream stream) {
  std::vector<NamedSet> battery;
  battery.push_back({"evens", IndexSet::evens(h)});
  battery.push_back({"odds", IndexSet::odds(h)});
  battery.push_back({"squares", IndexSet::squares(h)});
  battery.push_back({"log-spaced", IndexSet::log_spaced(h)});
  battery.push_back({"geometric-blocks", IndexSet::geometric_blocks(h)});
  battery.push_back({"bernoulli-0.01", IndexSet::bernoulli(h, 0.01, stream.child(1))});
  battery.push_back({"bernoulli-0.5", IndexSet::bernoulli(h, 0.5, stream.child(2))});
  return battery;
}

InvarianceVerdict is_invariant_sample(const SubseqPrefix& map, const IdealSpec& ideal,
                                      std::span<const NamedSet> families) {
  if (families.empty()) throw std::invalid_argument("is_invariant_sample: empty battery");
  InvarianceVerdict out;
  bool disagreement = false, mixed = false;
  for (const auto& fam : families) {
    MembershipVerdict va = membership(ideal, fam.set);
    MembershipVerdict vi = membership(ideal, image_set(map, fam.set));
    out.families.push_back({fam.name, va.tag, vi.tag});
    if (va.tag == vi.tag) continue;
    if (va.tag != MembershipTag::undecided && vi.tag != MembershipTag::undecided)
      disagreement = true;
    else
      mixed = true;
  }
  out.tag = disagreement ? InvarianceTag::not_invariant
                         : (mixed ? InvarianceTag::undecided : InvarianceTag::invariant);
  return out;
}

const char* to_string(MembershipTag t) {
  switch (t) {
    case MembershipTag::member: return "member";
    case MembershipTag::non_member: return "non-member";
    case MembershipTag::undecided: return "undecided";
  }
  return "?";
}

const char* to_string(InvarianceTag t) {
  switch (t) {
    case InvarianceTag::invariant: return "invariant";
    case InvarianceTag::not_invariant: return "not-invariant";
    case InvarianceTag::undecided: return "undecided";
  }
  return "?";
}

}  // namespace iclab
