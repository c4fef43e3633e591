#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "iclab/common.hpp"
#include "iclab/index_set.hpp"
#include "iclab/selection.hpp"

namespace iclab {

enum class IdealKind { fin, density, custom };
enum class MembershipTag { member, non_member, undecided };

// Exact prefix count of a set at position n; the evidence unit of a verdict.
struct DensityPoint {
  std::uint64_t n = 0;
  std::uint64_t count = 0;
  double ratio() const { return static_cast<double>(count) / static_cast<double>(n); }
};

struct MembershipVerdict {
  MembershipTag tag = MembershipTag::undecided;
  std::vector<DensityPoint> evidence;  // prefix counts at the decision positions
};

// Finite-scale decision parameters. Membership of A in an ideal is an
// infinitary property; these thresholds carve Member / NonMember bands with
// an explicit Undecided gap instead of guessing.
//
//   density rule: checkpoints are ceil(wN), the powers of two strictly
//     inside (ceil(wN), N), and N. Member iff every checkpoint ratio is
//     <= tau_in and the profile is non-increasing across them; NonMember iff
//     every ratio is >= tau_out.
//   fin rule: window [ceil(gN), N]. Member iff the window is empty of A,
//     NonMember iff it holds >= 2 elements, one straggler stays Undecided.
//
// fin_guard = tail_window * tau_in, which makes Fin-Member imply
// Density-Member: a Fin-Member set lives in [1, gN), so its tail ratios are
// below g/w = tau_in and strictly decreasing.
struct DecisionParams {
  Fraction tail_window{1, 2};
  Fraction tau_in{1, 20};
  Fraction tau_out{1, 5};
  Fraction fin_guard{1, 40};
};

using MembershipOracle = std::function<MembershipVerdict(const IndexSet&)>;

class IdealSpec {
 public:
  static IdealSpec fin(DecisionParams params = {});
  static IdealSpec density(DecisionParams params = {});
  static IdealSpec custom(std::string name, MembershipOracle oracle);

  IdealKind kind() const { return kind_; }
  const DecisionParams& params() const { return params_; }
  const std::string& name() const { return name_; }
  const MembershipOracle& oracle() const { return oracle_; }

 private:
  IdealSpec(IdealKind kind, DecisionParams params, std::string name, MembershipOracle oracle);

  IdealKind kind_;
  DecisionParams params_;
  std::string name_;
  MembershipOracle oracle_;
};

// Exact counting profile |A ∩ [1,n]| / n at the given checkpoints.
// Checkpoints must be increasing and within the horizon.
std::vector<DensityPoint> density_profile(const IndexSet& a,
                                          std::span<const std::uint64_t> checkpoints);

// Positions whose prefix counts fully determine membership at this horizon.
// Empty for custom oracles (those decide on the materialized set).
std::vector<std::uint64_t> decision_positions(const IdealSpec& ideal, Horizon n);

// Decide from prefix counts; `counts` must align with decision_positions.
MembershipVerdict decide_membership(const IdealSpec& ideal, Horizon n,
                                    std::span<const DensityPoint> counts);

MembershipVerdict membership(const IdealSpec& ideal, const IndexSet& a);

// Increasing cutpoints n_1 < n_2 < ... such that no member of the ideal can
// contain arbitrarily many intervals [n_i, n_{i+1}). For the density ideal,
// n_i = 2^i: a set containing infinitely many dyadic octaves has upper
// density >= 1/2. For Fin, n_i = i + 1: the intervals are nonempty, so
// containing infinitely many of them forces an infinite set.
struct IntervalWitness {
  std::vector<std::uint64_t> cutpoints;
  std::string rule;
};

IntervalWitness interval_witness(const IdealSpec& ideal, std::uint64_t count);

// Exact number of witness intervals [n_i, n_{i+1}) fully contained in A.
std::uint64_t check_witness(const IntervalWitness& witness, const IndexSet& a);

// Image of A under a selection viewed as a map on indices: {map(n) : n in A}.
// Every element of A must fall inside the map's enumerated prefix.
IndexSet image_set(const SubseqPrefix& map, const IndexSet& a);
IndexSet image_set(const PermPrefix& map, const IndexSet& a);

enum class InvarianceTag { invariant, not_invariant, undecided };

struct NamedSet {
  std::string name;
  IndexSet set;
};

struct FamilyInvariance {
  std::string name;
  MembershipTag set_tag = MembershipTag::undecided;
  MembershipTag image_tag = MembershipTag::undecided;
};

struct InvarianceVerdict {
  InvarianceTag tag = InvarianceTag::undecided;
  std::vector<FamilyInvariance> families;
};

// The fixed battery the sampled-invariance check runs against. Contents are
// part of the public contract: evens, odds, squares, a floor(k ln k)-gap set,
// a geometric block union, and seeded Bernoulli(1/100) and Bernoulli(1/2)
// draws from `stream`.
std::vector<NamedSet> standard_battery(Horizon h, rng::Stream stream);

// Sampled test of "A in I  iff  map[A] in I" over the battery. A family pair
// agrees when the two tags are equal; one decided disagreement is conclusive
// NotInvariant; a mixed decided/undecided pair keeps the verdict Undecided.
InvarianceVerdict is_invariant_sample(const SubseqPrefix& map, const IdealSpec& ideal,
                                      std::span<const NamedSet> families);

const char* to_string(MembershipTag t);
const char* to_string(InvarianceTag t);

}  // namespace iclab
