#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iclab/ideal.hpp"
#include "iclab/point_seq.hpp"

namespace iclab {

enum class ConvergenceTag { convergent, divergent, undecided };
enum class CauchyTag { cauchy, not_cauchy, undecided };

// Verdict of one membership query for one epsilon of the grid.
struct EpsEvidence {
  double eps = 0;
  MembershipTag tag = MembershipTag::undecided;
  double min_ratio = 0;  // exceptional-set density extremes over the checkpoints
  double max_ratio = 0;
};

// Evidence for one rejected limit candidate: the epsilon whose exceptional
// set testified against it (or kept it undecided).
struct CandidateEvidence {
  std::vector<double> point;
  EpsEvidence eps;
};

struct ConvergenceVerdict {
  ConvergenceTag tag = ConvergenceTag::undecided;
  std::vector<double> limit;             // set when convergent
  std::vector<EpsEvidence> eps_table;    // per-grid-eps evidence for the limit
  std::vector<CandidateEvidence> rejects;
};

struct CauchyVerdict {
  CauchyTag tag = CauchyTag::undecided;
  std::uint64_t anchor = 0;              // a witnessing anchor index when cauchy
  std::vector<EpsEvidence> eps_table;
};

// (1/2, 1/4, ..., 2^-7)
std::vector<double> default_eps_grid();
std::vector<double> eps_grid_down_to(double eps_min);

// Trilean detector for ideal convergence. A candidate limit z qualifies when
// every epsilon-exceptional set {n : d(x_n, z) >= eps} is judged Member; the
// sequence is Divergent when every candidate owns a NonMember exceptional
// set; anything else stays Undecided. Candidates are the values at geometric
// tail indices plus their coordinatewise median (mode for the discrete
// metric). Two qualifying candidates must sit within the smallest grid eps of
// each other, otherwise the verdict degrades to Undecided.
ConvergenceVerdict i_converges(const PointSeq& x, const IdealSpec& ideal,
                               std::span<const double> eps_grid);

// Limit-free twin: Cauchy when for every eps some anchor N* (searched over
// geometric tail indices) makes {n : d(x_n, x_{N*}) > eps} a Member.
CauchyVerdict i_cauchy(const PointSeq& x, const IdealSpec& ideal,
                       std::span<const double> eps_grid);

// Raw material of the divergent-selection construction: a subsequence u
// hugging a cluster point x* within r and a subsequence v staying 2r away.
struct WitnessPair {
  SubseqPrefix u;
  SubseqPrefix v;
  std::vector<double> center;
  double radius = 0;
};

// True when every enumerated index of u and v satisfies the pair's distance
// inequalities against x.
bool witness_pair_valid(const WitnessPair& pair, const PointSeq& x);

// Locates a witness pair by covering the value range with shrinking balls:
// x* is the center of the most-hit ball at resolution diameter/2^8, the pair
// radius is the largest dyadic fraction of the diameter whose near set holds
// at least floor(N/8) indices while at least two far witnesses remain.
// Returns nothing when the sequence is judged classically convergent or no
// ball is hit often enough (no convergent subsequence at this scale).
std::optional<WitnessPair> witness_pair(const PointSeq& x);

// Characteristic vector of {j : d(z_{s(j)}, z_{s(anchor)}) > 1/k}.
CoinVector indicator_sequence(const PointSeq& z, const SubseqPrefix& s, std::uint64_t anchor,
                              std::uint64_t k);

const char* to_string(ConvergenceTag t);
const char* to_string(CauchyTag t);

}  // namespace iclab
