#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iclab/convergence.hpp"

namespace iclab {

// Everything one extension round needs: the ideal's interval witness, the
// near/far subsequence pair around (center, radius), and the stage index m.
struct BlockPlan {
  IntervalWitness witness;
  WitnessPair pair;
  std::uint64_t m = 1;
};

// Verdict of the stage-m block test: Yes(k) for the least k with n_k > m such
// that the selection carries a full near interval [n_k, n_{k+1}) followed by
// a full far interval [n_{k+1}, n_{k+2}).
struct AmVerdict {
  bool yes = false;
  std::uint64_t k = 0;
};

AmVerdict in_Am(const SubseqPrefix& s, const BlockPlan& plan, const PointSeq& x);
AmVerdict in_Am(const PermPrefix& s, const BlockPlan& plan, const PointSeq& x);

// One extension round, recorded for the trace file.
struct BuildStep {
  std::uint64_t m = 0, k = 0;
  std::uint64_t pad_lo = 0, pad_hi = 0;  // positions filled by step 1, [lo, hi]; 0,0 when empty
  std::uint64_t u_lo = 0, u_hi = 0;      // positions of the near block
  std::uint64_t p = 0;                   // first pool index used from u
  std::uint64_t v_lo = 0, v_hi = 0;      // positions of the far block
  std::uint64_t q = 0;                   // first pool index used from v
};

// The three-step extension: pad with consecutive integers up to n_k - 1,
// copy a near block from u starting at the smallest p with u(p) past the
// prefix, then a far block from v likewise. Prefixes shorter than m are first
// padded to length m. Throws witness_exhausted_error when u or v runs out
// mid-block.
SubseqPrefix extend_prefix(const SubseqPrefix& prefix, const BlockPlan& plan, const PointSeq& x);
std::pair<SubseqPrefix, BuildStep> extend_prefix_traced(const SubseqPrefix& prefix,
                                                        const BlockPlan& plan, const PointSeq& x);

struct BuildOptions {
  std::uint64_t target_len = 1 << 12;
  std::uint64_t seed = 0;
  // Rounds continue past the target until this many stages are in; each stage
  // deposits one full near and one full far witness interval.
  std::uint64_t min_rounds = 8;
  std::uint64_t prefix_min = 4;
  std::uint64_t prefix_max = 8;
  // Horizon of the truncated view used to locate the witness pair
  // (0 = min(x horizon, 2^17)); the pools themselves extend lazily to the
  // full horizon.
  std::uint64_t pair_scan_horizon = 0;
};

struct SubseqBuild {
  SubseqPrefix selection;
  WitnessPair pair;
  IntervalWitness witness;
  std::vector<BuildStep> steps;
};

struct PermBuild {
  PermPrefix selection;
  WitnessPair pair;
  IntervalWitness witness;
  std::vector<BuildStep> steps;
};

// Iterates the extension for m = 1, 2, ... from a seeded short prefix until
// the target length and round count are met. The result lies in A_m for every
// visited m. Throws not_constructible_error when no witness pair exists.
SubseqBuild build_divergent_subseq(const PointSeq& x, const IdealSpec& ideal,
                                   const BuildOptions& opts);

// Rearrangement variant: pads take the smallest unused integers and block
// picks stay above the running maximum, so entries are globally injective.
PermBuild build_divergent_perm(const PointSeq& x, const IdealSpec& ideal,
                               const BuildOptions& opts);

std::string format_trace(const std::vector<BuildStep>& steps);

}  // namespace iclab
