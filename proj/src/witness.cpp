#include "iclab/witness.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace iclab {

namespace {

// Least k (1-based) with n_k > bound; 0 when the cutpoint list is exhausted.
std::uint64_t least_cutpoint_above(const std::vector<std::uint64_t>& cut, std::uint64_t bound) {
  auto it = std::upper_bound(cut.begin(), cut.end(), bound);
  if (it == cut.end()) return 0;
  return static_cast<std::uint64_t>(it - cut.begin()) + 1;
}

// Distance evaluator with a reusable scratch point; pool scans call this tens
// of millions of times.
class CenterDistance {
 public:
  CenterDistance(const PointSeq& x, const std::vector<double>& center)
      : x_(x), center_(center), scratch_(x.metric().dim()) {}

  double operator()(std::uint64_t idx) {
    x_.value(idx, scratch_);
    return x_.metric().distance(scratch_, center_);
  }

 private:
  const PointSeq& x_;
  std::vector<double> center_;
  std::vector<double> scratch_;
};

AmVerdict in_am_entries(const std::vector<std::uint64_t>& entries, const BlockPlan& plan,
                        const PointSeq& x) {
  const auto& cut = plan.witness.cutpoints;
  std::uint64_t k = least_cutpoint_above(cut, plan.m);
  if (k == 0) throw std::invalid_argument("in_Am: witness has no cutpoint above m");
  if (k + 1 >= cut.size() || entries.size() + 1 < cut[k + 1])
    throw std::domain_error("in_Am: selection too short to test any stage");
  const double r = plan.pair.radius;
  CenterDistance dist(x, plan.pair.center);
  for (; k + 1 < cut.size() && cut[k + 1] - 1 <= entries.size(); ++k) {
    bool ok = true;
    for (std::uint64_t j = cut[k - 1]; ok && j < cut[k]; ++j)
      ok = dist(entries[j - 1]) <= r;
    for (std::uint64_t j = cut[k]; ok && j < cut[k + 1]; ++j)
      ok = dist(entries[j - 1]) >= 2 * r;
    if (ok) return {true, k};
  }
  return {false, 0};
}

}  // namespace

AmVerdict in_Am(const SubseqPrefix& s, const BlockPlan& plan, const PointSeq& x) {
  return in_am_entries(s.entries(), plan, x);
}

AmVerdict in_Am(const PermPrefix& s, const BlockPlan& plan, const PointSeq& x) {
  return in_am_entries(s.entries(), plan, x);
}

namespace {

// Lazily extended pool of indices n with d(x_n, center) <= r (near) or
// >= 2r (far), enumerated in increasing order up to the sequence horizon.
class PoolCursor {
 public:
  PoolCursor(const PointSeq& x, const std::vector<double>& center, double radius, bool near,
             std::vector<std::uint64_t> seed_entries)
      : x_(x), dist_(x, center), radius_(radius), near_(near),
        entries_(std::move(seed_entries)) {
    scanned_ = entries_.empty() ? 0 : entries_.back();
  }

  // Pool index of the first entry with value > bound.
  std::uint64_t first_above(std::uint64_t bound) {
    while (entries_.empty() || entries_.back() <= bound) {
      if (!extend()) throw witness_exhausted_error(pool_name() + " pool exhausted");
    }
    auto it = std::upper_bound(entries_.begin(), entries_.end(), bound);
    return static_cast<std::uint64_t>(it - entries_.begin()) + 1;
  }

  std::uint64_t at(std::uint64_t pool_index) {
    while (entries_.size() < pool_index) {
      if (!extend()) throw witness_exhausted_error(pool_name() + " pool exhausted");
    }
    return entries_[pool_index - 1];
  }

  const std::vector<std::uint64_t>& entries() const { return entries_; }

 private:
  bool extend() {
    const std::uint64_t horizon = x_.horizon().value();
    std::uint64_t chunk = 4096;
    while (scanned_ < horizon) {
      std::uint64_t stop = std::min(horizon, scanned_ + chunk);
      std::size_t before = entries_.size();
      for (std::uint64_t n = scanned_ + 1; n <= stop; ++n) {
        double d = dist_(n);
        if (near_ ? d <= radius_ : d >= 2 * radius_) entries_.push_back(n);
      }
      scanned_ = stop;
      if (entries_.size() > before) return true;
      chunk *= 2;  // sparse pool: widen the scan window
    }
    return false;
  }

  std::string pool_name() const { return near_ ? "near (u)" : "far (v)"; }

  const PointSeq& x_;
  CenterDistance dist_;
  double radius_;
  bool near_;
  std::vector<std::uint64_t> entries_;
  std::uint64_t scanned_ = 0;
};

struct ExtendCore {
  // Entries so far; subsequence keeps them increasing, rearrangement only
  // injective. `running_max` is the freshness threshold for block picks.
  std::vector<std::uint64_t> entries;
  bool injective_mode = false;
  std::unordered_set<std::uint64_t> used;
  std::uint64_t next_unused = 1;
  std::uint64_t running_max = 0;

  void push(std::uint64_t v) {
    entries.push_back(v);
    running_max = std::max(running_max, v);
    if (injective_mode) used.insert(v);
  }

  std::uint64_t smallest_unused() {
    while (used.count(next_unused)) ++next_unused;
    return next_unused;
  }
};

BuildStep extend_once(ExtendCore& core, const std::vector<std::uint64_t>& cut, std::uint64_t m,
                      PoolCursor& u, PoolCursor& v, std::uint64_t horizon) {
  BuildStep step;
  step.m = m;
  // The proof assumes the prefix reaches length m; shorter prefixes are first
  // padded in the style of step 1.
  auto pad_one = [&] {
    if (core.injective_mode) {
      std::uint64_t val = core.smallest_unused();
      if (val > horizon) throw witness_exhausted_error("pad exceeds horizon");
      core.push(val);
    } else {
      std::uint64_t val = core.entries.back() + 1;
      if (val > horizon) throw witness_exhausted_error("pad exceeds horizon");
      core.push(val);
    }
  };
  while (core.entries.size() < m) pad_one();

  std::uint64_t d = core.entries.size();
  std::uint64_t k = least_cutpoint_above(cut, d);
  if (k == 0 || k + 1 >= cut.size())
    throw std::invalid_argument("extend_prefix: witness has too few cutpoints");
  step.k = k;

  // Step 1: consecutive pad up to position n_k - 1.
  if (d + 1 <= cut[k - 1] - 1) {
    step.pad_lo = d + 1;
    step.pad_hi = cut[k - 1] - 1;
  }
  while (core.entries.size() < cut[k - 1] - 1) pad_one();

  // Step 2: near block on [n_k, n_{k+1}).
  step.u_lo = cut[k - 1];
  step.u_hi = cut[k] - 1;
  std::uint64_t p = u.first_above(core.running_max);
  step.p = p;
  for (std::uint64_t i = cut[k - 1]; i < cut[k]; ++i) {
    std::uint64_t val = u.at(p + i - cut[k - 1]);
    if (val > horizon) throw witness_exhausted_error("near (u) pool exhausted");
    core.push(val);
  }

  // Step 3: far block on [n_{k+1}, n_{k+2}).
  step.v_lo = cut[k];
  step.v_hi = cut[k + 1] - 1;
  std::uint64_t q = v.first_above(core.running_max);
  step.q = q;
  for (std::uint64_t i = cut[k]; i < cut[k + 1]; ++i) {
    std::uint64_t val = v.at(q + i - cut[k]);
    if (val > horizon) throw witness_exhausted_error("far (v) pool exhausted");
    core.push(val);
  }
  return step;
}

// Seeded short strictly increasing prefix with small entries.
std::vector<std::uint64_t> seeded_prefix(const BuildOptions& opts) {
  if (opts.prefix_min < 1 || opts.prefix_max < opts.prefix_min)
    throw std::invalid_argument("BuildOptions: invalid prefix length range");
  rng::Drawer draw(rng::Stream(opts.seed).child(rng::kSaltPrefix));
  std::uint64_t len = opts.prefix_min + draw.below(opts.prefix_max - opts.prefix_min + 1);
  std::vector<std::uint64_t> prefix;
  std::uint64_t val = 1 + draw.below(4);
  for (std::uint64_t i = 0; i < len; ++i) {
    prefix.push_back(val);
    val += 1 + draw.below(4);
  }
  return prefix;
}

IntervalWitness witness_for_build(const IdealSpec& ideal, const BuildOptions& opts) {
  if (ideal.kind() == IdealKind::density) return interval_witness(ideal, 62);
  std::uint64_t count = opts.target_len + 2 * opts.min_rounds + opts.prefix_max + 64;
  return interval_witness(ideal, count);
}

WitnessPair locate_pair(const PointSeq& x, const BuildOptions& opts) {
  std::uint64_t scan = opts.pair_scan_horizon != 0
                           ? std::min(opts.pair_scan_horizon, x.horizon().value())
                           : std::min<std::uint64_t>(x.horizon().value(), 1ull << 17);
  auto pair = witness_pair(x.truncated(Horizon(scan)));
  if (!pair)
    throw not_constructible_error(
        "no divergent selection can be assembled: the sequence is judged convergent or has "
        "no convergent subsequence at this scale");
  return *pair;
}

template <typename MakeResult>
auto build_impl(const PointSeq& x, const IdealSpec& ideal, const BuildOptions& opts,
                bool injective, MakeResult make) {
  if (opts.target_len < 2) throw std::invalid_argument("build: target length must be >= 2");
  if (opts.target_len > x.horizon().value())
    throw std::domain_error("build: target length exceeds the sequence horizon");
  WitnessPair pair = locate_pair(x, opts);
  IntervalWitness witness = witness_for_build(ideal, opts);

  PoolCursor u(x, pair.center, pair.radius, true, pair.u.entries());
  PoolCursor v(x, pair.center, pair.radius, false, pair.v.entries());

  ExtendCore core;
  core.injective_mode = injective;
  for (auto e : seeded_prefix(opts)) core.push(e);
  if (injective) {
    // the seeded prefix is increasing, hence injective
  }

  std::vector<BuildStep> steps;
  std::uint64_t m = 0;
  while (core.entries.size() < opts.target_len || steps.size() < opts.min_rounds) {
    ++m;
    steps.push_back(extend_once(core, witness.cutpoints, m, u, v, x.horizon().value()));
  }
  return make(std::move(core.entries), std::move(pair), std::move(witness), std::move(steps));
}

}  // namespace

std::pair<SubseqPrefix, BuildStep> extend_prefix_traced(const SubseqPrefix& prefix,
                                                        const BlockPlan& plan,
                                                        const PointSeq& x) {
  if (prefix.length() == 0) throw std::invalid_argument("extend_prefix: empty prefix");
  ExtendCore core;
  for (auto e : prefix.entries()) core.push(e);
  PoolCursor u(x, plan.pair.center, plan.pair.radius, true, plan.pair.u.entries());
  PoolCursor v(x, plan.pair.center, plan.pair.radius, false, plan.pair.v.entries());
  BuildStep step = extend_once(core, plan.witness.cutpoints, plan.m, u, v, x.horizon().value());
  return {SubseqPrefix(std::move(core.entries), x.horizon()), step};
}

SubseqPrefix extend_prefix(const SubseqPrefix& prefix, const BlockPlan& plan, const PointSeq& x) {
  return extend_prefix_traced(prefix, plan, x).first;
}

SubseqBuild build_divergent_subseq(const PointSeq& x, const IdealSpec& ideal,
                                   const BuildOptions& opts) {
  return build_impl(x, ideal, opts, false,
                    [&](std::vector<std::uint64_t> entries, WitnessPair pair,
                        IntervalWitness witness, std::vector<BuildStep> steps) {
                      return SubseqBuild{SubseqPrefix(std::move(entries), x.horizon()),
                                         std::move(pair), std::move(witness), std::move(steps)};
                    });
}

PermBuild build_divergent_perm(const PointSeq& x, const IdealSpec& ideal,
                               const BuildOptions& opts) {
  return build_impl(x, ideal, opts, true,
                    [&](std::vector<std::uint64_t> entries, WitnessPair pair,
                        IntervalWitness witness, std::vector<BuildStep> steps) {
                      return PermBuild{PermPrefix(std::move(entries), x.horizon()),
                                       std::move(pair), std::move(witness), std::move(steps)};
                    });
}

std::string format_trace(const std::vector<BuildStep>& steps) {
  std::ostringstream out;
  for (const auto& s : steps) {
    out << "m=" << s.m << " k=" << s.k;
    if (s.pad_lo != 0)
      out << " pad=[" << s.pad_lo << "," << s.pad_hi << "]";
    else
      out << " pad=[]";
    out << " u_block=[" << s.u_lo << "," << s.u_hi << "] p_k=" << s.p << " v_block=[" << s.v_lo
        << "," << s.v_hi << "] q_k=" << s.q << "\n";
  }
  return out.str();
}

}  // namespace iclab
