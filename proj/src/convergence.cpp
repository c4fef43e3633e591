#include "iclab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace iclab {

namespace {

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw config_error("eps grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) throw config_error("eps grid entries must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1]))
      throw config_error("eps grid must be strictly decreasing");
  }
}

// Geometric tail indices N, N/2, N/4, ... (at most 12, deduplicated).
std::vector<std::uint64_t> tail_indices(std::uint64_t n) {
  std::vector<std::uint64_t> idx;
  std::uint64_t v = n;
  for (int j = 0; j < 12 && v >= 1; ++j) {
    if (idx.empty() || idx.back() != v) idx.push_back(v);
    if (v == 1) break;
    v /= 2;
  }
  return idx;
}

std::span<const double> point_at(const std::vector<double>& buf, std::uint32_t dim,
                                 std::uint64_t n) {
  return std::span<const double>(buf.data() + (n - 1) * dim, dim);
}

// Candidate limits drawn from the sequence itself: tail values plus their
// coordinatewise lower median (mode for the discrete metric). Capped at 16.
std::vector<std::vector<double>> limit_candidates(const std::vector<double>& buf,
                                                  const Metric& metric, std::uint64_t n) {
  const std::uint32_t dim = metric.dim();
  std::vector<std::vector<double>> cands;
  for (auto idx : tail_indices(n)) {
    auto p = point_at(buf, dim, idx);
    std::vector<double> v(p.begin(), p.end());
    if (std::find(cands.begin(), cands.end(), v) == cands.end()) cands.push_back(std::move(v));
  }
  std::vector<std::vector<double>> tail_vals;
  for (auto idx : tail_indices(n)) {
    auto p = point_at(buf, dim, idx);
    tail_vals.emplace_back(p.begin(), p.end());
  }
  std::vector<double> center(dim);
  if (metric.kind() == MetricKind::discrete) {
    std::map<std::vector<double>, int> freq;
    for (auto& v : tail_vals) freq[v]++;
    auto best = tail_vals.front();
    int best_count = 0;
    for (auto& v : tail_vals) {
      if (freq[v] > best_count) {
        best_count = freq[v];
        best = v;
      }
    }
    center = best;
  } else {
    for (std::uint32_t c = 0; c < dim; ++c) {
      std::vector<double> coords;
      coords.reserve(tail_vals.size());
      for (auto& v : tail_vals) coords.push_back(v[c]);
      std::sort(coords.begin(), coords.end());
      center[c] = coords[(coords.size() - 1) / 2];  // lower median
    }
  }
  if (std::find(cands.begin(), cands.end(), center) == cands.end())
    cands.push_back(std::move(center));
  if (cands.size() > 16) cands.resize(16);
  return cands;
}

// Exceptional-set prefix counts for every grid epsilon at every decision
// position, in one pass over the distances. exceed(eps) uses >= for the
// convergence rule and > for the Cauchy rule.
std::vector<std::vector<DensityPoint>> exceptional_counts(
    const std::vector<double>& buf, const Metric& metric, std::uint64_t n,
    std::span<const double> ref, std::span<const double> grid, bool strict,
    std::span<const std::uint64_t> positions) {
  const std::uint32_t dim = metric.dim();
  const std::size_t g = grid.size();
  std::vector<std::uint64_t> hist(g + 1, 0);
  std::vector<std::vector<DensityPoint>> counts(g);
  for (auto& c : counts) c.reserve(positions.size());
  std::size_t pos_idx = 0;
  for (std::uint64_t i = 1; i <= n && pos_idx < positions.size(); ++i) {
    double d = metric.distance(point_at(buf, dim, i), ref);
    // smallest grid index whose threshold the distance crosses
    std::size_t t = 0;
    while (t < g && !(strict ? d > grid[t] : d >= grid[t])) ++t;
    ++hist[t];
    if (i == positions[pos_idx]) {
      std::uint64_t acc = 0;
      for (std::size_t e = 0; e < g; ++e) {
        acc += hist[e];
        counts[e].push_back({i, acc});
      }
      ++pos_idx;
    }
  }
  return counts;
}

EpsEvidence summarize(double eps, const MembershipVerdict& v) {
  EpsEvidence ev;
  ev.eps = eps;
  ev.tag = v.tag;
  if (!v.evidence.empty()) {
    double lo = 1, hi = 0;
    for (auto& p : v.evidence) {
      lo = std::min(lo, p.ratio());
      hi = std::max(hi, p.ratio());
    }
    ev.min_ratio = lo;
    ev.max_ratio = hi;
  }
  return ev;
}

// Membership tags of the exceptional sets of `ref` for every grid epsilon.
std::vector<EpsEvidence> eps_verdicts(const std::vector<double>& buf, const Metric& metric,
                                      std::uint64_t n, std::span<const double> ref,
                                      const IdealSpec& ideal, std::span<const double> grid,
                                      bool strict) {
  std::vector<EpsEvidence> out;
  out.reserve(grid.size());
  if (ideal.kind() == IdealKind::custom) {
    // Slow path: custom oracles judge materialized sets.
    const std::uint32_t dim = metric.dim();
    for (double eps : grid) {
      std::vector<std::uint64_t> elems;
      for (std::uint64_t i = 1; i <= n; ++i) {
        double d = metric.distance(point_at(buf, dim, i), ref);
        if (strict ? d > eps : d >= eps) elems.push_back(i);
      }
      IndexSet set(std::move(elems), Horizon(n));
      out.push_back(summarize(eps, membership(ideal, set)));
    }
    return out;
  }
  auto positions = decision_positions(ideal, Horizon(n));
  auto counts = exceptional_counts(buf, metric, n, ref, grid, strict, positions);
  for (std::size_t e = 0; e < grid.size(); ++e)
    out.push_back(summarize(grid[e], decide_membership(ideal, Horizon(n), counts[e])));
  return out;
}

}  // namespace

std::vector<double> default_eps_grid() { return eps_grid_down_to(1.0 / 128.0); }

std::vector<double> eps_grid_down_to(double eps_min) {
  if (!(eps_min > 0) || eps_min > 0.5) throw config_error("eps_min must lie in (0, 1/2]");
  std::vector<double> grid;
  for (double e = 0.5; e >= eps_min; e /= 2) grid.push_back(e);
  return grid;
}

ConvergenceVerdict i_converges(const PointSeq& x, const IdealSpec& ideal,
                               std::span<const double> eps_grid) {
  validate_grid(eps_grid);
  const std::uint64_t n = x.horizon().value();
  auto buf = x.materialize();
  auto candidates = limit_candidates(buf, x.metric(), n);

  ConvergenceVerdict verdict;
  std::vector<std::size_t> qualifying;
  std::vector<std::vector<EpsEvidence>> tables(candidates.size());
  bool all_have_non_member = true;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    tables[c] = eps_verdicts(buf, x.metric(), n, candidates[c], ideal, eps_grid, false);
    bool all_member = true, has_non_member = false;
    for (auto& ev : tables[c]) {
      all_member = all_member && ev.tag == MembershipTag::member;
      has_non_member = has_non_member || ev.tag == MembershipTag::non_member;
    }
    if (all_member) qualifying.push_back(c);
    if (!has_non_member) all_have_non_member = false;
    if (!all_member) {
      // keep the strongest objection: a NonMember eps if any, else the first undecided
      const EpsEvidence* pick = nullptr;
      for (auto& ev : tables[c])
        if (ev.tag == MembershipTag::non_member) { pick = &ev; break; }
      if (!pick)
        for (auto& ev : tables[c])
          if (ev.tag != MembershipTag::member) { pick = &ev; break; }
      verdict.rejects.push_back({candidates[c], *pick});
    }
  }

  if (!qualifying.empty()) {
    // An ideal limit is unique; two qualifying candidates must agree up to
    // the finest grid eps or the detector refuses to guess.
    for (std::size_t a : qualifying)
      for (std::size_t b : qualifying)
        if (x.metric().distance(candidates[a], candidates[b]) > eps_grid.back()) {
          verdict.tag = ConvergenceTag::undecided;
          return verdict;
        }
    verdict.tag = ConvergenceTag::convergent;
    verdict.limit = candidates[qualifying.front()];
    verdict.eps_table = tables[qualifying.front()];
    return verdict;
  }
  verdict.tag = all_have_non_member ? ConvergenceTag::divergent : ConvergenceTag::undecided;
  return verdict;
}

CauchyVerdict i_cauchy(const PointSeq& x, const IdealSpec& ideal,
                       std::span<const double> eps_grid) {
  validate_grid(eps_grid);
  const std::uint64_t n = x.horizon().value();
  auto buf = x.materialize();
  const std::uint32_t dim = x.metric().dim();
  auto anchors = tail_indices(n);

  std::vector<std::vector<EpsEvidence>> tables;
  tables.reserve(anchors.size());
  for (auto a : anchors) {
    std::vector<double> ref(point_at(buf, dim, a).begin(), point_at(buf, dim, a).end());
    tables.push_back(eps_verdicts(buf, x.metric(), n, ref, ideal, eps_grid, true));
  }

  CauchyVerdict verdict;
  bool all_ok = true, any_fail = false;
  std::vector<EpsEvidence> table;
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    bool ok = false, all_non_member = true;
    std::size_t ok_anchor = 0;
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      if (tables[a][e].tag == MembershipTag::member && !ok) {
        ok = true;
        ok_anchor = a;
      }
      all_non_member = all_non_member && tables[a][e].tag == MembershipTag::non_member;
    }
    if (ok) {
      table.push_back(tables[ok_anchor][e]);
      if (verdict.anchor == 0) verdict.anchor = anchors[ok_anchor];
    } else {
      table.push_back(tables[0][e]);
      all_ok = false;
      if (all_non_member) any_fail = true;
    }
  }
  verdict.eps_table = std::move(table);
  verdict.tag = all_ok ? CauchyTag::cauchy
                       : (any_fail ? CauchyTag::not_cauchy : CauchyTag::undecided);
  if (verdict.tag != CauchyTag::cauchy) verdict.anchor = 0;
  return verdict;
}

bool witness_pair_valid(const WitnessPair& pair, const PointSeq& x) {
  const std::uint32_t dim = x.metric().dim();
  std::vector<double> p(dim);
  for (auto idx : pair.u.entries()) {
    x.value(idx, p);
    if (x.metric().distance(p, pair.center) > pair.radius) return false;
  }
  for (auto idx : pair.v.entries()) {
    x.value(idx, p);
    if (x.metric().distance(p, pair.center) < 2 * pair.radius) return false;
  }
  return true;
}

std::optional<WitnessPair> witness_pair(const PointSeq& x) {
  const std::uint64_t n = x.horizon().value();
  if (n < 64) throw std::invalid_argument("witness_pair: horizon must be >= 64");

  auto grid = default_eps_grid();
  if (i_converges(x, IdealSpec::fin(), grid).tag == ConvergenceTag::convergent)
    return std::nullopt;  // judged convergent: nothing to separate

  auto buf = x.materialize();
  const Metric& metric = x.metric();
  const std::uint32_t dim = metric.dim();

  // Empirical diameter from coordinate ranges.
  double diam = 0;
  if (metric.kind() == MetricKind::discrete) {
    for (std::uint64_t i = 2; i <= n && diam == 0; ++i)
      if (metric.distance(point_at(buf, dim, i), point_at(buf, dim, 1)) > 0) diam = 1;
  } else {
    double s = 0;
    for (std::uint32_t c = 0; c < dim; ++c) {
      double lo = buf[c], hi = buf[c];
      for (std::uint64_t i = 2; i <= n; ++i) {
        double v = buf[(i - 1) * dim + c];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      s += (hi - lo) * (hi - lo);
    }
    diam = std::sqrt(s);
  }
  if (diam == 0) return std::nullopt;

  // Candidate centers: tail values first (deterministic tie-break), then a
  // coarse stride across the sequence; deduplicated on exact equality.
  std::vector<std::vector<double>> centers;
  auto push_center = [&](std::uint64_t idx) {
    auto p = point_at(buf, dim, idx);
    std::vector<double> v(p.begin(), p.end());
    if (std::find(centers.begin(), centers.end(), v) == centers.end())
      centers.push_back(std::move(v));
  };
  for (auto idx : tail_indices(n)) push_center(idx);
  std::uint64_t stride = std::max<std::uint64_t>(1, n / 256);
  for (std::uint64_t idx = 1; idx <= n; idx += stride) push_center(idx);

  const double fine = diam / 256.0;
  const std::uint64_t near_bar = n / 8;

  // Shortlist by subsampled hit counts when there are many distinct centers,
  // then count exactly.
  std::vector<std::size_t> order(centers.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (centers.size() > 32) {
    std::uint64_t probe_stride = std::max<std::uint64_t>(1, n / 8192);
    std::vector<std::uint64_t> est(centers.size(), 0);
    for (std::size_t c = 0; c < centers.size(); ++c)
      for (std::uint64_t i = 1; i <= n; i += probe_stride)
        if (metric.distance(point_at(buf, dim, i), centers[c]) <= fine) ++est[c];
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return est[a] > est[b]; });
    order.resize(8);
  }

  std::uint64_t best_hits = 0;
  std::size_t best = centers.size();
  for (std::size_t c : order) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 1; i <= n; ++i)
      if (metric.distance(point_at(buf, dim, i), centers[c]) <= fine) ++hits;
    if (hits > best_hits) {
      best_hits = hits;
      best = c;
    }
  }
  if (best == centers.size() || best_hits < near_bar) return std::nullopt;
  const std::vector<double>& center = centers[best];

  std::vector<double> dist(n);
  for (std::uint64_t i = 1; i <= n; ++i)
    dist[i - 1] = metric.distance(point_at(buf, dim, i), center);

  // Largest dyadic radius keeping the near set rich and the far set witnessed.
  double radius = 0;
  for (int t = 1; t <= 8; ++t) {
    double r = diam / static_cast<double>(1u << t);
    std::uint64_t near_count = 0, far_count = 0;
    for (double d : dist) {
      if (d <= r) ++near_count;
      if (d >= 2 * r) ++far_count;
    }
    if (near_count >= near_bar && far_count >= 2) {
      radius = r;
      break;
    }
  }
  if (radius == 0) return std::nullopt;

  const std::uint64_t cap = std::max<std::uint64_t>(near_bar, 4096);
  std::vector<std::uint64_t> u_idx, v_idx;
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (dist[i - 1] <= radius && u_idx.size() < cap) u_idx.push_back(i);
    if (dist[i - 1] >= 2 * radius && v_idx.size() < cap) v_idx.push_back(i);
  }
  return WitnessPair{SubseqPrefix(std::move(u_idx), x.horizon()),
                     SubseqPrefix(std::move(v_idx), x.horizon()), center, radius};
}

CoinVector indicator_sequence(const PointSeq& z, const SubseqPrefix& s, std::uint64_t anchor,
                              std::uint64_t k) {
  if (anchor < 1 || anchor > s.length())
    throw std::domain_error("indicator_sequence: anchor outside the enumerated prefix");
  if (k < 1) throw std::invalid_argument("indicator_sequence: k must be >= 1");
  const std::uint32_t dim = z.metric().dim();
  std::vector<double> ref(dim), p(dim);
  z.value(s.at(anchor), ref);
  const double threshold = 1.0 / static_cast<double>(k);
  std::vector<std::uint8_t> bits(s.length(), 0);
  for (std::uint64_t j = 1; j <= s.length(); ++j) {
    z.value(s.at(j), p);
    bits[j - 1] = z.metric().distance(p, ref) > threshold ? 1 : 0;
  }
  return CoinVector(std::move(bits));
}

const char* to_string(ConvergenceTag t) {
  switch (t) {
    case ConvergenceTag::convergent: return "convergent";
    case ConvergenceTag::divergent: return "divergent";
    case ConvergenceTag::undecided: return "undecided";
  }
  return "?";
}

const char* to_string(CauchyTag t) {
  switch (t) {
    case CauchyTag::cauchy: return "cauchy";
    case CauchyTag::not_cauchy: return "not-cauchy";
    case CauchyTag::undecided: return "undecided";
  }
  return "?";
}

}  // namespace iclab
