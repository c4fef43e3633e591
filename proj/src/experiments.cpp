#include "iclab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace iclab {

namespace {

constexpr double kNearZero = 0.02;
constexpr double kNearOne = 0.98;

double norm_of(const std::vector<double>& v) {
  double s = 0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

std::uint8_t tag_byte(ConvergenceTag t) { return static_cast<std::uint8_t>(t); }
ConvergenceTag byte_tag(std::uint8_t b) { return static_cast<ConvergenceTag>(b); }

Tally tally_of(const std::vector<std::uint8_t>& tags) {
  Tally t;
  for (auto b : tags) {
    switch (byte_tag(b)) {
      case ConvergenceTag::convergent: ++t.convergent; break;
      case ConvergenceTag::divergent: ++t.divergent; break;
      case ConvergenceTag::undecided: ++t.undecided; break;
    }
  }
  return t;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (kind != "lk3" && kind != "tw3" && kind != "cc1" && kind != "propg" && kind != "emeasure")
    throw config_error("unknown experiment kind: " + kind);
  if (kind != "propg" && subject.empty()) throw config_error("experiment needs a subject");
  if (trials < 1 || points < 1) throw config_error("trials and points must be >= 1");
  if (horizon < 1024) throw config_error("horizon must be >= 1024");
  if (sampler != "grid" && sampler != "uniform") throw config_error("sampler must be grid|uniform");
  eps_grid_down_to(eps_min);  // validates the range
}

IdealSpec ideal_by_name(const std::string& name) {
  if (name == "fin") return IdealSpec::fin();
  if (name == "density") return IdealSpec::density();
  throw config_error("unknown ideal: " + name);
}

void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& f) {
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (count < 2 || workers < 2) {
    for (std::uint64_t t = 0; t < count; ++t) f(t);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t t = next.fetch_add(1);
        if (t >= count) return;
        try {
          f(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

EMeasureResult estimate_E_measure(const PointSeq& x, const IdealSpec& ideal,
                                  const ExperimentConfig& cfg) {
  auto grid = cfg.eps_grid();
  std::vector<std::uint8_t> tags(cfg.trials, 0);
  std::vector<double> norms(cfg.trials, 0.0);
  parallel_for(cfg.trials, cfg.workers, [&](std::uint64_t t) {
    auto s = sample_lambda(cfg.seed, t, Horizon(cfg.horizon));
    auto v = i_converges(apply_selection(x, s), ideal, grid);
    tags[t] = tag_byte(v.tag);
    if (v.tag == ConvergenceTag::convergent) norms[t] = norm_of(v.limit);
  });
  EMeasureResult out;
  out.tally = tally_of(tags);
  out.convergent = make_proportion(out.tally.convergent, out.tally.total());
  out.convergent_decided = make_proportion(out.tally.convergent, out.tally.decided());
  for (double n : norms) out.max_limit_norm = std::max(out.max_limit_norm, n);
  return out;
}

Lk3Result lk3_experiment(const PointSeq& x, const IdealSpec& ideal,
                         const ExperimentConfig& cfg) {
  Lk3Result out;
  auto grid = cfg.eps_grid();
  auto full = i_converges(x, ideal, grid);
  out.full_verdict = full.tag;
  out.full_limit = full.limit;
  out.e_measure = estimate_E_measure(x, ideal, cfg);
  if (ideal.kind() != IdealKind::density)
    out.warning = "invariance of lambda-random selections is claimed for the density ideal only";
  const auto& dec = out.e_measure.convergent_decided;
  if (full.tag == ConvergenceTag::undecided || dec.n == 0) {
    out.consistency = "undecided";
  } else if (full.tag == ConvergenceTag::convergent) {
    out.consistency = dec.proportion >= kNearOne ? "consistent" : "inconsistent";
  } else {
    out.consistency = dec.proportion <= kNearZero ? "consistent" : "inconsistent";
  }
  return out;
}

namespace {

std::vector<double> sample_points(const FunctionFamily& family, const ExperimentConfig& cfg) {
  if (family.kind() == FamilyKind::table_backed) return family.table_points();
  DomainSampler sampler;
  sampler.kind = cfg.sampler == "grid" ? DomainSampler::Kind::uniform_grid
                                       : DomainSampler::Kind::seeded_uniform;
  sampler.count = cfg.points;
  return sampler.sample(rng::Stream(cfg.seed).child(rng::kSaltExperiment),
                        family.wants_rational_rejection());
}

Horizon family_horizon(const FunctionFamily& family, const ExperimentConfig& cfg) {
  if (family.kind() == FamilyKind::table_backed)
    return Horizon(std::min<std::uint64_t>(cfg.horizon, family.table_rows()));
  return Horizon(cfg.horizon);
}

}  // namespace

Tw3Result tw3_experiment(const FunctionFamily& family, const IdealSpec& ideal,
                         const ExperimentConfig& cfg) {
  auto grid = cfg.eps_grid();
  auto xs = sample_points(family, cfg);
  Horizon h = family_horizon(family, cfg);
  const std::uint64_t mx = xs.size();
  const std::uint64_t ms = cfg.trials;

  std::vector<std::uint8_t> full_tags(mx, 0);
  parallel_for(mx, cfg.workers, [&](std::uint64_t i) {
    full_tags[i] = tag_byte(i_converges(family.slice(xs[i], h), ideal, grid).tag);
  });

  std::vector<SubseqPrefix> selections;
  selections.reserve(ms);
  for (std::uint64_t j = 0; j < ms; ++j) selections.push_back(sample_lambda(cfg.seed, j, h));

  std::vector<std::uint8_t> matrix(mx * ms, 0);
  parallel_for(mx * ms, cfg.workers, [&](std::uint64_t t) {
    const std::uint64_t i = t / ms, j = t % ms;
    auto applied = apply_selection(family.slice(xs[i], h), selections[j]);
    matrix[t] = tag_byte(i_converges(applied, ideal, grid).tag);
  });

  Tw3Result out;
  out.full_seq_tally = tally_of(full_tags);
  out.product_tally = tally_of(matrix);
  out.cond_i = make_proportion(out.full_seq_tally.divergent, mx);
  out.cond_iii = make_proportion(out.product_tally.convergent, mx * ms);

  auto near_zero_rows = [&](bool by_x) {
    std::uint64_t rows = by_x ? mx : ms, cols = by_x ? ms : mx;
    std::uint64_t with_decided = 0, near0 = 0;
    for (std::uint64_t r = 0; r < rows; ++r) {
      std::uint64_t conv = 0, decided = 0;
      for (std::uint64_t c = 0; c < cols; ++c) {
        auto tag = byte_tag(by_x ? matrix[r * ms + c] : matrix[c * ms + r]);
        if (tag != ConvergenceTag::undecided) ++decided;
        if (tag == ConvergenceTag::convergent) ++conv;
      }
      if (decided == 0) continue;
      ++with_decided;
      if (static_cast<double>(conv) / static_cast<double>(decided) <= kNearZero) ++near0;
    }
    return make_proportion(near0, with_decided);
  };
  out.cond_ii = near_zero_rows(true);
  out.cond_iv = near_zero_rows(false);

  out.gap_ii_iv = std::fabs(out.cond_ii.proportion - out.cond_iv.proportion);
  out.gap_se = std::sqrt(std::pow(proportion_se(out.cond_ii.proportion, out.cond_ii.n), 2) +
                         std::pow(proportion_se(out.cond_iv.proportion, out.cond_iv.n), 2));
  out.gap_within_3se = out.gap_ii_iv <= 3 * out.gap_se + 1e-12;

  const double pi = out.cond_i.proportion, pii = out.cond_ii.proportion;
  const double piii = out.cond_iii.proportion, piv = out.cond_iv.proportion;
  if (pi >= kNearOne && pii >= kNearOne && piii <= kNearZero && piv >= kNearOne)
    out.consistency = "all-divergent";
  else if (pi <= kNearZero && pii <= kNearZero && piii >= kNearOne && piv <= kNearZero)
    out.consistency = "all-convergent";
  else
    out.consistency = "mixed";
  return out;
}

namespace {

struct ConstructedVerdicts {
  ConvergenceTag subseq = ConvergenceTag::undecided;
  ConvergenceTag perm = ConvergenceTag::undecided;
  bool subseq_in_am = false;
  bool perm_in_am = false;
  std::uint64_t rounds = 0;
  std::string error;
};

// Attempt the construction with demo parameters; pool-starved families fall
// back to the short small-prefix shape whose blocks fit any horizon.
ConstructedVerdicts construct_and_replay(const PointSeq& slice, const IdealSpec& ideal,
                                         const ExperimentConfig& cfg, std::uint64_t point_salt,
                                         std::span<const double> grid) {
  ConstructedVerdicts out;
  BuildOptions opts;
  opts.target_len = std::min<std::uint64_t>(cfg.construct_target, slice.horizon().value());
  opts.seed = rng::Stream(cfg.seed).child(rng::kSaltPrefix).child(point_salt).key();
  opts.min_rounds = 3;

  // Peek at the far pool: when it is log-sized (one far index per stage),
  // the full-size attempt provably exhausts, so start from the short shape.
  int first_attempt = 0;
  try {
    auto probe = witness_pair(
        slice.truncated(Horizon(std::min<std::uint64_t>(slice.horizon().value(), 1ull << 17))));
    if (!probe) {
      out.error = "no witness pair at this scale";
      return out;
    }
    if (probe->v.entries().size() < 64) first_attempt = 1;
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }

  auto replay_all_m = [&](const auto& selection, const SubseqBuild& sb) {
    BlockPlan plan{sb.witness, sb.pair, 1};
    for (std::uint64_t m = 1; m <= sb.steps.size(); ++m) {
      plan.m = m;
      if (!in_Am(selection, plan, slice).yes) return false;
    }
    return true;
  };

  for (int attempt = first_attempt; attempt < 2; ++attempt) {
    if (attempt == 1) {
      opts.target_len = 16;
      opts.min_rounds = 2;
      opts.prefix_min = opts.prefix_max = 1;
    }
    try {
      auto sb = build_divergent_subseq(slice, ideal, opts);
      auto pb = build_divergent_perm(slice, ideal, opts);
      out.rounds = sb.steps.size();
      out.subseq = i_converges(apply_selection(slice, sb.selection), ideal, grid).tag;
      out.perm = i_converges(apply_selection(slice, pb.selection), ideal, grid).tag;
      out.subseq_in_am = replay_all_m(sb.selection, sb);
      BlockPlan perm_plan{pb.witness, pb.pair, 1};
      out.perm_in_am = true;
      for (std::uint64_t m = 1; m <= pb.steps.size(); ++m) {
        perm_plan.m = m;
        if (!in_Am(pb.selection, perm_plan, slice).yes) out.perm_in_am = false;
      }
      out.error.clear();
      return out;
    } catch (const witness_exhausted_error& e) {
      out.error = e.what();  // retry with the fallback shape
    } catch (const not_constructible_error& e) {
      out.error = e.what();
      return out;
    } catch (const std::domain_error& e) {
      out.error = e.what();
      return out;
    }
  }
  return out;
}

}  // namespace

Cc1Result cc1_demo(const FunctionFamily& family, const IdealSpec& ideal,
                   const ExperimentConfig& cfg) {
  auto grid = cfg.eps_grid();
  auto xs = sample_points(family, cfg);
  Horizon h = family_horizon(family, cfg);
  IdealSpec classical = IdealSpec::fin();

  Cc1Result out;
  out.points.resize(xs.size());
  parallel_for(xs.size(), cfg.workers, [&](std::uint64_t i) {
    out.points[i].x = xs[i];
    out.points[i].classical = i_converges(family.slice(xs[i], h), classical, grid).tag;
  });
  bool any_divergent = false;
  for (auto& p : out.points)
    any_divergent = any_divergent || p.classical == ConvergenceTag::divergent;
  if (!any_divergent) {
    out.refused = true;
    return out;
  }

  std::vector<SubseqPrefix> selections;
  selections.reserve(cfg.trials);
  for (std::uint64_t j = 0; j < cfg.trials; ++j)
    selections.push_back(sample_lambda(cfg.seed, j, h));

  // random side over (point, selection) pairs, skipping classically
  // convergent points
  std::vector<std::uint8_t> random_tags(xs.size() * cfg.trials, 0xFF);
  parallel_for(xs.size() * cfg.trials, cfg.workers, [&](std::uint64_t t) {
    const std::uint64_t i = t / cfg.trials, j = t % cfg.trials;
    if (out.points[i].classical != ConvergenceTag::divergent) return;
    auto applied = apply_selection(family.slice(xs[i], h), selections[j]);
    random_tags[t] = tag_byte(i_converges(applied, ideal, grid).tag);
  });

  // constructed side on a generous formula horizon so sparse far pools still
  // carry the first blocks
  Horizon hc = family.kind() == FamilyKind::table_backed
                   ? h
                   : Horizon(std::max<std::uint64_t>(h.value(), 1ull << 26));
  parallel_for(xs.size(), cfg.workers, [&](std::uint64_t i) {
    auto& p = out.points[i];
    if (p.classical != ConvergenceTag::divergent) {
      p.skipped = true;
      return;
    }
    auto slice = family.slice(xs[i], hc);
    auto cv = construct_and_replay(slice, ideal, cfg, i, grid);
    p.subseq_verdict = cv.subseq;
    p.perm_verdict = cv.perm;
    p.subseq_in_am = cv.subseq_in_am;
    p.perm_in_am = cv.perm_in_am;
    p.rounds = cv.rounds;
    p.construction_error = cv.error;
  });

  std::uint64_t rc = 0, rn = 0;
  for (std::uint64_t i = 0; i < xs.size(); ++i) {
    auto& p = out.points[i];
    if (p.classical != ConvergenceTag::divergent) continue;
    for (std::uint64_t j = 0; j < cfg.trials; ++j) {
      auto b = random_tags[i * cfg.trials + j];
      if (b == 0xFF) continue;
      ++rn;
      switch (byte_tag(b)) {
        case ConvergenceTag::convergent: ++rc; ++p.random_tally.convergent; break;
        case ConvergenceTag::divergent: ++p.random_tally.divergent; break;
        case ConvergenceTag::undecided: ++p.random_tally.undecided; break;
      }
    }
  }
  out.random_convergent = make_proportion(rc, rn);

  std::uint64_t built = 0, built_divergent = 0;
  for (auto& p : out.points) {
    if (p.skipped) continue;
    if (!p.construction_error.empty()) {
      ++out.construction_failures;
      continue;
    }
    built += 2;
    if (p.subseq_verdict == ConvergenceTag::divergent) ++built_divergent;
    if (p.perm_verdict == ConvergenceTag::divergent) ++built_divergent;
  }
  out.constructed_divergent = make_proportion(built_divergent, built);
  return out;
}

PropGResult property_g_estimate(const IdealSpec& ideal, const ExperimentConfig& cfg) {
  if (ideal.kind() == IdealKind::custom)
    throw config_error("property_g_estimate: built-in ideals only");
  std::vector<std::uint8_t> tags(cfg.trials, 0);
  parallel_for(cfg.trials, cfg.workers, [&](std::uint64_t t) {
    auto s = sample_lambda(cfg.seed, t, Horizon(cfg.horizon));
    auto battery = standard_battery(Horizon(s.length()),
                                    rng::Stream(cfg.seed).child(rng::kSaltBattery).child(t));
    tags[t] = static_cast<std::uint8_t>(is_invariant_sample(s, ideal, battery).tag);
  });
  PropGResult out;
  for (auto b : tags) {
    switch (static_cast<InvarianceTag>(b)) {
      case InvarianceTag::invariant: ++out.invariant; break;
      case InvarianceTag::not_invariant: ++out.not_invariant; break;
      case InvarianceTag::undecided: ++out.undecided; break;
    }
  }
  out.invariant_decided = make_proportion(out.invariant, out.invariant + out.not_invariant);
  out.undecided_rate = static_cast<double>(out.undecided) / static_cast<double>(cfg.trials);
  return out;
}

namespace {

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
  // workers and out_dir stay out: canonical output may not depend on them
  return nlohmann::ordered_json{
      {"kind", cfg.kind},       {"subject", cfg.subject},
      {"ideal", cfg.ideal},     {"horizon", cfg.horizon},
      {"trials", cfg.trials},   {"points", cfg.points},
      {"seed", cfg.seed},       {"eps_min", cfg.eps_min},
      {"sampler", cfg.sampler}, {"construct_target", cfg.construct_target}};
}

nlohmann::ordered_json emeasure_json(const EMeasureResult& r) {
  return nlohmann::ordered_json{{"tally", tally_json(r.tally)},
                                {"convergent", proportion_json(r.convergent)},
                                {"convergent_decided", proportion_json(r.convergent_decided)},
                                {"max_limit_norm", r.max_limit_norm}};
}

}  // namespace

nlohmann::ordered_json experiment_report(const ExperimentConfig& cfg) {
  cfg.validate();
  IdealSpec ideal = ideal_by_name(cfg.ideal);
  nlohmann::ordered_json report{
      {"artifact", "iclab"}, {"version", kVersion}, {"config", config_echo(cfg)}};

  if (cfg.kind == "emeasure") {
    auto x = sequence_by_name(cfg.subject, Horizon(cfg.horizon));
    report["results"] = emeasure_json(estimate_E_measure(x, ideal, cfg));
  } else if (cfg.kind == "lk3") {
    auto x = sequence_by_name(cfg.subject, Horizon(cfg.horizon));
    auto r = lk3_experiment(x, ideal, cfg);
    report["results"] = nlohmann::ordered_json{
        {"full_verdict", to_string(r.full_verdict)},
        {"full_limit", r.full_limit},
        {"e_measure", emeasure_json(r.e_measure)},
        {"consistency", r.consistency},
        {"warning", r.warning}};
  } else if (cfg.kind == "tw3") {
    auto r = tw3_experiment(FunctionFamily::by_name(cfg.subject), ideal, cfg);
    report["results"] = nlohmann::ordered_json{
        {"cond_i", proportion_json(r.cond_i)},
        {"cond_ii", proportion_json(r.cond_ii)},
        {"cond_iii", proportion_json(r.cond_iii)},
        {"cond_iv", proportion_json(r.cond_iv)},
        {"full_seq_tally", tally_json(r.full_seq_tally)},
        {"product_tally", tally_json(r.product_tally)},
        {"gap_ii_iv", r.gap_ii_iv},
        {"gap_se", r.gap_se},
        {"gap_within_3se", r.gap_within_3se},
        {"consistency", r.consistency}};
  } else if (cfg.kind == "cc1") {
    auto r = cc1_demo(FunctionFamily::by_name(cfg.subject), ideal, cfg);
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (auto& p : r.points) {
      points.push_back(nlohmann::ordered_json{
          {"x", p.x},
          {"classical", to_string(p.classical)},
          {"skipped", p.skipped},
          {"random_tally", tally_json(p.random_tally)},
          {"subseq_verdict", to_string(p.subseq_verdict)},
          {"perm_verdict", to_string(p.perm_verdict)},
          {"subseq_in_am", p.subseq_in_am},
          {"perm_in_am", p.perm_in_am},
          {"rounds", p.rounds},
          {"construction_error", p.construction_error}});
    }
    report["results"] = nlohmann::ordered_json{
        {"label", "DEMONSTRATION"},
        {"refused", r.refused},
        {"random_convergent", proportion_json(r.random_convergent)},
        {"constructed_divergent", proportion_json(r.constructed_divergent)},
        {"construction_failures", r.construction_failures},
        {"points", points}};
  } else if (cfg.kind == "propg") {
    auto r = property_g_estimate(ideal, cfg);
    report["results"] = nlohmann::ordered_json{
        {"invariant", r.invariant},
        {"not_invariant", r.not_invariant},
        {"undecided", r.undecided},
        {"invariant_decided", proportion_json(r.invariant_decided)},
        {"undecided_rate", r.undecided_rate}};
  }
  return report;
}

namespace {

void csv_walk(const nlohmann::ordered_json& node, const std::string& prefix,
              std::ostringstream& out) {
  if (node.is_object()) {
    if (node.contains("trials") && node.contains("convergent")) {
      out << prefix << "," << node["trials"].get<std::uint64_t>() << ","
          << node["convergent"].get<std::uint64_t>() << ","
          << node["divergent"].get<std::uint64_t>() << ","
          << node["undecided"].get<std::uint64_t>() << ",,,\n";
      return;
    }
    if (node.contains("proportion") && node.contains("ci95_lo")) {
      out << prefix << "," << node["n"].get<std::uint64_t>() << ",,,,"
          << node["proportion"].get<double>() << "," << node["ci95_lo"].get<double>() << ","
          << node["ci95_hi"].get<double>() << "\n";
      return;
    }
    for (auto it = node.begin(); it != node.end(); ++it)
      csv_walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (node.is_array()) {
    std::size_t i = 0;
    for (const auto& item : node) csv_walk(item, prefix + "[" + std::to_string(i++) + "]", out);
  }
}

}  // namespace

std::string report_csv(const nlohmann::ordered_json& report) {
  std::ostringstream out;
  out << "series,n,convergent,divergent,undecided,proportion,ci95_lo,ci95_hi\n";
  if (report.contains("results")) csv_walk(report["results"], "", out);
  return out.str();
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::alternating: return "alternating";
    case FamilyKind::power_x: return "powerx";
    case FamilyKind::sin_pi: return "sinpi";
    case FamilyKind::typewriter: return "typewriter";
    case FamilyKind::square_indicator: return "square-indicator";
    case FamilyKind::table_backed: return "table";
  }
  return "?";
}

}  // namespace iclab
