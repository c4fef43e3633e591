#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "iclab/convergence.hpp"
#include "iclab/families.hpp"
#include "iclab/report.hpp"
#include "iclab/witness.hpp"

namespace iclab {

// One reproducible run: everything a verdict can depend on. Reports are
// bit-identical for identical (config, seed) regardless of worker count.
struct ExperimentConfig {
  std::string kind;  // lk3 | tw3 | cc1 | propg | emeasure
  std::string subject;  // sequence name (lk3/emeasure) or family name (tw3/cc1)
  std::string ideal = "density";
  std::uint64_t horizon = 1ull << 17;
  std::uint64_t trials = 200;  // selections per series (M_s)
  std::uint64_t points = 200;  // domain points (M_x)
  std::uint64_t seed = 0x1CEB00DA;
  double eps_min = 1.0 / 128.0;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  std::string sampler = "grid";  // grid | uniform
  std::uint64_t construct_target = 1ull << 12;

  void validate() const;
  std::vector<double> eps_grid() const { return eps_grid_down_to(eps_min); }
};

IdealSpec ideal_by_name(const std::string& name);

// Deterministic worker pool: runs f(trial) for trial = 0..count-1 on
// `workers` threads; results land in per-trial slots, so the merge order
// never depends on scheduling.
void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& f);

// lambda-measure of the convergent-selection set: samples trials selections,
// applies each to x, and tallies detector verdicts. Reports the Convergent
// proportion with its interval and the Undecided rate separately.
struct EMeasureResult {
  Tally tally;
  ProportionEstimate convergent;          // over all trials
  ProportionEstimate convergent_decided;  // over decided trials
  double max_limit_norm = 0;  // largest |limit| among convergent trials
};

EMeasureResult estimate_E_measure(const PointSeq& x, const IdealSpec& ideal,
                                  const ExperimentConfig& cfg);

// Equivalence check between the sequence's own verdict and the lambda
// estimate (convergent <-> proportion near 1, divergent <-> near 0).
// Near means >= 0.98 / <= 0.02 over decided trials.
struct Lk3Result {
  ConvergenceTag full_verdict = ConvergenceTag::undecided;
  std::vector<double> full_limit;
  EMeasureResult e_measure;
  std::string consistency;  // consistent | inconsistent | undecided
  std::string warning;      // set when the ideal carries no invariance claim
};

Lk3Result lk3_experiment(const PointSeq& x, const IdealSpec& ideal, const ExperimentConfig& cfg);

// Four sampled conditions of the divergence-transfer equivalence:
//   (i)   fraction of x with the full sequence judged divergent
//   (ii)  fraction of x whose per-x selection convergence rate is near 0
//   (iii) convergent fraction over the (x, s) product sample
//   (iv)  fraction of s whose per-s point convergence rate is near 0
struct Tw3Result {
  ProportionEstimate cond_i, cond_ii, cond_iii, cond_iv;
  Tally full_seq_tally;   // per-x verdicts
  Tally product_tally;    // per-(x,s) verdicts
  double gap_ii_iv = 0;   // |(ii) - (iv)|
  double gap_se = 0;      // combined standard error of the gap
  bool gap_within_3se = false;
  std::string consistency;  // all-divergent | all-convergent | mixed
};

Tw3Result tw3_experiment(const FunctionFamily& family, const IdealSpec& ideal,
                         const ExperimentConfig& cfg);

// Demonstration (not verification): contrasts random selections against the
// constructed divergent selections at each sampled point. Refuses when the
// family is classically convergent at every sampled point.
struct Cc1PointReport {
  double x = 0;
  ConvergenceTag classical = ConvergenceTag::undecided;
  bool skipped = false;  // classically convergent point
  Tally random_tally;
  ConvergenceTag subseq_verdict = ConvergenceTag::undecided;
  ConvergenceTag perm_verdict = ConvergenceTag::undecided;
  bool subseq_in_am = false;  // replay of the stage condition for every visited m
  bool perm_in_am = false;
  std::uint64_t rounds = 0;
  std::string construction_error;
};

struct Cc1Result {
  bool refused = false;
  std::vector<Cc1PointReport> points;
  ProportionEstimate random_convergent;       // over random (point, selection) pairs
  ProportionEstimate constructed_divergent;   // over successful constructions
  std::uint64_t construction_failures = 0;
};

Cc1Result cc1_demo(const FunctionFamily& family, const IdealSpec& ideal,
                   const ExperimentConfig& cfg);

// Sampled share of lambda-random selections that act invariantly on the
// membership battery. Proportion is taken over decided trials; the undecided
// rate is reported alongside.
struct PropGResult {
  std::uint64_t invariant = 0, not_invariant = 0, undecided = 0;
  ProportionEstimate invariant_decided;
  double undecided_rate = 0;
};

PropGResult property_g_estimate(const IdealSpec& ideal, const ExperimentConfig& cfg);

// Canonical JSON (field order fixed, no timing data) and CSV tallies.
nlohmann::ordered_json experiment_report(const ExperimentConfig& cfg);
std::string report_csv(const nlohmann::ordered_json& report);

const char* to_string(FamilyKind k);

}  // namespace iclab
