#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace iclab {

// 95% Wilson score interval.
struct ScoreInterval {
  double lo = 0;
  double hi = 0;
};

ScoreInterval wilson_interval(std::uint64_t successes, std::uint64_t n);

// Verdict tallies for one Monte Carlo series; tallies always sum to trials.
struct Tally {
  std::uint64_t convergent = 0;
  std::uint64_t divergent = 0;
  std::uint64_t undecided = 0;

  std::uint64_t total() const { return convergent + divergent + undecided; }
  std::uint64_t decided() const { return convergent + divergent; }
  double convergent_rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(convergent) / static_cast<double>(total());
  }
  double undecided_rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(undecided) / static_cast<double>(total());
  }
};

nlohmann::ordered_json tally_json(const Tally& t);

// Proportion with its score interval over n trials.
struct ProportionEstimate {
  std::uint64_t successes = 0;
  std::uint64_t n = 0;
  double proportion = 0;
  ScoreInterval ci;
};

ProportionEstimate make_proportion(std::uint64_t successes, std::uint64_t n);
nlohmann::ordered_json proportion_json(const ProportionEstimate& p);

// Plain binomial standard error, used for cross-condition gap checks.
double proportion_se(double p, std::uint64_t n);

}  // namespace iclab
