#include "iclab/report.hpp"

#include <cmath>

namespace iclab {

ScoreInterval wilson_interval(std::uint64_t successes, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 97.5th normal quantile
  const double z2 = z * z;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = successes == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

nlohmann::ordered_json tally_json(const Tally& t) {
  return nlohmann::ordered_json{{"trials", t.total()},
                                {"convergent", t.convergent},
                                {"divergent", t.divergent},
                                {"undecided", t.undecided}};
}

ProportionEstimate make_proportion(std::uint64_t successes, std::uint64_t n) {
  ProportionEstimate p;
  p.successes = successes;
  p.n = n;
  p.proportion = n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n);
  p.ci = wilson_interval(successes, n);
  return p;
}

nlohmann::ordered_json proportion_json(const ProportionEstimate& p) {
  return nlohmann::ordered_json{
      {"successes", p.successes}, {"n", p.n}, {"proportion", p.proportion},
      {"ci95_lo", p.ci.lo},       {"ci95_hi", p.ci.hi}};
}

double proportion_se(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

}  // namespace iclab
