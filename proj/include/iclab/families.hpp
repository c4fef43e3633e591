#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iclab/point_seq.hpp"
#include "iclab/rng.hpp"

namespace iclab {

enum class FamilyKind {
  alternating,       // f_n(x) = (-1)^n, constant in x
  power_x,           // f_n(x) = x^n on [0,1]
  sin_pi,            // f_n(x) = sin(n pi x) on [0,1]
  typewriter,        // stage walk: n = 2^k + j, f_n = 1 iff x in [j 2^-k, (j+1) 2^-k]
  square_indicator,  // f_n(x) = 1 iff n is a perfect square, constant in x
  table_backed,      // values from a CSV table
};

// A sequence of functions [0,1] -> R, evaluable at every (n <= horizon, x).
class FunctionFamily {
 public:
  static FunctionFamily alternating();
  static FunctionFamily power_x();
  static FunctionFamily sin_pi();
  static FunctionFamily typewriter();
  static FunctionFamily square_indicator();
  // CSV layout: header "x,<x1>,<x2>,..." then one row "n,v1,v2,..." per index,
  // covering n = 1..N contiguously.
  static FunctionFamily table_backed(const std::string& path);
  // alternating | powerx | sinpi | typewriter | square-indicator | table:<path>
  static FunctionFamily by_name(const std::string& name);

  FamilyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double eval(std::uint64_t n, double x) const;
  // The slice f_.(x) as a point sequence over [1, horizon].
  PointSeq slice(double x, Horizon horizon) const;
  bool constant_in_x() const {
    return kind_ == FamilyKind::alternating || kind_ == FamilyKind::square_indicator;
  }
  // Sampling for sin_pi rejects x near small-denominator rationals.
  bool wants_rational_rejection() const { return kind_ == FamilyKind::sin_pi; }
  // table-backed families only admit their own column points
  std::vector<double> table_points() const;
  std::uint64_t table_rows() const;

 private:
  explicit FunctionFamily(FamilyKind kind, std::string name);

  FamilyKind kind_;
  std::string name_;
  std::vector<double> table_xs_;
  std::vector<std::vector<double>> table_values_;  // [x-column][n-1]
};

// Sampling weights on the domain [0,1]: a midpoint grid for determinism or
// seeded uniform draws for independence checks.
struct DomainSampler {
  enum class Kind { uniform_grid, seeded_uniform } kind = Kind::uniform_grid;
  std::uint64_t count = 1;

  // reject_small_denominator resamples (or rejects, for grids) points within
  // 1e-6 of p/q with q <= 8.
  std::vector<double> sample(rng::Stream stream, bool reject_small_denominator) const;
};

// Named sequences for the CLI and configs: harmonic (1/n), alternating,
// square-indicator, constant:<c>, csv:<path>, or family:<name>@x=<value>.
PointSeq sequence_by_name(const std::string& spec, Horizon horizon);

}  // namespace iclab
