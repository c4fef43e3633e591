#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "iclab/common.hpp"
#include "iclab/selection.hpp"

namespace iclab {

enum class MetricKind { real_abs, euclid, discrete };

// Metric on the value space: reals with |.|, R^dim with the Euclidean norm,
// or the 0/1 metric on exact value equality.
class Metric {
 public:
  static Metric real_abs() { return Metric(MetricKind::real_abs, 1); }
  static Metric euclid(std::uint32_t dim);
  static Metric discrete() { return Metric(MetricKind::discrete, 1); }

  MetricKind kind() const { return kind_; }
  std::uint32_t dim() const { return dim_; }
  double distance(std::span<const double> a, std::span<const double> b) const;

  friend bool operator==(const Metric& a, const Metric& b) {
    return a.kind_ == b.kind_ && a.dim_ == b.dim_;
  }

 private:
  Metric(MetricKind k, std::uint32_t d) : kind_(k), dim_(d) {}
  MetricKind kind_;
  std::uint32_t dim_;
};

// A finite sequence x_1, ..., x_N in a metric space. Values come from a
// stored array or a reentrant evaluation rule (same index, same value).
class PointSeq {
 public:
  using Formula = std::function<double(std::uint64_t)>;

  static PointSeq from_formula(Metric metric, Horizon horizon, Formula f);
  static PointSeq from_values(Metric metric, std::vector<double> values);
  // Flat row-major storage, values.size() == horizon * dim.
  static PointSeq from_vector_values(Metric metric, std::vector<double> values,
                                     std::uint32_t dim);

  const Metric& metric() const { return metric_; }
  Horizon horizon() const { return horizon_; }

  // Writes the dim coordinates of x_n (1-based).
  void value(std::uint64_t n, std::span<double> out) const;
  // dim-1 shortcut
  double scalar(std::uint64_t n) const;

  // Same evaluation rule over a shorter initial segment.
  PointSeq truncated(Horizon shorter) const;

  // Row-major buffer of all values; rejects non-finite payloads.
  std::vector<double> materialize() const;

 private:
  using VectorRule = std::function<void(std::uint64_t, std::span<double>)>;
  PointSeq(Metric metric, Horizon horizon, VectorRule rule);

  Metric metric_;
  Horizon horizon_;
  VectorRule rule_;
};

// (x_{s(n)}): value at n is x_{s(n)}, the new horizon is the enumerated
// length of the selection. Entries must stay within x's horizon.
PointSeq apply_selection(const PointSeq& x, const SubseqPrefix& s);
PointSeq apply_selection(const PointSeq& x, const PermPrefix& p);

}  // namespace iclab
