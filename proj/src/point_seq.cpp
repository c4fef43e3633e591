#include "iclab/point_seq.hpp"

#include <cmath>

namespace iclab {

Metric Metric::euclid(std::uint32_t dim) {
  if (dim < 1) throw std::invalid_argument("Metric::euclid: dim must be >= 1");
  return Metric(MetricKind::euclid, dim);
}

double Metric::distance(std::span<const double> a, std::span<const double> b) const {
  switch (kind_) {
    case MetricKind::real_abs:
      return std::fabs(a[0] - b[0]);
    case MetricKind::euclid: {
      double s = 0;
      for (std::uint32_t i = 0; i < dim_; ++i) {
        double d = a[i] - b[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case MetricKind::discrete: {
      for (std::uint32_t i = 0; i < dim_; ++i)
        if (a[i] != b[i]) return 1.0;
      return 0.0;
    }
  }
  return 0.0;
}

PointSeq::PointSeq(Metric metric, Horizon horizon, VectorRule rule)
    : metric_(metric), horizon_(horizon), rule_(std::move(rule)) {}

PointSeq PointSeq::from_formula(Metric metric, Horizon horizon, Formula f) {
  if (metric.dim() != 1)
    throw std::invalid_argument("PointSeq::from_formula: scalar rule needs dim 1");
  if (!f) throw std::invalid_argument("PointSeq::from_formula: null rule");
  auto shared = std::make_shared<Formula>(std::move(f));
  return PointSeq(metric, horizon,
                  [shared](std::uint64_t n, std::span<double> out) { out[0] = (*shared)(n); });
}

PointSeq PointSeq::from_values(Metric metric, std::vector<double> values) {
  return from_vector_values(metric, std::move(values), 1);
}

PointSeq PointSeq::from_vector_values(Metric metric, std::vector<double> values,
                                      std::uint32_t dim) {
  if (metric.dim() != dim)
    throw std::invalid_argument("PointSeq: value dimension does not match metric");
  if (values.empty() || values.size() % dim != 0)
    throw std::invalid_argument("PointSeq: value buffer size must be a multiple of dim");
  for (double v : values)
    if (!std::isfinite(v)) throw std::domain_error("PointSeq: non-finite value");
  Horizon h(values.size() / dim);
  auto shared = std::make_shared<std::vector<double>>(std::move(values));
  return PointSeq(metric, h, [shared, dim](std::uint64_t n, std::span<double> out) {
    for (std::uint32_t i = 0; i < dim; ++i) out[i] = (*shared)[(n - 1) * dim + i];
  });
}

void PointSeq::value(std::uint64_t n, std::span<double> out) const {
  if (n < 1 || n > horizon_.value())
    throw std::domain_error("PointSeq: index outside [1, horizon]");
  rule_(n, out);
}

double PointSeq::scalar(std::uint64_t n) const {
  double v;
  value(n, std::span<double>(&v, 1));
  return v;
}

PointSeq PointSeq::truncated(Horizon shorter) const {
  if (shorter.value() > horizon_.value())
    throw std::invalid_argument("PointSeq::truncated: cannot extend the horizon");
  return PointSeq(metric_, shorter, rule_);
}

std::vector<double> PointSeq::materialize() const {
  const std::uint32_t dim = metric_.dim();
  std::vector<double> buf(horizon_.value() * dim);
  for (std::uint64_t n = 1; n <= horizon_.value(); ++n)
    rule_(n, std::span<double>(buf.data() + (n - 1) * dim, dim));
  for (double v : buf)
    if (!std::isfinite(v)) throw std::domain_error("PointSeq: non-finite value");
  return buf;
}

namespace {

template <typename Sel>
PointSeq apply_impl(const PointSeq& x, const Sel& s) {
  if (s.length() == 0) throw std::domain_error("apply_selection: empty selection");
  const std::uint32_t dim = x.metric().dim();
  std::vector<double> buf;
  buf.resize(s.length() * dim);
  for (std::uint64_t n = 1; n <= s.length(); ++n) {
    std::uint64_t idx = s.at(n);
    if (idx > x.horizon().value())
      throw std::domain_error("apply_selection: entry beyond sequence horizon");
    x.value(idx, std::span<double>(buf.data() + (n - 1) * dim, dim));
  }
  return PointSeq::from_vector_values(x.metric(), std::move(buf), dim);
}

}  // namespace

PointSeq apply_selection(const PointSeq& x, const SubseqPrefix& s) { return apply_impl(x, s); }
PointSeq apply_selection(const PointSeq& x, const PermPrefix& p) { return apply_impl(x, p); }

}  // namespace iclab
