#include "iclab/families.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iclab/serialize.hpp"

namespace iclab {

namespace {

bool is_square(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

double typewriter_eval(std::uint64_t n, double x) {
  // n = 2^k + j with 0 <= j < 2^k; the n-th function marks the closed dyadic
  // interval [j 2^-k, (j+1) 2^-k], so every x is hit once per stage.
  std::uint64_t k = 63 - std::countl_zero(n);
  std::uint64_t j = n - (1ull << k);
  double t = x * static_cast<double>(1ull << k);
  return (t >= static_cast<double>(j) && t <= static_cast<double>(j + 1)) ? 1.0 : 0.0;
}

bool near_small_denominator(double x) {
  for (int q = 1; q <= 8; ++q)
    for (int p = 0; p <= q; ++p)
      if (std::fabs(x - static_cast<double>(p) / q) < 1e-6) return true;
  return false;
}

}  // namespace

FunctionFamily::FunctionFamily(FamilyKind kind, std::string name)
    : kind_(kind), name_(std::move(name)) {}

FunctionFamily FunctionFamily::alternating() {
  return FunctionFamily(FamilyKind::alternating, "alternating");
}
FunctionFamily FunctionFamily::power_x() { return FunctionFamily(FamilyKind::power_x, "powerx"); }
FunctionFamily FunctionFamily::sin_pi() { return FunctionFamily(FamilyKind::sin_pi, "sinpi"); }
FunctionFamily FunctionFamily::typewriter() {
  return FunctionFamily(FamilyKind::typewriter, "typewriter");
}
FunctionFamily FunctionFamily::square_indicator() {
  return FunctionFamily(FamilyKind::square_indicator, "square-indicator");
}

FunctionFamily FunctionFamily::table_backed(const std::string& path) {
  FunctionFamily fam(FamilyKind::table_backed, "table:" + path);
  std::ifstream in(path);
  if (!in) throw config_error("table family: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw config_error("table family: empty file");
  {
    std::istringstream header(line);
    std::string cell;
    if (!std::getline(header, cell, ',') || cell != "x")
      throw config_error("table family: header must start with 'x'");
    while (std::getline(header, cell, ',')) fam.table_xs_.push_back(std::stod(cell));
  }
  if (fam.table_xs_.empty()) throw config_error("table family: no x columns");
  fam.table_values_.resize(fam.table_xs_.size());
  std::uint64_t expect = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw config_error("table family: bad row");
    if (std::stoull(cell) != expect)
      throw config_error("table family: rows must cover n = 1.. contiguously");
    for (std::size_t c = 0; c < fam.table_xs_.size(); ++c) {
      if (!std::getline(row, cell, ','))
        throw config_error("table family: short row at n=" + std::to_string(expect));
      fam.table_values_[c].push_back(std::stod(cell));
    }
    ++expect;
  }
  if (expect <= 2) throw config_error("table family: need at least 2 rows");
  return fam;
}

FunctionFamily FunctionFamily::by_name(const std::string& name) {
  if (name == "alternating") return alternating();
  if (name == "powerx") return power_x();
  if (name == "sinpi") return sin_pi();
  if (name == "typewriter") return typewriter();
  if (name == "square-indicator") return square_indicator();
  if (name.rfind("table:", 0) == 0) return table_backed(name.substr(6));
  throw config_error("unknown family: " + name);
}

double FunctionFamily::eval(std::uint64_t n, double x) const {
  switch (kind_) {
    case FamilyKind::alternating:
      return (n % 2 == 0) ? 1.0 : -1.0;
    case FamilyKind::power_x:
      return std::pow(x, static_cast<double>(n));
    case FamilyKind::sin_pi:
      return std::sin(static_cast<double>(n) * 3.14159265358979323846 * x);
    case FamilyKind::typewriter:
      return typewriter_eval(n, x);
    case FamilyKind::square_indicator:
      return is_square(n) ? 1.0 : 0.0;
    case FamilyKind::table_backed: {
      for (std::size_t c = 0; c < table_xs_.size(); ++c)
        if (table_xs_[c] == x) return table_values_[c].at(n - 1);
      throw std::domain_error("table family: x is not a table column");
    }
  }
  return 0;
}

PointSeq FunctionFamily::slice(double x, Horizon horizon) const {
  if (kind_ == FamilyKind::table_backed && horizon.value() > table_rows())
    throw std::domain_error("table family: horizon exceeds table rows");
  auto self = *this;
  return PointSeq::from_formula(Metric::real_abs(), horizon,
                                [self, x](std::uint64_t n) { return self.eval(n, x); });
}

std::vector<double> FunctionFamily::table_points() const {
  if (kind_ != FamilyKind::table_backed)
    throw std::logic_error("table_points: not a table family");
  return table_xs_;
}

std::uint64_t FunctionFamily::table_rows() const {
  if (kind_ != FamilyKind::table_backed) return 0;
  return table_values_.front().size();
}

std::vector<double> DomainSampler::sample(rng::Stream stream,
                                          bool reject_small_denominator) const {
  if (count < 1) throw config_error("DomainSampler: count must be >= 1");
  std::vector<double> xs;
  xs.reserve(count);
  if (kind == Kind::uniform_grid) {
    for (std::uint64_t i = 0; i < count; ++i) {
      double x = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      if (reject_small_denominator && near_small_denominator(x))
        throw config_error("grid sampler: midpoint grid too coarse for this family");
      xs.push_back(x);
    }
    return xs;
  }
  rng::Drawer draw(stream.child(rng::kSaltDomain));
  while (xs.size() < count) {
    double x = draw.unit();
    if (reject_small_denominator && near_small_denominator(x)) continue;
    xs.push_back(x);
  }
  return xs;
}

PointSeq sequence_by_name(const std::string& spec, Horizon horizon) {
  if (spec == "harmonic")
    return PointSeq::from_formula(Metric::real_abs(), horizon,
                                  [](std::uint64_t n) { return 1.0 / static_cast<double>(n); });
  if (spec == "alternating")
    return PointSeq::from_formula(Metric::real_abs(), horizon,
                                  [](std::uint64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; });
  if (spec == "square-indicator")
    return PointSeq::from_formula(Metric::real_abs(), horizon,
                                  [](std::uint64_t n) { return is_square(n) ? 1.0 : 0.0; });
  if (spec.rfind("constant:", 0) == 0) {
    double c = std::stod(spec.substr(9));
    return PointSeq::from_formula(Metric::real_abs(), horizon, [c](std::uint64_t) { return c; });
  }
  if (spec.rfind("csv:", 0) == 0) return read_point_seq_csv(spec.substr(4));
  auto at = spec.find("@x=");
  if (at != std::string::npos) {
    FunctionFamily fam = FunctionFamily::by_name(spec.substr(0, at));
    double x = std::stod(spec.substr(at + 3));
    return fam.slice(x, horizon);
  }
  throw config_error("unknown sequence: " + spec);
}

}  // namespace iclab
