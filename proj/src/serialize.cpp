#include "iclab/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace iclab {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::domain_error("bad hex digit");
}

// "key=value" scanning inside a header line
std::string header_field(const std::string& line, const std::string& key) {
  auto pos = line.find(key + "=");
  if (pos == std::string::npos) return {};
  pos += key.size() + 1;
  auto end = line.find(' ', pos);
  return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

}  // namespace

void write_index_set(std::ostream& out, const IndexSet& set, bool run_length) {
  out << "# horizon=" << set.horizon().value() << "\n";
  const auto& e = set.elements();
  if (!run_length) {
    for (auto n : e) out << n << "\n";
    return;
  }
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    while (j + 1 < e.size() && e[j + 1] == e[j] + 1) ++j;
    if (j == i)
      out << e[i] << "\n";
    else
      out << e[i] << ".." << e[j] << "\n";
    i = j + 1;
  }
}

IndexSet read_index_set(std::istream& in) {
  std::vector<std::uint64_t> elems;
  std::uint64_t horizon = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto h = header_field(line, "horizon");
      if (!h.empty()) horizon = std::stoull(h);
      continue;
    }
    auto dots = line.find("..");
    if (dots == std::string::npos) {
      elems.push_back(std::stoull(line));
    } else {
      std::uint64_t a = std::stoull(line.substr(0, dots));
      std::uint64_t b = std::stoull(line.substr(dots + 2));
      if (b < a) throw std::domain_error("index set run: end before start");
      for (std::uint64_t n = a; n <= b; ++n) elems.push_back(n);
    }
  }
  std::sort(elems.begin(), elems.end());
  if (horizon == 0) horizon = elems.empty() ? 2 : elems.back();
  return IndexSet(std::move(elems), Horizon(std::max<std::uint64_t>(horizon, 2)));
}

void write_coin_vector(std::ostream& out, const CoinVector& t) {
  const std::uint64_t n = t.length();
  std::vector<std::uint8_t> bytes((n + 7) / 8, 0);
  for (std::uint64_t j = 1; j <= n; ++j)
    if (t.bit(j)) bytes[(j - 1) / 8] |= static_cast<std::uint8_t>(0x80u >> ((j - 1) % 8));
  out << "len=" << n << " hex=";
  for (auto b : bytes) out << kHexDigits[b >> 4] << kHexDigits[b & 0xF];
  out << "\n";
}

CoinVector read_coin_vector(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::domain_error("coin vector: empty input");
  auto len_s = header_field(line, "len");
  auto hex_s = header_field(line, "hex");
  if (len_s.empty() || hex_s.empty()) throw std::domain_error("coin vector: bad header");
  std::uint64_t n = std::stoull(len_s);
  if (hex_s.size() != 2 * ((n + 7) / 8)) throw std::domain_error("coin vector: length mismatch");
  std::vector<std::uint8_t> bits(n, 0);
  for (std::uint64_t j = 1; j <= n; ++j) {
    int byte = hex_value(hex_s[2 * ((j - 1) / 8)]) * 16 + hex_value(hex_s[2 * ((j - 1) / 8) + 1]);
    bits[j - 1] = (byte >> (7 - ((j - 1) % 8))) & 1;
  }
  // padding bits beyond n must be zero
  for (std::uint64_t j = n + 1; j <= 8 * ((n + 7) / 8); ++j) {
    int byte = hex_value(hex_s[2 * ((j - 1) / 8)]) * 16 + hex_value(hex_s[2 * ((j - 1) / 8) + 1]);
    if ((byte >> (7 - ((j - 1) % 8))) & 1) throw std::domain_error("coin vector: nonzero padding");
  }
  return CoinVector(std::move(bits));
}

namespace {

std::vector<std::uint64_t> read_entry_lines(std::istream& in, std::uint64_t* horizon,
                                            std::string* kind) {
  std::vector<std::uint64_t> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto h = header_field(line, "horizon");
      if (!h.empty()) *horizon = std::stoull(h);
      auto k = header_field(line, "kind");
      if (!k.empty()) *kind = k;
      continue;
    }
    entries.push_back(std::stoull(line));
  }
  return entries;
}

}  // namespace

void write_subseq(std::ostream& out, const SubseqPrefix& s) {
  out << "# kind=subseq horizon=" << s.source_horizon().value() << " length=" << s.length()
      << "\n";
  for (auto e : s.entries()) out << e << "\n";
}

SubseqPrefix read_subseq(std::istream& in) {
  std::uint64_t horizon = 0;
  std::string kind;
  auto entries = read_entry_lines(in, &horizon, &kind);
  if (!kind.empty() && kind != "subseq") throw std::domain_error("expected kind=subseq");
  if (horizon == 0) horizon = entries.empty() ? 2 : entries.back();
  return SubseqPrefix(std::move(entries), Horizon(std::max<std::uint64_t>(horizon, 2)));
}

void write_perm(std::ostream& out, const PermPrefix& p) {
  out << "# kind=perm horizon=" << p.source_horizon().value() << " length=" << p.length() << "\n";
  for (auto e : p.entries()) out << e << "\n";
}

PermPrefix read_perm(std::istream& in) {
  std::uint64_t horizon = 0;
  std::string kind;
  auto entries = read_entry_lines(in, &horizon, &kind);
  if (!kind.empty() && kind != "perm") throw std::domain_error("expected kind=perm");
  if (horizon == 0) horizon = entries.empty() ? 2 : *std::max_element(entries.begin(), entries.end());
  return PermPrefix(std::move(entries), Horizon(std::max<std::uint64_t>(horizon, 2)));
}

PointSeq read_point_seq_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open sequence file: " + path);
  std::map<std::uint64_t, std::vector<double>> rows;
  std::size_t dim = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) continue;
    std::uint64_t idx;
    try {
      idx = std::stoull(cell);
    } catch (const std::exception&) {
      if (first) { first = false; continue; }  // tolerate one header line
      throw config_error("sequence csv: bad index in " + path);
    }
    first = false;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.empty()) throw config_error("sequence csv: row without values");
    if (dim == 0) dim = vals.size();
    if (vals.size() != dim) throw config_error("sequence csv: inconsistent dimension");
    if (!rows.emplace(idx, std::move(vals)).second)
      throw config_error("sequence csv: duplicate index");
  }
  if (rows.size() < 2) throw config_error("sequence csv: need at least 2 rows");
  std::uint64_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * dim);
  std::uint64_t expect = 1;
  for (auto& [idx, vals] : rows) {
    if (idx != expect) throw config_error("sequence csv: indices must cover 1..N");
    for (double v : vals) flat.push_back(v);
    ++expect;
  }
  Metric metric = dim == 1 ? Metric::real_abs() : Metric::euclid(static_cast<std::uint32_t>(dim));
  return PointSeq::from_vector_values(metric, std::move(flat), static_cast<std::uint32_t>(dim));
}

}  // namespace iclab
