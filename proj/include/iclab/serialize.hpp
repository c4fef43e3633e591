#pragma once

#include <iosfwd>
#include <string>

#include "iclab/index_set.hpp"
#include "iclab/point_seq.hpp"
#include "iclab/selection.hpp"

namespace iclab {

// IndexSet text format: an optional "# horizon=N" line, then either one
// decimal natural per line or maximal runs "a..b" (inclusive). Reader accepts
// both; without a horizon line the largest element is used.
void write_index_set(std::ostream& out, const IndexSet& set, bool run_length);
IndexSet read_index_set(std::istream& in);

// CoinVector: single line "len=<N> hex=<packed bits>", MSB-first per byte
// (position 8b+1 is the top bit of byte b). Padding bits must be zero.
void write_coin_vector(std::ostream& out, const CoinVector& t);
CoinVector read_coin_vector(std::istream& in);

// Selections: "# kind=<subseq|perm> horizon=<H> length=<L>" then one decimal
// entry per line.
void write_subseq(std::ostream& out, const SubseqPrefix& s);
SubseqPrefix read_subseq(std::istream& in);
void write_perm(std::ostream& out, const PermPrefix& p);
PermPrefix read_perm(std::istream& in);

// Point sequences from CSV rows "index,value[,value...]"; indices must cover
// 1..N contiguously (any order). One value column gives the real line, more
// give Euclidean space of that dimension.
PointSeq read_point_seq_csv(const std::string& path);

}  // namespace iclab
