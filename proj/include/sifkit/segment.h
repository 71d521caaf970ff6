#pragma once

#include <set>
#include <string_view>

#include "sifkit/item.h"

namespace sifkit {

// Kinds covered by a symbol flag string over "tfgm":
//   t: Text, f: Formula, g: Figure and FigureFormula, m: QuesMark, Tag, Sep.
// Throws InvalidArgument on any other character.
std::set<SegmentKind> symbol_kinds(std::string_view flags);

// Splits a valid item string into typed segments and masks the kinds in
// `symbol`. Adjacent text is coalesced. Throws NotSif.
SegmentList seg(std::string_view sif, std::string_view symbol = "");

// Same, without validating first. The input must already be known valid.
SegmentList seg_unchecked(std::string_view sif, std::string_view symbol = "");

std::vector<Segment> filter(const SegmentList& segs, SegmentKind kind);

}  // namespace sifkit
