#include "sifkit/segment.h"

#include "sif_grammar.h"
#include "sifkit/error.h"
#include "sifkit/sif.h"

namespace sifkit {

std::set<SegmentKind> symbol_kinds(std::string_view flags) {
  std::set<SegmentKind> out;
  for (char c : flags) {
    switch (c) {
      case 't': out.insert(SegmentKind::Text); break;
      case 'f': out.insert(SegmentKind::Formula); break;
      case 'g':
        out.insert(SegmentKind::Figure);
        out.insert(SegmentKind::FigureFormula);
        break;
      case 'm':
        out.insert(SegmentKind::QuesMark);
        out.insert(SegmentKind::Tag);
        out.insert(SegmentKind::Sep);
        break;
      default:
        throw Error(ErrorCode::InvalidArgument, std::string("unknown symbol flag '") + c + "'");
    }
  }
  return out;
}

SegmentList seg_unchecked(std::string_view sif, std::string_view symbol) {
  auto masked = symbol_kinds(symbol);
  std::vector<Segment> out;
  auto push_text = [&](std::string_view t) {
    if (t.empty()) return;
    if (!out.empty() && out.back().kind == SegmentKind::Text) out.back().payload.append(t);
    else out.push_back(Segment::text(std::string(t)));
  };
  std::size_t pos = 0;
  for (const auto& r : grammar::math_regions(sif)) {
    if (r.close == std::string_view::npos) break;
    push_text(sif.substr(pos, r.open - pos));
    const auto body = sif.substr(r.open + 1, r.close - r.open - 1);
    const auto c = grammar::classify(body);
    switch (c.kind) {
      case grammar::BodyKind::Formula: out.push_back(Segment::formula(std::string(body))); break;
      case grammar::BodyKind::Blank: out.push_back(Segment::blank()); break;
      case grammar::BodyKind::Choice: out.push_back(Segment::choice()); break;
      case grammar::BodyKind::Sep: out.push_back(Segment::sep()); break;
      case grammar::BodyKind::Tag: out.push_back(Segment::tag(c.payload)); break;
      case grammar::BodyKind::FigureId: out.push_back(Segment::figure(c.payload)); break;
      case grammar::BodyKind::FigureBase64: out.push_back(Segment::figure_base64(c.payload)); break;
      case grammar::BodyKind::FormFigureId: out.push_back(Segment::figure_formula(c.payload)); break;
    }
    pos = r.close + 1;
  }
  push_text(sif.substr(pos));
  return SegmentList(std::move(out), std::move(masked));
}

SegmentList seg(std::string_view sif, std::string_view symbol) {
  const auto report = validate(sif);
  if (!report.valid) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::NotSif, std::string(to_string(v.code)) + ": " + v.message, std::nullopt, v.span.begin);
  }
  return seg_unchecked(sif, symbol);
}

std::vector<Segment> filter(const SegmentList& segs, SegmentKind kind) { return segs.filter(kind); }

}  // namespace sifkit
