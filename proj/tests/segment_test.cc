#include <gtest/gtest.h>

#include "sifkit/error.h"
#include "sifkit/segment.h"
#include "sifkit/sif.h"
#include "support/corpus.h"

namespace sifkit {
namespace {

const std::string kMixed = "若$x>0$,如图$\\FigureID{ab12}$,则$\\SIFBlank$";

TEST(Seg, MixedExample) {
  const auto segs = seg(kMixed);
  const std::vector<Segment> expect = {Segment::text("若"), Segment::formula("x>0"), Segment::text(",如图"),
                                       Segment::figure("ab12"), Segment::text(",则"), Segment::blank()};
  EXPECT_EQ(segs.segments(), expect);
  EXPECT_TRUE(segs.masked_kinds().empty());
}

TEST(Seg, MaskFgm) {
  const auto segs = seg(kMixed, "fgm");
  EXPECT_EQ(segs.segments(), seg(kMixed).segments());
  EXPECT_TRUE(segs.is_masked(SegmentKind::Formula));
  EXPECT_TRUE(segs.is_masked(SegmentKind::Figure));
  EXPECT_TRUE(segs.is_masked(SegmentKind::FigureFormula));
  EXPECT_TRUE(segs.is_masked(SegmentKind::QuesMark));
  EXPECT_TRUE(segs.is_masked(SegmentKind::Tag));
  EXPECT_TRUE(segs.is_masked(SegmentKind::Sep));
  EXPECT_FALSE(segs.is_masked(SegmentKind::Text));
  EXPECT_EQ(render(segs), "若[FORMULA],如图[FIGURE],则[MARK]");
}

TEST(Seg, PlainText) { EXPECT_EQ(seg("纯文本").segments(), std::vector{Segment::text("纯文本")}); }

TEST(Seg, EmptyInput) { EXPECT_TRUE(seg("").empty()); }

TEST(Seg, KindsOfSpecials) {
  const auto s = seg("$\\SIFTag{options}$甲$\\SIFSep$乙$\\SIFChoice$$\\FormFigureID{f}$$\\FigureBase64{AQID}$");
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s[0], Segment::tag("options"));
  EXPECT_EQ(s[2], Segment::sep());
  EXPECT_EQ(s[4], Segment::choice());
  EXPECT_EQ(s[5], Segment::figure_formula("f"));
  EXPECT_EQ(s[6], Segment::figure_base64("AQID"));
}

TEST(Seg, StyledTextIsAFormulaSegment) {
  const auto s = seg("则吾$\\textf{斯,u}$役");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1], Segment::formula("\\textf{斯,u}"));
}

TEST(Seg, RejectsInvalid) {
  try {
    seg("x=1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSif);
  }
}

TEST(Seg, BadSymbolFlag) { EXPECT_THROW(seg("a", "q"), Error); }

TEST(Filter, Examples) {
  const auto three = seg("$a$和$b$和$c$");
  EXPECT_EQ(filter(three, SegmentKind::Formula).size(), 3u);
  EXPECT_TRUE(filter(SegmentList(), SegmentKind::Text).empty());
  EXPECT_EQ(filter(seg(kMixed), SegmentKind::Figure), std::vector{Segment::figure("ab12")});
}

std::vector<std::string> valid_corpus() {
  std::vector<std::string> out = {kMixed, "", "纯文本"};
  for (const auto& g : testing::golden_contents())
    if (is_sif(g)) out.push_back(g);
  testing::Gen gen(21);
  for (int i = 0; i < 1000; ++i) {
    std::string s = to_sif(gen.raw_text());
    if (gen.chance(0.5)) s += gen.sif_special();
    s += to_sif(gen.raw_text());
    out.push_back(s);
  }
  return out;
}

TEST(Seg, RoundTripAndPartition) {
  for (const auto& s : valid_corpus()) {
    ASSERT_TRUE(is_sif(s)) << s;
    const auto segs = seg(s);
    EXPECT_EQ(render(segs), s);
    for (std::size_t i = 1; i < segs.size(); ++i)
      EXPECT_FALSE(segs[i].kind == SegmentKind::Text && segs[i - 1].kind == SegmentKind::Text);
    for (const auto& x : segs.segments())
      if (x.kind == SegmentKind::Text) {
        EXPECT_FALSE(x.payload.empty());
      }
    const auto masked = seg(s, "tfgm");
    EXPECT_EQ(masked.segments(), segs.segments());
  }
}

}  // namespace
}  // namespace sifkit
