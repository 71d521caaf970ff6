#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sifkit {

struct Quality {
  int score = 0;     // 1..5
  int scenario = 0;  // 1..3; serialized as "label"

  bool operator==(const Quality&) const = default;
};

// One educational item. Options are independent SIF strings.
struct SifItem {
  std::optional<std::string> id;
  std::string content;
  std::optional<std::vector<std::string>> options;
  std::optional<std::string> answer;
  std::optional<std::vector<std::string>> knowledge;
  std::optional<double> difficulty;
  std::optional<double> discrimination;
  std::optional<Quality> quality;

  bool operator==(const SifItem&) const = default;
};

// Parses one JSONL record. Unrecognized fields are ignored.
// Throws MalformedJson, MissingContent or RangeViolation.
SifItem parse_record(std::string_view json_text);
SifItem item_from_json(const nlohmann::json& j);
nlohmann::json item_to_json(const SifItem& item);

// Checks the range invariants of side fields; throws RangeViolation.
void check_item(const SifItem& item);

enum class SegmentKind : std::uint8_t { Text, Formula, Figure, FigureFormula, Tag, Sep, QuesMark };

std::string_view to_string(SegmentKind kind);

enum class FigureEncoding : std::uint8_t { Uuid, Base64 };

struct Segment {
  SegmentKind kind = SegmentKind::Text;
  // Text content, LaTeX body, figure uuid / base64 payload, tag name, or
  // "Blank" / "Choice" for question marks. Empty for separators.
  std::string payload;
  // Only meaningful for Figure segments.
  FigureEncoding encoding = FigureEncoding::Uuid;

  bool operator==(const Segment&) const = default;

  static Segment text(std::string s) { return {SegmentKind::Text, std::move(s)}; }
  static Segment formula(std::string s) { return {SegmentKind::Formula, std::move(s)}; }
  static Segment figure(std::string uuid) { return {SegmentKind::Figure, std::move(uuid)}; }
  static Segment figure_base64(std::string data) {
    return {SegmentKind::Figure, std::move(data), FigureEncoding::Base64};
  }
  static Segment figure_formula(std::string uuid) {
    return {SegmentKind::FigureFormula, std::move(uuid)};
  }
  static Segment tag(std::string name) { return {SegmentKind::Tag, std::move(name)}; }
  static Segment sep() { return {SegmentKind::Sep, {}}; }
  static Segment blank() { return {SegmentKind::QuesMark, "Blank"}; }
  static Segment choice() { return {SegmentKind::QuesMark, "Choice"}; }
};

// Placeholder emitted for a masked segment kind.
std::string_view placeholder(SegmentKind kind);

// SIF source text of a single unmasked segment.
std::string render_segment(const Segment& seg);

class SegmentList {
 public:
  SegmentList() = default;
  explicit SegmentList(std::vector<Segment> segments, std::set<SegmentKind> masked = {})
      : segments_(std::move(segments)), masked_(std::move(masked)) {}

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const std::set<SegmentKind>& masked_kinds() const noexcept { return masked_; }
  bool is_masked(SegmentKind kind) const { return masked_.count(kind) != 0; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }
  const Segment& operator[](std::size_t i) const { return segments_[i]; }

  // Returns a copy with `kinds` added to the masked set.
  SegmentList masked(const std::set<SegmentKind>& kinds) const;

  // Segments of the given kind, in order.
  std::vector<Segment> filter(SegmentKind kind) const;

  bool operator==(const SegmentList&) const = default;

 private:
  std::vector<Segment> segments_;
  std::set<SegmentKind> masked_;
};

// Concatenates segments back into SIF; masked kinds become placeholders.
std::string render(const SegmentList& segs);

}  // namespace sifkit
