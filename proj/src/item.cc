#include "sifkit/item.h"

#include <cmath>

#include "sifkit/error.h"

namespace sifkit {

using nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorCode::MalformedJson, std::string(field) + " must be an array");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string())
      throw Error(ErrorCode::MalformedJson, std::string(field) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

double number(const json& j, const char* field) {
  if (!j.is_number()) throw Error(ErrorCode::MalformedJson, std::string(field) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* field) {
  if (!j.is_number_integer())
    throw Error(ErrorCode::MalformedJson, std::string(field) + " must be an integer");
  return j.get<int>();
}

}  // namespace

void check_item(const SifItem& item) {
  if (item.difficulty && !(*item.difficulty >= 0.0 && *item.difficulty <= 1.0))
    throw Error(ErrorCode::RangeViolation, "difficulty must lie in [0,1]");
  if (item.discrimination && !(*item.discrimination >= -1.0 && *item.discrimination <= 1.0))
    throw Error(ErrorCode::RangeViolation, "discrimination must lie in [-1,1]");
  if (item.quality) {
    if (item.quality->score < 1 || item.quality->score > 5)
      throw Error(ErrorCode::RangeViolation, "quality score must lie in [1,5]");
    if (item.quality->scenario < 1 || item.quality->scenario > 3)
      throw Error(ErrorCode::RangeViolation, "quality label must be 1, 2 or 3");
  }
}

SifItem item_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "record must be a JSON object");
  SifItem item;
  auto it = j.find("content");
  if (it == j.end() || it->is_null()) throw Error(ErrorCode::MissingContent, "field \"content\" is required");
  if (!it->is_string()) throw Error(ErrorCode::MalformedJson, "content must be a string");
  item.content = it->get<std::string>();

  if (auto f = j.find("id"); f != j.end() && !f->is_null()) {
    if (f->is_string()) item.id = f->get<std::string>();
    else if (f->is_number_integer()) item.id = std::to_string(f->get<long long>());
    else throw Error(ErrorCode::MalformedJson, "id must be a string");
  }
  if (auto f = j.find("options"); f != j.end() && !f->is_null()) item.options = string_list(*f, "options");
  if (auto f = j.find("answer"); f != j.end() && !f->is_null()) {
    if (!f->is_string()) throw Error(ErrorCode::MalformedJson, "answer must be a string");
    item.answer = f->get<std::string>();
  }
  if (auto f = j.find("knowledge"); f != j.end() && !f->is_null())
    item.knowledge = string_list(*f, "knowledge");
  if (auto f = j.find("difficulty"); f != j.end() && !f->is_null()) item.difficulty = number(*f, "difficulty");
  if (auto f = j.find("discrimination"); f != j.end() && !f->is_null())
    item.discrimination = number(*f, "discrimination");
  if (auto f = j.find("quality"); f != j.end() && !f->is_null()) {
    if (!f->is_object()) throw Error(ErrorCode::MalformedJson, "quality must be an object");
    Quality q;
    auto s = f->find("score");
    auto l = f->find("label");
    if (s == f->end() || l == f->end())
      throw Error(ErrorCode::MalformedJson, "quality needs \"score\" and \"label\"");
    q.score = integer(*s, "quality.score");
    q.scenario = integer(*l, "quality.label");
    item.quality = q;
  }
  check_item(item);
  return item;
}

SifItem parse_record(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  return item_from_json(j);
}

json item_to_json(const SifItem& item) {
  json j = json::object();
  if (item.id) j["id"] = *item.id;
  j["content"] = item.content;
  if (item.options) j["options"] = *item.options;
  if (item.answer) j["answer"] = *item.answer;
  if (item.knowledge) j["knowledge"] = *item.knowledge;
  if (item.difficulty) j["difficulty"] = *item.difficulty;
  if (item.discrimination) j["discrimination"] = *item.discrimination;
  if (item.quality) j["quality"] = {{"score", item.quality->score}, {"label", item.quality->scenario}};
  return j;
}

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Text: return "Text";
    case SegmentKind::Formula: return "Formula";
    case SegmentKind::Figure: return "Figure";
    case SegmentKind::FigureFormula: return "FigureFormula";
    case SegmentKind::Tag: return "Tag";
    case SegmentKind::Sep: return "Sep";
    case SegmentKind::QuesMark: return "QuesMark";
  }
  return "?";
}

std::string_view placeholder(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Text: return "[TEXT]";
    case SegmentKind::Formula: return "[FORMULA]";
    case SegmentKind::Figure:
    case SegmentKind::FigureFormula: return "[FIGURE]";
    case SegmentKind::Tag: return "[TAG]";
    case SegmentKind::Sep: return "[SEP]";
    case SegmentKind::QuesMark: return "[MARK]";
  }
  return "";
}

std::string render_segment(const Segment& seg) {
  switch (seg.kind) {
    case SegmentKind::Text: return seg.payload;
    case SegmentKind::Formula: return "$" + seg.payload + "$";
    case SegmentKind::Figure:
      return seg.encoding == FigureEncoding::Base64 ? "$\\FigureBase64{" + seg.payload + "}$"
                                                    : "$\\FigureID{" + seg.payload + "}$";
    case SegmentKind::FigureFormula: return "$\\FormFigureID{" + seg.payload + "}$";
    case SegmentKind::Tag: return "$\\SIFTag{" + seg.payload + "}$";
    case SegmentKind::Sep: return "$\\SIFSep$";
    case SegmentKind::QuesMark: return "$\\SIF" + seg.payload + "$";
  }
  return {};
}

SegmentList SegmentList::masked(const std::set<SegmentKind>& kinds) const {
  auto m = masked_;
  m.insert(kinds.begin(), kinds.end());
  return SegmentList(segments_, std::move(m));
}

std::vector<Segment> SegmentList::filter(SegmentKind kind) const {
  std::vector<Segment> out;
  for (const auto& s : segments_)
    if (s.kind == kind) out.push_back(s);
  return out;
}

std::string render(const SegmentList& segs) {
  std::string out;
  for (const auto& s : segs.segments()) {
    if (segs.is_masked(s.kind)) out += placeholder(s.kind);
    else out += render_segment(s);
  }
  return out;
}

}  // namespace sifkit
