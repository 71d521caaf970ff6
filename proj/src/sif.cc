#include "sifkit/sif.h"

#include <algorithm>
#include <array>

#include "sif_grammar.h"
#include "sifkit/error.h"
#include "sifkit/formula.h"
#include "sifkit/utf8.h"

namespace sifkit {

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::NonSifChar: return "NonSifChar";
    case ViolationCode::BareMathToken: return "BareMathToken";
    case ViolationCode::UnbalancedDollar: return "UnbalancedDollar";
    case ViolationCode::UnbalancedBrace: return "UnbalancedBrace";
    case ViolationCode::BadStyleLabel: return "BadStyleLabel";
    case ViolationCode::BadFigureRef: return "BadFigureRef";
    case ViolationCode::BadSpecialToken: return "BadSpecialToken";
  }
  return "?";
}

nlohmann::json report_to_json(const ValidationReport& report) {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : report.violations)
    vs.push_back({{"code", to_string(v.code)}, {"span", {v.span.begin, v.span.end}}, {"message", v.message}});
  return {{"valid", report.valid}, {"violations", vs}};
}

namespace grammar {

std::vector<Region> math_regions(std::string_view s) {
  std::vector<Region> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '$') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < s.size() && s[j] != '$') j += (s[j] == '\\') ? 2 : 1;
    if (j >= s.size()) {
      out.push_back({i, std::string_view::npos});
      break;
    }
    out.push_back({i, j});
    i = j + 1;
  }
  return out;
}

namespace {

// "\Cmd{payload}" with a brace-free, whitespace-free, non-empty payload.
bool braced_payload(std::string_view body, std::string_view cmd, std::string& payload) {
  if (!body.starts_with(cmd)) return false;
  auto rest = body.substr(cmd.size());
  if (rest.size() < 3 || rest.front() != '{' || rest.back() != '}') return false;
  auto inner = rest.substr(1, rest.size() - 2);
  for (char c : inner)
    if (c == '{' || c == '}' || c == '$' || utf8::is_ascii_space(static_cast<unsigned char>(c))) return false;
  payload = std::string(inner);
  return true;
}

}  // namespace

BodyClass classify(std::string_view body) {
  std::string payload;
  if (body == "\\SIFBlank") return {BodyKind::Blank, {}};
  if (body == "\\SIFChoice") return {BodyKind::Choice, {}};
  if (body == "\\SIFSep") return {BodyKind::Sep, {}};
  if (braced_payload(body, "\\SIFTag", payload)) return {BodyKind::Tag, payload};
  if (braced_payload(body, "\\FigureID", payload)) return {BodyKind::FigureId, payload};
  if (braced_payload(body, "\\FormFigureID", payload)) return {BodyKind::FormFigureId, payload};
  if (braced_payload(body, "\\FigureBase64", payload)) return {BodyKind::FigureBase64, payload};
  return {BodyKind::Formula, {}};
}

}  // namespace grammar

namespace {

using grammar::BodyKind;

constexpr std::string_view kStyleLabels = "bdituw";

bool is_math_operator(char32_t c) {
  switch (c) {
    case '+': case '-': case '*': case '/': case '=': case '<': case '>': case '^': case '_': case '|':
      return true;
    default:
      return false;
  }
}

bool is_math_class(char32_t c) { return utf8::is_ascii_letter(c) || utf8::is_ascii_digit(c) || is_math_operator(c); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && utf8::is_ascii_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && utf8::is_ascii_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view leading_command(std::string_view s) {
  if (s.empty() || s[0] != '\\') return {};
  std::size_t i = 1;
  while (i < s.size() && utf8::is_ascii_letter(static_cast<unsigned char>(s[i]))) ++i;
  // The only command name with digits.
  if (s.substr(0, i) == "\\FigureBase" && s.substr(i, 2) == "64") i += 2;
  return s.substr(0, i);
}

bool is_figure_command(std::string_view cmd) {
  return cmd == "\\FigureID" || cmd == "\\FormFigureID" || cmd == "\\FigureBase64";
}

bool is_base64(std::string_view p) {
  if (p.empty() || p.size() % 4 != 0) return false;
  std::size_t pad = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const char c = p[i];
    if (c == '=') {
      ++pad;
      continue;
    }
    if (pad > 0) return false;
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' || c == '/';
    if (!ok) return false;
  }
  return pad <= 2;
}

// Length of an underscore run of two or more at i, else 0.
std::size_t blank_run(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && s[j] == '_') ++j;
  return j - i >= 2 ? j - i : 0;
}

// Length of an empty choice bracket "()" / "（）" (blanks allowed inside), else 0.
std::size_t choice_bracket(std::string_view s, std::size_t i) {
  auto d = utf8::decode(s, i);
  char32_t close = 0;
  if (d.cp == '(') close = ')';
  else if (d.cp == 0xFF08) close = 0xFF09;
  else return 0;
  std::size_t j = i + d.len;
  while (j < s.size()) {
    auto e = utf8::decode(s, j);
    if (e.cp == close) return j + e.len - i;
    if (!e.valid || !utf8::is_blankish(e.cp)) return 0;
    j += e.len;
  }
  return 0;
}

// Maximal run of math-class ASCII characters that stops before "__".
// `wrap` tells whether the run must live in math mode.
std::size_t math_run(std::string_view s, std::size_t i, bool& wrap) {
  std::size_t j = i;
  bool has_math = false;
  while (j < s.size()) {
    const auto c = static_cast<unsigned char>(s[j]);
    if (!is_math_class(c)) break;
    if (c == '_' && j + 1 < s.size() && s[j + 1] == '_') break;
    if (!utf8::is_ascii_letter(c)) has_math = true;
    ++j;
  }
  wrap = has_math || j - i == 1;
  return j - i;
}

bool allowed_text_char(char32_t c) {
  if (c == '\t' || c == '\n' || c == '\r') return true;
  if (c >= 0x20 && c < 0x7F) return true;
  return utf8::is_cjk_ideograph(c) || utf8::is_cjk_punct(c);
}

class Checker {
 public:
  explicit Checker(std::string_view s) : s_(s) {}

  ValidationReport run() {
    std::size_t text_begin = 0;
    for (const auto& r : grammar::math_regions(s_)) {
      check_text(text_begin, r.open);
      if (r.close == std::string_view::npos) {
        add(ViolationCode::UnbalancedDollar, r.open, s_.size(), "'$' without a closing '$'");
        text_begin = s_.size();
        break;
      }
      check_math(r.open, r.close);
      text_begin = r.close + 1;
    }
    check_text(text_begin, s_.size());
    std::stable_sort(out_.violations.begin(), out_.violations.end(),
                     [](const Violation& a, const Violation& b) { return a.span.begin < b.span.begin; });
    out_.valid = out_.violations.empty();
    return std::move(out_);
  }

 private:
  void add(ViolationCode code, std::size_t b, std::size_t e, std::string msg) {
    out_.violations.push_back({code, {b, e}, std::move(msg)});
  }

  void check_text(std::size_t begin, std::size_t end) {
    std::string_view chunk = s_.substr(0, end);
    std::size_t i = begin;
    while (i < end) {
      if (auto n = blank_run(chunk, i)) {
        add(ViolationCode::BadSpecialToken, i, i + n, "blank must be written as $\\SIFBlank$");
        i += n;
        continue;
      }
      if (auto n = choice_bracket(chunk, i)) {
        add(ViolationCode::BadSpecialToken, i, i + n, "choice bracket must be written as $\\SIFChoice$");
        i += n;
        continue;
      }
      const auto d = utf8::decode(chunk, i);
      if (d.valid && is_math_class(d.cp)) {
        bool wrap = false;
        const std::size_t n = math_run(chunk, i, wrap);
        if (wrap) add(ViolationCode::BareMathToken, i, i + n, "math token outside $..$");
        i += n;
        continue;
      }
      if (!d.valid) add(ViolationCode::NonSifChar, i, i + 1, "invalid UTF-8 byte");
      else if (!allowed_text_char(d.cp)) add(ViolationCode::NonSifChar, i, i + d.len, "character outside the item charset");
      i += d.len;
    }
  }

  void check_math(std::size_t open, std::size_t close) {
    const std::string_view body = s_.substr(open + 1, close - open - 1);
    const std::size_t base = open + 1;
    const std::size_t region_end = close + 1;
    const std::string_view trimmed = trim(body);
    const std::string_view cmd = leading_command(trimmed);

    if (cmd.starts_with("\\SIF")) {
      const auto k = grammar::classify(body).kind;
      if (k != BodyKind::Blank && k != BodyKind::Choice && k != BodyKind::Sep && k != BodyKind::Tag)
        add(ViolationCode::BadSpecialToken, open, region_end, "unknown or malformed special token");
      return;
    }
    if (is_figure_command(cmd)) {
      const auto c = grammar::classify(body);
      const bool ok = (c.kind == BodyKind::FigureId && cmd == "\\FigureID") ||
                      (c.kind == BodyKind::FormFigureId && cmd == "\\FormFigureID") ||
                      (c.kind == BodyKind::FigureBase64 && cmd == "\\FigureBase64" && is_base64(c.payload));
      if (!ok) add(ViolationCode::BadFigureRef, open, region_end, "malformed figure reference");
      return;
    }
    if (cmd == "\\textf") {
      if (!parse_styled_text(body)) add(ViolationCode::BadStyleLabel, open, region_end, "malformed styled text");
      return;
    }

    std::vector<FormulaToken> toks;
    try {
      toks = linear_tokenize(body);
    } catch (const Error& e) {
      const std::size_t at = base + e.offset().value_or(0);
      if (at < s_.size() && s_[at] == '\\')
        add(ViolationCode::BadSpecialToken, at, std::min(at + 2, region_end - 1), "'\\' does not start a command");
      else
        add(ViolationCode::NonSifChar, at, at + 1, e.detail());
      return;
    }
    std::vector<std::size_t> opens;
    for (const auto& t : toks) {
      const std::size_t at = base + t.offset;
      if (t.kind == TokenKind::Brace) {
        if (t.text == "{") {
          opens.push_back(at);
        } else if (opens.empty()) {
          add(ViolationCode::UnbalancedBrace, at, at + 1, "unmatched '}'");
        } else {
          opens.pop_back();
        }
        continue;
      }
      if (t.kind != TokenKind::Command) continue;
      if (t.text.starts_with("\\SIF"))
        add(ViolationCode::BadSpecialToken, at, at + t.text.size(), "special token must stand alone");
      else if (is_figure_command(t.text))
        add(ViolationCode::BadFigureRef, at, at + t.text.size(), "figure reference must stand alone");
      else if (t.text == "\\textf")
        add(ViolationCode::BadStyleLabel, at, at + t.text.size(), "styled text must stand alone");
    }
    for (auto at : opens) add(ViolationCode::UnbalancedBrace, at, at + 1, "unmatched '{'");
  }

  std::string_view s_;
  ValidationReport out_;
};

}  // namespace

std::optional<StyledText> parse_styled_text(std::string_view body) {
  constexpr std::string_view head = "\\textf{";
  if (!body.starts_with(head) || body.back() != '}') return std::nullopt;
  int depth = 0;
  for (std::size_t i = head.size() - 1; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0 && i != body.size() - 1) return std::nullopt;
  }
  if (depth != 0) return std::nullopt;
  const std::string_view inner = body.substr(head.size(), body.size() - head.size() - 1);
  const auto comma = inner.rfind(',');
  if (comma == std::string_view::npos) return std::nullopt;
  const std::string_view labels = trim(inner.substr(comma + 1));
  if (labels.empty()) return std::nullopt;
  std::size_t last = std::string_view::npos;
  for (char c : labels) {
    const auto pos = kStyleLabels.find(c);
    if (pos == std::string_view::npos) return std::nullopt;
    if (last != std::string_view::npos && pos <= last) return std::nullopt;
    last = pos;
  }
  return StyledText{std::string(inner.substr(0, comma)), std::string(labels)};
}

ValidationReport validate(std::string_view raw) { return Checker(raw).run(); }

std::string to_sif(std::string_view raw) {
  std::string out;
  out.reserve(raw.size() + raw.size() / 4);
  auto convert_text = [&](std::size_t begin, std::size_t end) {
    const std::string_view chunk = raw.substr(0, end);
    std::size_t i = begin;
    while (i < end) {
      if (auto n = blank_run(chunk, i)) {
        out += "$\\SIFBlank$";
        i += n;
        continue;
      }
      if (auto n = choice_bracket(chunk, i)) {
        out += "$\\SIFChoice$";
        i += n;
        continue;
      }
      const auto d = utf8::decode(chunk, i);
      if (d.valid && is_math_class(d.cp)) {
        bool wrap = false;
        const std::size_t n = math_run(chunk, i, wrap);
        if (wrap) out += '$';
        out.append(chunk.substr(i, n));
        if (wrap) out += '$';
        i += n;
        continue;
      }
      out.append(chunk.substr(i, d.len));
      i += d.len;
    }
  };

  std::size_t text_begin = 0;
  for (const auto& r : grammar::math_regions(raw)) {
    convert_text(text_begin, r.open);
    if (r.close == std::string_view::npos) {
      out.append(raw.substr(r.open));
      text_begin = raw.size();
      break;
    }
    out.append(raw.substr(r.open, r.close - r.open + 1));
    text_begin = r.close + 1;
  }
  convert_text(text_begin, raw.size());

  const auto report = validate(out);
  if (!report.valid) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::Unconvertible, std::string(to_string(v.code)) + ": " + v.message, std::nullopt,
                v.span.begin);
  }
  return out;
}

}  // namespace sifkit
