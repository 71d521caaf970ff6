#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sifkit {

enum class ViolationCode {
  NonSifChar,
  BareMathToken,
  UnbalancedDollar,
  UnbalancedBrace,
  BadStyleLabel,
  BadFigureRef,
  BadSpecialToken,
};

std::string_view to_string(ViolationCode code);

struct Span {
  std::size_t begin = 0;  // byte offsets, half open
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct Violation {
  ViolationCode code;
  Span span;
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;  // ordered by span.begin
};

nlohmann::json report_to_json(const ValidationReport& report);

// Checks a string against the item format:
//   text outside $..$ is Chinese/English characters, punctuation and line
//   breaks only; digits, ASCII math operators and lone latin letters belong
//   inside $..$; blanks and choice brackets use $\SIFBlank$ / $\SIFChoice$;
//   options use $\SIFTag{name}$ and $\SIFSep$; styled text is
//   $\textf{text,labels}$ with labels drawn from "bdituw" in alphabetical
//   order; figures are $\FigureID{uuid}$, $\FormFigureID{uuid}$ or
//   $\FigureBase64{payload}$; formulas lex cleanly with balanced braces.
ValidationReport validate(std::string_view raw);

inline bool is_sif(std::string_view raw) { return validate(raw).valid; }

// Rewrites raw text into the item format: underscore runs become
// $\SIFBlank$, empty brackets become $\SIFChoice$, math runs are wrapped
// in $..$. Existing $..$ regions are untouched. Throws Unconvertible when
// the result would still fail validation.
std::string to_sif(std::string_view raw);

// Parsed body of "\textf{text,labels}".
struct StyledText {
  std::string text;
  std::string labels;
};

// Returns the styled text if `body` is exactly a \textf command with a valid
// label set.
std::optional<StyledText> parse_styled_text(std::string_view body);

}  // namespace sifkit
