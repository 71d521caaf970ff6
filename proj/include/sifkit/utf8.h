#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace sifkit::utf8 {

struct Decoded {
  char32_t cp = 0;
  std::size_t len = 1;  // bytes consumed; 1 for an invalid byte
  bool valid = false;
};

// Decodes the code point starting at byte `pos`. Overlong forms, surrogates
// and truncated sequences are reported as invalid single bytes.
Decoded decode(std::string_view s, std::size_t pos);

void append(std::string& out, char32_t cp);

bool is_valid(std::string_view s);

inline bool is_ascii_letter(char32_t c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_ascii_digit(char32_t c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_space(char32_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_cjk_ideograph(char32_t c);

// Punctuation used in Chinese text: CJK symbols, fullwidth punctuation,
// general punctuation (quotes, dashes, ellipsis) and small/compat forms.
bool is_cjk_punct(char32_t c);

// Whitespace that may appear inside choice brackets: ASCII blanks and the
// ideographic space.
inline bool is_blankish(char32_t c) { return is_ascii_space(c) || c == 0x3000; }

}  // namespace sifkit::utf8
