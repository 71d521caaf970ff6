#include "sifkit/utf8.h"

namespace sifkit::utf8 {

Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1, true};

  std::size_t need = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3; cp = b0 & 0x07; min = 0x10000;
  } else {
    return {b0, 1, false};
  }
  if (pos + need >= s.size()) return {b0, 1, false};
  for (std::size_t k = 1; k <= need; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) return {b0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {b0, 1, false};
  return {cp, need + 1, true};
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_valid(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    auto d = decode(s, i);
    if (!d.valid) return false;
    i += d.len;
  }
  return true;
}

bool is_cjk_ideograph(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x20000 && c <= 0x2FA1F);
}

bool is_cjk_punct(char32_t c) {
  if (c >= 0x3000 && c <= 0x303F) return true;            // CJK symbols and punctuation
  if (c >= 0x2010 && c <= 0x2027) return true;            // dashes, quotes, ellipsis
  if (c >= 0x2030 && c <= 0x205E) return true;            // per mille, primes, misc
  if (c >= 0xFE10 && c <= 0xFE1F) return true;            // vertical forms
  if (c >= 0xFE30 && c <= 0xFE6F) return true;            // compat + small forms
  if (c >= 0xFF01 && c <= 0xFF65) {                       // fullwidth / halfwidth
    const bool digit = c >= 0xFF10 && c <= 0xFF19;
    const bool upper = c >= 0xFF21 && c <= 0xFF3A;
    const bool lower = c >= 0xFF41 && c <= 0xFF5A;
    return !(digit || upper || lower);
  }
  return c == 0x00B7;  // middle dot
}

}  // namespace sifkit::utf8
