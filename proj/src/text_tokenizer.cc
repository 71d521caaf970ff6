#include "sifkit/text_tokenizer.h"

#include <cctype>
#include <fstream>

#include "sifkit/error.h"
#include "sifkit/utf8.h"

namespace sifkit {

std::vector<std::string> tokenize_text(std::string_view text, const TextTokConfig& cfg) {
  std::vector<std::string> raw;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto d = utf8::decode(text, i);
    if (d.valid && utf8::is_ascii_letter(d.cp)) {
      std::size_t j = i;
      while (j < text.size() && utf8::is_ascii_letter(static_cast<unsigned char>(text[j]))) ++j;
      std::string w(text.substr(i, j - i));
      if (cfg.lowercase)
        for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      raw.push_back(std::move(w));
      i = j;
      continue;
    }
    if (d.valid && utf8::is_cjk_ideograph(d.cp)) {
      std::size_t j = i;
      while (j < text.size()) {
        const auto e = utf8::decode(text, j);
        if (!e.valid || !utf8::is_cjk_ideograph(e.cp)) break;
        j += e.len;
      }
      if (cfg.cjk_segmenter) {
        for (auto& w : cfg.cjk_segmenter(text.substr(i, j - i)))
          if (!w.empty()) raw.push_back(std::move(w));
      } else {
        for (std::size_t k = i; k < j;) {
          const auto e = utf8::decode(text, k);
          raw.emplace_back(text.substr(k, e.len));
          k += e.len;
        }
      }
      i = j;
      continue;
    }
    if (!(d.valid && (utf8::is_ascii_space(d.cp) || utf8::is_blankish(d.cp))) && cfg.keep_punct)
      raw.emplace_back(text.substr(i, d.len));
    i += d.len;
  }
  if (!cfg.stopwords || cfg.stopwords->empty()) return raw;
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (auto& t : raw)
    if (!cfg.stopwords->count(t)) out.push_back(std::move(t));
  return out;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open stopword file " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t b = 0;
    while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
    if (b == line.size() || line[b] == '#') continue;
    out.insert(line.substr(b));
  }
  return out;
}

}  // namespace sifkit
