#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sifkit {

// Splits a run of consecutive CJK ideographs into words.
using CjkSegmenter = std::function<std::vector<std::string>(std::string_view)>;

struct TextTokConfig {
  bool lowercase = true;
  bool keep_punct = true;
  std::optional<std::set<std::string>> stopwords;
  // When unset, every ideograph is its own token.
  CjkSegmenter cjk_segmenter;
};

// ASCII letter runs are words, ideographs are single tokens (or go through
// the segmenter hook), punctuation is one token per character when kept and
// whitespace is dropped. Stopwords are removed after lowercasing.
std::vector<std::string> tokenize_text(std::string_view text, const TextTokConfig& cfg = {});

// One token per line, '#' starts a comment line, blank lines skipped.
// Throws IoError.
std::set<std::string> load_stopwords(const std::string& path);

}  // namespace sifkit
