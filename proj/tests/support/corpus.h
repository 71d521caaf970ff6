#pragma once

// Synthetic corpora shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace sifkit::testing {

inline std::string data_path(const std::string& name) { return std::string(SIFKIT_DATA_DIR) + "/" + name; }

inline std::vector<std::string> golden_contents() {
  std::ifstream in(data_path("golden_items.jsonl"));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line).at("content").get<std::string>());
  return out;
}

inline std::vector<std::string> golden_ids() {
  std::ifstream in(data_path("golden_items.jsonl"));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line).at("id").get<std::string>());
  return out;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::string cjk_char() {
    // Common ideograph block, encoded by hand to keep the generator standalone.
    const char32_t cp = 0x4E00 + static_cast<char32_t>(below(0x9FA5 - 0x4E00));
    std::string s;
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
    return s;
  }

  std::string ascii_word() {
    std::string w;
    const std::size_t n = 2 + below(6);
    for (std::size_t i = 0; i < n; ++i) w += static_cast<char>((chance(0.2) ? 'A' : 'a') + below(26));
    return w;
  }

  // Raw text over the supported charset, free of '$' and '\' so it is
  // always convertible.
  std::string raw_text() {
    static const std::vector<std::string> punct = {"，", "。", "、", "：", "？", "“", "”", "（", "）", "《", "》",
                                                   ",", ".", "?", "!", ";", ":", "(", ")", "[", "]", "'", "\"",
                                                   " ", " ", "\n", "\t", "{", "}", "……", "﹣"};
    static const std::vector<std::string> ops = {"+", "-", "*", "/", "=", "<", ">", "^", "_", "|"};
    static const std::vector<std::string> marks = {"__", "____", "___", "()", "( )", "（）", "（　）", "(  )"};
    std::string s;
    const std::size_t parts = 1 + below(12);
    for (std::size_t i = 0; i < parts; ++i) {
      switch (below(9)) {
        case 0: case 1: s += cjk_char(); break;
        case 2: s += ascii_word(); break;
        case 3: s += pick(punct); break;
        case 4: s += std::to_string(below(2000)); break;
        case 5: s += std::string(1, static_cast<char>('a' + below(26))); break;
        case 6: s += pick(ops); break;
        case 7: s += pick(marks); break;
        case 8: s += "$" + formula(2) + "$"; break;
      }
    }
    return s;
  }

  // A valid item string: converted raw text plus specials.
  std::string sif_special() {
    static const std::vector<std::string> labels = {"b", "u", "bu", "diu", "bdituw", "w", "it"};
    switch (below(8)) {
      case 0: return "$\\SIFBlank$";
      case 1: return "$\\SIFChoice$";
      case 2: return "$\\SIFSep$";
      case 3: return "$\\SIFTag{options}$";
      case 4: return "$\\FigureID{" + uuid() + "}$";
      case 5: return "$\\FormFigureID{f" + std::to_string(below(999)) + "}$";
      case 6: return "$\\FigureBase64{AQID}$";
      default: return "$\\textf{" + cjk_char() + cjk_char() + "," + pick(labels) + "}$";
    }
  }

  // A valid item whose formulas all parse: ideographs, words, formulas and
  // special tokens.
  std::string sif_item() {
    static const std::vector<std::string> punct = {"，", "。", "、", "：", "？", " "};
    std::string s;
    const std::size_t parts = 1 + below(10);
    for (std::size_t i = 0; i < parts; ++i) {
      switch (below(5)) {
        case 0: s += cjk_char() + cjk_char(); break;
        case 1: s += " " + ascii_word() + " "; break;
        case 2: s += pick(punct); break;
        case 3: s += "$" + formula(2) + "$"; break;
        default: s += sif_special(); break;
      }
    }
    return s;
  }

  std::string uuid() {
    static const char* hex = "0123456789abcdef";
    std::string u;
    for (int group : {8, 4, 4, 4, 12}) {
      if (!u.empty()) u += '-';
      for (int i = 0; i < group; ++i) u += hex[below(16)];
    }
    return u;
  }

  // Random well-formed formula body.
  std::string formula(int depth = 3) {
    static const std::vector<std::string> symbols = {"x", "y", "z", "a", "b", "n", "\\alpha", "\\pi", "\\theta", "A"};
    static const std::vector<std::string> binops = {"+", "-", "=", "<", ">", "\\times", "\\cdot", "\\leq", "\\in", "/"};
    static const std::vector<std::string> funcs = {"\\sin", "\\cos", "\\log", "\\ln"};
    auto atom = [&]() -> std::string {
      if (chance(0.35)) return std::to_string(below(100));
      if (chance(0.15)) return std::to_string(below(10)) + "." + std::to_string(below(100));
      return pick(symbols);
    };
    if (depth <= 0) return atom();
    switch (below(12)) {
      case 0: return "\\frac{" + formula(depth - 1) + "}{" + formula(depth - 1) + "}";
      case 1: return "\\sqrt{" + formula(depth - 1) + "}";
      case 2: return "\\sqrt[" + std::to_string(2 + below(3)) + "]{" + formula(depth - 1) + "}";
      case 3: return atom() + "^{" + formula(depth - 1) + "}";
      case 4: return pick(symbols) + "_{" + formula(depth - 1) + "}";
      case 5: return "\\left( " + formula(depth - 1) + " \\right)";
      case 6: return "(" + formula(depth - 1) + ")";
      case 7: return pick(funcs) + " " + atom();
      case 8: return "-" + formula(depth - 1);
      case 9: return "\\overline{" + formula(depth - 1) + "}";
      case 10: return formula(depth - 1) + formula(depth - 1);
      default: return formula(depth - 1) + " " + pick(binops) + " " + formula(depth - 1);
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<std::string> raw_corpus(std::size_t n, std::uint64_t seed) {
  Gen g(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(g.raw_text());
  return out;
}

inline std::vector<std::string> formula_corpus(std::size_t n, std::uint64_t seed) {
  Gen g(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(g.formula(1 + static_cast<int>(g.below(4))));
  return out;
}

// Planted co-occurrence corpus: "alpha" and "beta" always share a window,
// "gamma" lives in sentences of its own.
inline std::vector<std::vector<std::string>> planted_corpus(std::uint64_t seed, std::size_t sentences = 400) {
  Gen g(seed);
  const std::vector<std::string> filler = {"w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7"};
  const std::vector<std::string> other = {"v0", "v1", "v2", "v3", "v4", "v5", "v6", "v7"};
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < sentences; ++i) {
    std::vector<std::string> s;
    if (i % 2 == 0) {
      for (int k = 0; k < 3; ++k) s.push_back(g.pick(filler));
      s.push_back("alpha");
      s.push_back(g.pick(filler));
      s.push_back("beta");
      for (int k = 0; k < 3; ++k) s.push_back(g.pick(filler));
    } else {
      for (int k = 0; k < 3; ++k) s.push_back(g.pick(other));
      s.push_back("gamma");
      for (int k = 0; k < 4; ++k) s.push_back(g.pick(other));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sifkit::testing
