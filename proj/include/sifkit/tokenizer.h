#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sifkit/item.h"
#include "sifkit/text_tokenizer.h"
#include "sifkit/vocab.h"

namespace sifkit {

enum class TokenizerMode : std::uint8_t { PureText, AstFormula, Custom };
enum class FormulaMode : std::uint8_t { Linear, Ast };

struct TokenizerConfig {
  TokenizerMode mode = TokenizerMode::PureText;
  TextTokConfig text;
  FormulaMode formula = FormulaMode::Linear;
  std::string symbol;           // subset of "tfgm"
  bool distinct_marks = false;  // Custom only: [BLANK] [CHOICE] [TAG] [SEP]

  // pure_text, ast_formula or custom. Throws InvalidArgument.
  static TokenizerConfig named(std::string_view name);
  // Applies the mode constraints; throws InvalidArgument on a bad symbol.
  TokenizerConfig normalized() const;
};

std::string_view to_string(TokenizerMode mode);

// The segmenter hook is not serialized.
nlohmann::json config_to_json(const TokenizerConfig& cfg);
TokenizerConfig config_from_json(const nlohmann::json& j);

struct TokenSeq {
  std::vector<std::string> tokens;
  std::optional<std::vector<std::int64_t>> ids;

  bool operator==(const TokenSeq&) const = default;
};

// Content only. Raw content is converted first when it is not valid yet.
// Figures become [FIGURE], marks [MARK] (or distinct tokens in Custom mode),
// formulas expand to linear or AST tokens, masked kinds emit placeholders.
// Errors keep their code and name the item id.
TokenSeq tokenize_item(const SifItem& item, const TokenizerConfig& cfg);
std::vector<std::string> tokenize_sif(std::string_view sif, const TokenizerConfig& cfg);

TokenSeq encode(const TokenSeq& seq, const Vocab& vocab, bool add_bos_eos = false);
std::vector<std::string> decode(const std::vector<std::int64_t>& ids, const Vocab& vocab);

struct Batch {
  std::vector<std::vector<std::int64_t>> ids;  // batch_size x width
  std::vector<std::size_t> lengths;
  std::int64_t pad_id = kPadId;

  bool operator==(const Batch&) const = default;
};

// Right padding to the longest sequence, right truncation at max_len.
// Throws EmptyBatch, InvalidArgument for unencoded sequences.
Batch collate(const std::vector<TokenSeq>& seqs, std::int64_t pad_id = kPadId,
              std::optional<std::size_t> max_len = std::nullopt);

// Rows with padding stripped.
std::vector<std::vector<std::int64_t>> unpad(const Batch& batch);

}  // namespace sifkit
