#include "sifkit/tokenizer.h"

#include <algorithm>

#include "sifkit/error.h"
#include "sifkit/formula.h"
#include "sifkit/segment.h"
#include "sifkit/sif.h"

namespace sifkit {

std::string_view to_string(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::PureText: return "pure_text";
    case TokenizerMode::AstFormula: return "ast_formula";
    case TokenizerMode::Custom: return "custom";
  }
  return "?";
}

TokenizerConfig TokenizerConfig::named(std::string_view name) {
  TokenizerConfig c;
  if (name == "pure_text") c.mode = TokenizerMode::PureText;
  else if (name == "ast_formula") c.mode = TokenizerMode::AstFormula;
  else if (name == "custom") c.mode = TokenizerMode::Custom;
  else throw Error(ErrorCode::InvalidArgument, "unknown tokenizer '" + std::string(name) + "'");
  return c.normalized();
}

TokenizerConfig TokenizerConfig::normalized() const {
  TokenizerConfig c = *this;
  if (c.mode == TokenizerMode::PureText) c.formula = FormulaMode::Linear;
  if (c.mode == TokenizerMode::AstFormula) c.formula = FormulaMode::Ast;
  if (c.mode != TokenizerMode::Custom) c.distinct_marks = false;
  symbol_kinds(c.symbol);
  // Canonical flag order, no repeats.
  std::string s;
  for (char f : std::string_view("tfgm"))
    if (c.symbol.find(f) != std::string::npos) s += f;
  c.symbol = s;
  return c;
}

nlohmann::json config_to_json(const TokenizerConfig& in) {
  const auto cfg = in.normalized();
  nlohmann::json text = {{"lowercase", cfg.text.lowercase}, {"keep_punct", cfg.text.keep_punct}};
  nlohmann::json sw = nlohmann::json::array();
  if (cfg.text.stopwords)
    for (const auto& w : *cfg.text.stopwords) sw.push_back(w);
  text["stopwords"] = sw;
  return {{"tokenizer", to_string(cfg.mode)},
          {"formula", cfg.formula == FormulaMode::Ast ? "ast" : "linear"},
          {"symbol", cfg.symbol},
          {"distinct_marks", cfg.distinct_marks},
          {"text", text}};
}

TokenizerConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "tokenizer config must be an object");
  try {
    TokenizerConfig c = TokenizerConfig::named(j.value("tokenizer", std::string("pure_text")));
    if (j.contains("formula")) {
      const auto f = j.at("formula").get<std::string>();
      if (f == "ast") c.formula = FormulaMode::Ast;
      else if (f == "linear") c.formula = FormulaMode::Linear;
      else throw Error(ErrorCode::InvalidArgument, "formula must be 'linear' or 'ast'");
    }
    c.symbol = j.value("symbol", std::string());
    c.distinct_marks = j.value("distinct_marks", false);
    if (j.contains("text")) {
      const auto& t = j.at("text");
      c.text.lowercase = t.value("lowercase", true);
      c.text.keep_punct = t.value("keep_punct", true);
      if (t.contains("stopwords")) {
        std::set<std::string> sw;
        for (const auto& w : t.at("stopwords")) sw.insert(w.get<std::string>());
        if (!sw.empty()) c.text.stopwords = std::move(sw);
      }
    }
    for (const auto& [k, v] : j.items()) {
      if (k != "tokenizer" && k != "formula" && k != "symbol" && k != "distinct_marks" && k != "text")
        throw Error(ErrorCode::InvalidArgument, "unknown tokenizer option '" + k + "'");
    }
    return c.normalized();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad tokenizer config: ") + e.what());
  }
}

namespace {

void append(std::vector<std::string>& out, std::vector<std::string> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

std::string_view mark_token(const Segment& s, bool distinct) {
  if (!distinct) return "[MARK]";
  if (s.kind == SegmentKind::Tag) return "[TAG]";
  if (s.kind == SegmentKind::Sep) return "[SEP]";
  return s.payload == "Blank" ? "[BLANK]" : "[CHOICE]";
}

}  // namespace

std::vector<std::string> tokenize_sif(std::string_view sif, const TokenizerConfig& in) {
  const auto cfg = in.normalized();
  const auto segs = seg(sif, cfg.symbol);
  std::vector<std::string> out;
  for (const auto& s : segs.segments()) {
    const bool masked = segs.is_masked(s.kind);
    switch (s.kind) {
      case SegmentKind::Text:
        if (masked) out.emplace_back(placeholder(s.kind));
        else append(out, tokenize_text(s.payload, cfg.text));
        break;
      case SegmentKind::Formula: {
        if (masked) {
          out.emplace_back(placeholder(s.kind));
          break;
        }
        if (auto styled = parse_styled_text(s.payload)) {
          append(out, tokenize_text(styled->text, cfg.text));
          break;
        }
        if (cfg.formula == FormulaMode::Linear) {
          append(out, token_texts(linear_tokenize(s.payload)));
        } else {
          append(out, token_texts(ast_tokenize(parse_formula(s.payload))));
        }
        break;
      }
      case SegmentKind::Figure:
      case SegmentKind::FigureFormula:
        out.emplace_back("[FIGURE]");
        break;
      case SegmentKind::QuesMark:
      case SegmentKind::Tag:
      case SegmentKind::Sep:
        out.emplace_back(mark_token(s, cfg.distinct_marks));
        break;
    }
  }
  return out;
}

TokenSeq tokenize_item(const SifItem& item, const TokenizerConfig& cfg) {
  try {
    const std::string content = is_sif(item.content) ? item.content : to_sif(item.content);
    return TokenSeq{tokenize_sif(content, cfg), std::nullopt};
  } catch (const AggregateError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), "item " + item.id.value_or("?") + ": " + e.detail(), e.index(), e.offset());
  }
}

TokenSeq encode(const TokenSeq& seq, const Vocab& vocab, bool add_bos_eos) {
  std::vector<std::int64_t> ids;
  ids.reserve(seq.tokens.size() + 2);
  if (add_bos_eos) ids.push_back(kBosId);
  for (const auto& t : seq.tokens) ids.push_back(vocab.id(t));
  if (add_bos_eos) ids.push_back(kEosId);
  return TokenSeq{seq.tokens, std::move(ids)};
}

std::vector<std::string> decode(const std::vector<std::int64_t>& ids, const Vocab& vocab) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(vocab.token(id));
  return out;
}

Batch collate(const std::vector<TokenSeq>& seqs, std::int64_t pad_id, std::optional<std::size_t> max_len) {
  if (seqs.empty()) throw Error(ErrorCode::EmptyBatch, "cannot collate an empty batch");
  std::size_t width = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (!seqs[i].ids) throw Error(ErrorCode::InvalidArgument, "sequence is not encoded", i);
    width = std::max(width, seqs[i].ids->size());
  }
  if (max_len) width = std::min(width, *max_len);
  Batch b;
  b.pad_id = pad_id;
  for (const auto& s : seqs) {
    const std::size_t n = std::min(width, s.ids->size());
    std::vector<std::int64_t> row(s.ids->begin(), s.ids->begin() + static_cast<std::ptrdiff_t>(n));
    row.resize(width, pad_id);
    b.ids.push_back(std::move(row));
    b.lengths.push_back(n);
  }
  return b;
}

std::vector<std::vector<std::int64_t>> unpad(const Batch& batch) {
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t i = 0; i < batch.ids.size(); ++i)
    out.emplace_back(batch.ids[i].begin(), batch.ids[i].begin() + static_cast<std::ptrdiff_t>(batch.lengths[i]));
  return out;
}

}  // namespace sifkit
