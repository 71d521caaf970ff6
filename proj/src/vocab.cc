#include "sifkit/vocab.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sifkit/error.h"

namespace sifkit {

Vocab::Vocab() : Vocab(std::vector<std::string>{}, 1) {}

Vocab::Vocab(const std::vector<std::string>& tokens, int min_count) : min_count_(min_count) {
  tokens_ = {std::string(kPadToken), std::string(kUnkToken), std::string(kBosToken), std::string(kEosToken)};
  tokens_.insert(tokens_.end(), tokens.begin(), tokens.end());
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::int64_t>(i)).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate vocabulary token '" + tokens_[i] + "'", i);
  }
}

std::int64_t Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocab::contains(std::string_view token) const { return index_.count(std::string(token)) != 0; }

const std::string& Vocab::token(std::int64_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw Error(ErrorCode::IdOutOfRange, "token id " + std::to_string(id) + " outside vocabulary of size " +
                                             std::to_string(tokens_.size()));
  return tokens_[static_cast<std::size_t>(id)];
}

void TokenCounter::add(const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) ++counts_[t];
  total_ += tokens.size();
}

void TokenCounter::merge(const TokenCounter& other) {
  for (const auto& [t, c] : other.counts_) counts_[t] += c;
  total_ += other.total_;
}

Vocab build_vocab(const TokenCounter& counter, int min_count) {
  if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
  if (counter.total() == 0) throw Error(ErrorCode::EmptyCorpus, "no tokens to build a vocabulary from");
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [t, c] : counter.counts())
    if (c >= static_cast<std::uint64_t>(min_count)) kept.emplace_back(t, c);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [t, c] : kept) {
    // A corpus token spelled like a special is already covered by it.
    if (t == kPadToken || t == kUnkToken || t == kBosToken || t == kEosToken) continue;
    tokens.push_back(std::move(t));
  }
  return Vocab(tokens, min_count);
}

Vocab build_vocab(const std::vector<std::vector<std::string>>& corpus, int min_count) {
  TokenCounter c;
  for (const auto& seq : corpus) c.add(seq);
  return build_vocab(c, min_count);
}

std::string vocab_to_string(const Vocab& v) {
  std::string out = "#min_count=" + std::to_string(v.min_count()) + "\n";
  for (const auto& t : v.tokens()) {
    out += t;
    out += '\n';
  }
  return out;
}

Vocab vocab_from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#min_count="))
    throw Error(ErrorCode::CorruptModel, "vocabulary header '#min_count=N' missing");
  int min_count = 0;
  try {
    std::size_t used = 0;
    min_count = std::stoi(line.substr(11), &used);
    if (used != line.size() - 11) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::CorruptModel, "bad vocabulary header '" + line + "'");
  }
  std::vector<std::string> tokens;
  while (std::getline(in, line)) tokens.push_back(line);
  const std::vector<std::string_view> specials = {kPadToken, kUnkToken, kBosToken, kEosToken};
  if (tokens.size() < 4) throw Error(ErrorCode::CorruptModel, "vocabulary lacks the special tokens");
  for (std::size_t i = 0; i < 4; ++i)
    if (tokens[i] != specials[i]) throw Error(ErrorCode::CorruptModel, "special token mismatch", i);
  tokens.erase(tokens.begin(), tokens.begin() + 4);
  try {
    return Vocab(tokens, min_count);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptModel, e.detail(), e.index());
  }
}

void save_vocab(const Vocab& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << vocab_to_string(v);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Vocab load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return vocab_from_string(ss.str());
}

}  // namespace sifkit
