#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sifkit {

inline constexpr std::int64_t kPadId = 0;
inline constexpr std::int64_t kUnkId = 1;
inline constexpr std::int64_t kBosId = 2;
inline constexpr std::int64_t kEosId = 3;

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kBosToken = "<bos>";
inline constexpr std::string_view kEosToken = "<eos>";

class Vocab {
 public:
  // Only the four specials.
  Vocab();
  // `tokens` excludes the specials.
  Vocab(const std::vector<std::string>& tokens, int min_count);

  std::size_t size() const noexcept { return tokens_.size(); }
  int min_count() const noexcept { return min_count_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  std::int64_t id(std::string_view token) const;  // kUnkId when absent
  bool contains(std::string_view token) const;
  // Throws IdOutOfRange.
  const std::string& token(std::int64_t id) const;

  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_ && min_count_ == o.min_count_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int64_t> index_;
  int min_count_ = 1;
};

// Token frequencies. Counters from parallel producers can be merged; the
// result does not depend on merge order.
class TokenCounter {
 public:
  void add(const std::vector<std::string>& tokens);
  void merge(const TokenCounter& other);
  const std::unordered_map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Tokens with count >= min_count ordered by (count desc, token asc).
// Throws InvalidArgument when min_count < 1, EmptyCorpus when nothing was
// counted.
Vocab build_vocab(const TokenCounter& counter, int min_count);
Vocab build_vocab(const std::vector<std::vector<std::string>>& corpus, int min_count);

// Header "#min_count=N", then one token per line; line i after the header is
// id i. Throws IoError / CorruptModel.
void save_vocab(const Vocab& v, const std::string& path);
Vocab load_vocab(const std::string& path);
std::string vocab_to_string(const Vocab& v);
Vocab vocab_from_string(std::string_view text);

}  // namespace sifkit
