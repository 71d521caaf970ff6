#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sifkit/error.h"
#include "sifkit/item.h"
#include "sifkit/tokenizer.h"
#include "sifkit/vocab.h"

namespace sifkit {

// Streams items from a JSONL file in file order, skipping blank lines.
// Fail-fast by default: the first bad record throws with its 1-based line
// number as index. In tolerant mode bad records are counted and skipped.
class JsonlReader {
 public:
  // Throws IoError.
  explicit JsonlReader(const std::string& path, bool skip_bad = false);

  std::optional<SifItem> next();
  std::size_t line() const noexcept { return line_; }  // last line read
  std::size_t rejected() const noexcept { return rejects_.size(); }
  const std::vector<Error>& rejects() const noexcept { return rejects_; }

 private:
  std::ifstream in_;
  bool skip_bad_;
  std::size_t line_ = 0;
  std::vector<Error> rejects_;
};

struct JsonlContents {
  std::vector<SifItem> items;
  std::vector<std::size_t> lines;  // source line per item
  std::vector<Error> rejects;
};

JsonlContents read_jsonl(const std::string& path, bool skip_bad = false);

// Generic JSONL object reader for side files (pairs, responses, predictions).
// Throws IoError, MalformedJson with the line number.
std::vector<nlohmann::json> read_json_lines(const std::string& path);

struct EduDataset {
  std::vector<SifItem> items;
  std::vector<TokenSeq> token_seqs;  // encoded, aligned with items
  Vocab vocab;
  TokenizerConfig tokenizer_cfg;
};

// Tokenizes and encodes every item on `workers` threads; the result does not
// depend on the worker count. Failures are gathered into an AggregateError
// indexed by item position. Throws InvalidArgument when workers < 1.
EduDataset build_dataset(const std::vector<SifItem>& items, const TokenizerConfig& cfg, const Vocab& vocab,
                         int workers = 1);

// Token lists of all items, order preserving, on `workers` threads.
std::vector<TokenSeq> tokenize_all(const std::vector<SifItem>& items, const TokenizerConfig& cfg, int workers = 1);

// Cache directory: meta.json, vocab.txt, ids.jsonl.
std::string dataset_ids_jsonl(const EduDataset& ds);
void save_dataset(const EduDataset& ds, const std::string& dir);
struct DatasetCache {
  TokenizerConfig tokenizer_cfg;
  Vocab vocab;
  std::vector<std::optional<std::string>> item_ids;
  std::vector<TokenSeq> token_seqs;
};
DatasetCache load_dataset(const std::string& dir);

struct IndexedBatch {
  std::vector<std::size_t> indices;  // dataset positions of the rows
  Batch batch;
};

// One epoch of batches. The shuffle permutation is a Fisher-Yates pass
// driven by splitmix64(seed). Throws EmptyDataset, InvalidArgument.
class BatchIterator {
 public:
  BatchIterator(const EduDataset& ds, std::size_t batch_size, bool shuffle = false, std::uint64_t seed = 0,
                std::optional<std::size_t> max_len = std::nullopt);

  std::optional<IndexedBatch> next();
  const std::vector<std::size_t>& order() const noexcept { return order_; }

 private:
  const EduDataset* ds_;
  std::size_t batch_size_;
  std::optional<std::size_t> max_len_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

// Throws BadBase64.
std::string base64_decode(std::string_view data);

// Bytes of a figure: base64 payloads are decoded, uuids are read from
// <asset_dir>/<uuid>.png. An empty asset_dir falls back to SIFKIT_ASSET_DIR,
// then the working directory. Throws MissingAsset, BadBase64,
// InvalidArgument for non-figure segments.
std::string resolve_figure(const Segment& seg, const std::string& asset_dir = "");

}  // namespace sifkit
