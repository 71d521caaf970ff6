#include "sifkit/dataset.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "parallel.h"
#include "sifkit/random.h"

namespace sifkit {

namespace fs = std::filesystem;

namespace {

bool blank_line(const std::string& s) {
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

JsonlReader::JsonlReader(const std::string& path, bool skip_bad) : in_(path, std::ios::binary), skip_bad_(skip_bad) {
  if (!in_) throw Error(ErrorCode::IoError, "cannot open " + path);
}

std::optional<SifItem> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank_line(line)) continue;
    try {
      return parse_record(line);
    } catch (const Error& e) {
      Error located(e.code(), "line " + std::to_string(line_) + ": " + e.detail(), line_, e.offset());
      if (!skip_bad_) throw located;
      rejects_.push_back(std::move(located));
    }
  }
  if (in_.bad()) throw Error(ErrorCode::IoError, "read failed", line_);
  return std::nullopt;
}

JsonlContents read_jsonl(const std::string& path, bool skip_bad) {
  JsonlReader r(path, skip_bad);
  JsonlContents out;
  while (auto item = r.next()) {
    out.items.push_back(std::move(*item));
    out.lines.push_back(r.line());
  }
  out.rejects = r.rejects();
  return out;
}

std::vector<nlohmann::json> read_json_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (blank_line(line)) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "line " + std::to_string(n) + ": " + e.what(), n);
    }
    if (!out.back().is_object())
      throw Error(ErrorCode::MalformedJson, "line " + std::to_string(n) + ": record is not an object", n);
  }
  return out;
}

std::vector<TokenSeq> tokenize_all(const std::vector<SifItem>& items, const TokenizerConfig& cfg, int workers) {
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  const auto norm = cfg.normalized();
  std::vector<TokenSeq> seqs(items.size());
  std::vector<std::optional<Error>> errors(items.size());
  detail::parallel_for(items.size(), workers, [&](std::size_t i) {
    try {
      seqs[i] = tokenize_item(items[i], norm);
    } catch (const Error& e) {
      errors[i] = Error(e.code(), e.detail(), i, e.offset());
    } catch (const std::exception& e) {
      errors[i] = Error(ErrorCode::TokenizeFailed, e.what(), i);
    }
  });
  std::vector<Error> failures;
  for (auto& e : errors)
    if (e) failures.push_back(std::move(*e));
  if (!failures.empty()) throw AggregateError(std::move(failures));
  return seqs;
}

EduDataset build_dataset(const std::vector<SifItem>& items, const TokenizerConfig& cfg, const Vocab& vocab,
                         int workers) {
  EduDataset ds;
  ds.items = items;
  ds.vocab = vocab;
  ds.tokenizer_cfg = cfg.normalized();
  ds.token_seqs = tokenize_all(items, ds.tokenizer_cfg, workers);
  detail::parallel_for(ds.token_seqs.size(), workers, [&](std::size_t i) { ds.token_seqs[i] = encode(ds.token_seqs[i], vocab); });
  return ds;
}

std::string dataset_ids_jsonl(const EduDataset& ds) {
  std::string out;
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    nlohmann::json j = {{"index", i},
                        {"id", ds.items[i].id ? nlohmann::json(*ds.items[i].id) : nlohmann::json(nullptr)},
                        {"tokens", ds.token_seqs[i].tokens},
                        {"ids", ds.token_seqs[i].ids.value_or(std::vector<std::int64_t>{})}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const EduDataset& ds, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  save_vocab(ds.vocab, (root / "vocab.txt").string());
  auto write = [&](const char* name, const std::string& body) {
    std::ofstream out(root / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, std::string("cannot write ") + name);
    out << body;
  };
  nlohmann::json meta = {{"items", ds.items.size()}, {"vocab_size", ds.vocab.size()},
                         {"tokenizer", config_to_json(ds.tokenizer_cfg)}};
  write("meta.json", meta.dump(2) + "\n");
  write("ids.jsonl", dataset_ids_jsonl(ds));
}

DatasetCache load_dataset(const std::string& dir) {
  const fs::path root(dir);
  DatasetCache c;
  c.vocab = vocab_from_string(slurp(root / "vocab.txt"));
  std::size_t count = 0;
  try {
    const auto meta = nlohmann::json::parse(slurp(root / "meta.json"));
    c.tokenizer_cfg = config_from_json(meta.at("tokenizer"));
    count = meta.at("items").get<std::size_t>();
    if (meta.at("vocab_size").get<std::size_t>() != c.vocab.size())
      throw Error(ErrorCode::CorruptModel, "vocab_size does not match vocab.txt");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModel, std::string("meta.json: ") + e.what());
  }
  std::istringstream in(slurp(root / "ids.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    try {
      const auto j = nlohmann::json::parse(line);
      c.item_ids.push_back(j.at("id").is_null() ? std::nullopt : std::optional(j.at("id").get<std::string>()));
      TokenSeq s{j.at("tokens").get<std::vector<std::string>>(), j.at("ids").get<std::vector<std::int64_t>>()};
      if (s.ids->size() != s.tokens.size()) throw Error(ErrorCode::CorruptModel, "ids and tokens differ in length", n);
      for (auto id : *s.ids)
        if (id < 0 || static_cast<std::size_t>(id) >= c.vocab.size())
          throw Error(ErrorCode::CorruptModel, "id outside vocabulary", n);
      c.token_seqs.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptModel, "ids.jsonl line " + std::to_string(n) + ": " + e.what(), n);
    }
  }
  if (c.token_seqs.size() != count) throw Error(ErrorCode::CorruptModel, "item count does not match meta.json");
  return c;
}

BatchIterator::BatchIterator(const EduDataset& ds, std::size_t batch_size, bool shuffle, std::uint64_t seed,
                             std::optional<std::size_t> max_len)
    : ds_(&ds), batch_size_(batch_size), max_len_(max_len) {
  if (ds.items.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no items");
  if (batch_size < 1) throw Error(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  if (shuffle) {
    order_ = seeded_permutation(ds.items.size(), seed);
  } else {
    order_.resize(ds.items.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  }
}

std::optional<IndexedBatch> BatchIterator::next() {
  if (pos_ >= order_.size()) return std::nullopt;
  const std::size_t end = std::min(order_.size(), pos_ + batch_size_);
  IndexedBatch b;
  std::vector<TokenSeq> seqs;
  for (std::size_t k = pos_; k < end; ++k) {
    b.indices.push_back(order_[k]);
    seqs.push_back(ds_->token_seqs[order_[k]]);
  }
  pos_ = end;
  b.batch = collate(seqs, kPadId, max_len_);
  return b;
}

std::string base64_decode(std::string_view data) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (data.size() % 4 != 0) throw Error(ErrorCode::BadBase64, "length is not a multiple of 4");
  std::string out;
  out.reserve(data.size() / 4 * 3);
  for (std::size_t i = 0; i < data.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = data[i + k];
      if (c == '=') {
        if (i + 4 != data.size() || k < 2) throw Error(ErrorCode::BadBase64, "misplaced padding", std::nullopt, i + k);
        ++pad;
        v[k] = 0;
        continue;
      }
      if (pad) throw Error(ErrorCode::BadBase64, "data after padding", std::nullopt, i + k);
      v[k] = value(c);
      if (v[k] < 0) throw Error(ErrorCode::BadBase64, "invalid base64 character", std::nullopt, i + k);
    }
    const std::uint32_t n = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out += static_cast<char>((n >> 16) & 0xFF);
    if (pad < 2) out += static_cast<char>((n >> 8) & 0xFF);
    if (pad < 1) out += static_cast<char>(n & 0xFF);
  }
  return out;
}

std::string resolve_figure(const Segment& seg, const std::string& asset_dir) {
  if (seg.kind != SegmentKind::Figure && seg.kind != SegmentKind::FigureFormula)
    throw Error(ErrorCode::InvalidArgument, "segment is not a figure");
  if (seg.kind == SegmentKind::Figure && seg.encoding == FigureEncoding::Base64) return base64_decode(seg.payload);
  std::string dir = asset_dir;
  if (dir.empty()) {
    const char* env = std::getenv("SIFKIT_ASSET_DIR");
    dir = env && *env ? env : ".";
  }
  const fs::path p = fs::path(dir) / (seg.payload + ".png");
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingAsset, "figure asset " + p.string() + " not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sifkit
