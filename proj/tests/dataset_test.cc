#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "sifkit/dataset.h"
#include "sifkit/random.h"
#include "sifkit/sif.h"
#include "support/corpus.h"

namespace sifkit {
namespace {

namespace fs = std::filesystem;

std::string temp_dir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("sifkit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string write_file(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::vector<SifItem> synthetic_items(std::size_t n, std::uint64_t seed) {
  testing::Gen gen(seed);
  std::vector<SifItem> out;
  for (std::size_t i = 0; i < n; ++i) {
    SifItem it;
    it.id = "i" + std::to_string(i);
    it.content = gen.sif_item();
    out.push_back(std::move(it));
  }
  return out;
}

Vocab vocab_for(const std::vector<SifItem>& items, const TokenizerConfig& cfg) {
  TokenCounter c;
  for (const auto& s : tokenize_all(items, cfg)) c.add(s.tokens);
  return build_vocab(c, 1);
}

TEST(Jsonl, ReadsInOrder) {
  const auto dir = temp_dir("jsonl_ok");
  write_file(dir + "/a.jsonl", "{\"id\":\"a\",\"content\":\"x\"}\n\n{\"id\":\"b\",\"content\":\"y\"}\n");
  const auto c = read_jsonl(dir + "/a.jsonl");
  ASSERT_EQ(c.items.size(), 2u);
  EXPECT_EQ(c.items[0].id, "a");
  EXPECT_EQ(c.items[1].id, "b");
  EXPECT_EQ(c.lines, (std::vector<std::size_t>{1, 3}));
}

TEST(Jsonl, FailFastAndTolerant) {
  const auto dir = temp_dir("jsonl_bad");
  const auto path = write_file(dir + "/a.jsonl", "{\"content\":\"x\"}\n{oops\n");
  try {
    read_jsonl(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedJson);
    EXPECT_EQ(e.index(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  const auto c = read_jsonl(path, true);
  EXPECT_EQ(c.items.size(), 1u);
  EXPECT_EQ(c.rejects.size(), 1u);
  JsonlReader r(path, true);
  while (r.next()) {}
  EXPECT_EQ(r.rejected(), 1u);
  EXPECT_THROW(JsonlReader(dir + "/missing.jsonl"), Error);
}

TEST(Dataset, WorkerInvariance) {
  const auto items = synthetic_items(100, 12);
  const auto cfg = TokenizerConfig::named("ast_formula");
  const auto vocab = vocab_for(items, cfg);
  const auto base = dataset_ids_jsonl(build_dataset(items, cfg, vocab, 1));
  for (int w : {2, 4}) EXPECT_EQ(dataset_ids_jsonl(build_dataset(items, cfg, vocab, w)), base) << w;
  EXPECT_THROW(build_dataset(items, cfg, vocab, 0), Error);
}

TEST(Dataset, Empty) {
  const auto ds = build_dataset({}, TokenizerConfig::named("pure_text"), Vocab(), 2);
  EXPECT_TRUE(ds.items.empty());
  EXPECT_TRUE(ds.token_seqs.empty());
  EXPECT_THROW(BatchIterator(ds, 2), Error);
}

TEST(Dataset, ErrorNamesIndex) {
  auto items = synthetic_items(10, 13);
  items[7].content = "$\\frac{x}$";
  const auto cfg = TokenizerConfig::named("ast_formula");
  for (int w : {1, 4}) {
    try {
      build_dataset(items, cfg, Vocab(), w);
      FAIL();
    } catch (const AggregateError& e) {
      ASSERT_EQ(e.failures().size(), 1u);
      EXPECT_EQ(e.failures()[0].index(), 7u);
      EXPECT_EQ(e.code(), ErrorCode::MissingArgument);
    }
  }
}

EduDataset small_dataset(std::size_t n) {
  const auto items = synthetic_items(n, 14);
  const auto cfg = TokenizerConfig::named("pure_text");
  return build_dataset(items, cfg, vocab_for(items, cfg));
}

TEST(Batches, Partition) {
  const auto ds = small_dataset(5);
  BatchIterator it(ds, 2);
  std::vector<std::size_t> sizes, seen;
  while (auto b = it.next()) {
    sizes.push_back(b->indices.size());
    seen.insert(seen.end(), b->indices.begin(), b->indices.end());
    EXPECT_EQ(b->batch.ids.size(), b->indices.size());
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 2, 1}));
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  BatchIterator all(ds, 50);
  EXPECT_EQ(all.next()->indices.size(), 5u);
  EXPECT_FALSE(all.next());
  EXPECT_THROW(BatchIterator(ds, 0), Error);
}

TEST(Batches, SeededShuffle) {
  const auto ds = small_dataset(30);
  BatchIterator a(ds, 4, true, 77), b(ds, 4, true, 77), c(ds, 4, true, 78);
  EXPECT_EQ(a.order(), b.order());
  EXPECT_NE(a.order(), c.order());
  EXPECT_EQ(a.order(), seeded_permutation(30, 77));
  std::vector<std::size_t> seen;
  while (auto x = a.next()) seen.insert(seen.end(), x->indices.begin(), x->indices.end());
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(seen[i], i);
}

// Fisher-Yates driven by splitmix64, written out independently.
TEST(Batches, PermutationOracle) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    std::vector<std::size_t> p(17);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = i;
    std::uint64_t state = seed;
    auto next = [&] {
      std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      return z ^ (z >> 31);
    };
    for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[next() % i]);
    EXPECT_EQ(seeded_permutation(17, seed), p);
  }
}

TEST(Figures, Base64AndAssets) {
  EXPECT_EQ(base64_decode("AQID"), std::string("\x01\x02\x03", 3));
  EXPECT_EQ(base64_decode("aGk="), "hi");
  EXPECT_THROW(base64_decode("A*=="), Error);
  EXPECT_EQ(resolve_figure(Segment::figure_base64("AQID")), std::string("\x01\x02\x03", 3));
  const auto dir = temp_dir("assets");
  write_file(dir + "/ab12.png", std::string("\x89PNG\0x", 6));
  EXPECT_EQ(resolve_figure(Segment::figure("ab12"), dir), std::string("\x89PNG\0x", 6));
  EXPECT_EQ(resolve_figure(Segment::figure_formula("ab12"), dir).size(), 6u);
  try {
    resolve_figure(Segment::figure("zz99"), dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingAsset);
  }
  ::setenv("SIFKIT_ASSET_DIR", dir.c_str(), 1);
  EXPECT_EQ(resolve_figure(Segment::figure("ab12")).size(), 6u);
  ::unsetenv("SIFKIT_ASSET_DIR");
  EXPECT_THROW(resolve_figure(Segment::text("x")), Error);
}

TEST(Cache, RoundTrip) {
  const auto ds = small_dataset(12);
  const auto dir = temp_dir("cache");
  save_dataset(ds, dir);
  const auto back = load_dataset(dir);
  EXPECT_EQ(back.vocab, ds.vocab);
  EXPECT_EQ(config_to_json(back.tokenizer_cfg), config_to_json(ds.tokenizer_cfg));
  ASSERT_EQ(back.token_seqs.size(), ds.token_seqs.size());
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    EXPECT_EQ(back.token_seqs[i], ds.token_seqs[i]);
    EXPECT_EQ(back.item_ids[i], ds.items[i].id);
  }
  EXPECT_THROW(load_dataset(dir + "/nope"), Error);
}

}  // namespace
}  // namespace sifkit
