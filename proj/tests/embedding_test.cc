#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "sifkit/embedding.h"
#include "sifkit/error.h"
#include "sifkit/random.h"
#include "support/corpus.h"

namespace sifkit {
namespace {

namespace fs = std::filesystem;

constexpr double kFdStep = 1e-5;
constexpr double kMaxRelError = 1e-4;

std::string temp_dir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("sifkit_emb_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

double cosine_f(std::span<const float> a, std::span<const float> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  return dot / std::sqrt(na * nb);
}

TrainConfig planted_config(std::uint64_t seed) {
  TrainConfig c;
  c.dim = 16;
  c.window = 2;
  c.min_count = 1;
  c.negatives = 5;
  c.epochs = 5;
  c.seed = seed;
  return c;
}

// Central differences on a 5-token vocabulary: token 0 is the center, 1 the
// context and 2..4 the negatives.
TEST(Sgns, GradientCheck) {
  constexpr int kDim = 6;
  SplitMix64 rng(2024);
  for (int point = 0; point < 10; ++point) {
    std::vector<std::vector<double>> table(5, std::vector<double>(kDim));
    for (auto& row : table)
      for (auto& x : row) x = (rng.uniform() - 0.5) * 1.5;
    auto loss_at = [&](const std::vector<std::vector<double>>& t) {
      return sgns_objective(t[0], t[1], {t[2], t[3], t[4]}).loss;
    };
    const auto g = sgns_objective(table[0], table[1], {table[2], table[3], table[4]});
    EXPECT_NEAR(g.loss, loss_at(table), 0.0);
    double worst = 0;
    for (int r = 0; r < 5; ++r) {
      for (int k = 0; k < kDim; ++k) {
        auto plus = table, minus = table;
        plus[r][k] += kFdStep;
        minus[r][k] -= kFdStep;
        const double numeric = (loss_at(plus) - loss_at(minus)) / (2 * kFdStep);
        const double analytic = r == 0 ? g.center[k] : r == 1 ? g.context[k] : g.negatives[r - 2][k];
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
      }
    }
    EXPECT_LT(worst, kMaxRelError) << "point " << point;
  }
}

TEST(Train, LossDecreasesOnPlantedCorpus) {
  const auto r = train_skipgram(testing::planted_corpus(1), planted_config(1));
  ASSERT_EQ(r.epoch_loss.size(), 5u);
  for (std::size_t e = 1; e < 5; ++e) EXPECT_LT(r.epoch_loss[e], r.epoch_loss[e - 1]) << e;
}

TEST(Train, PlantedCooccurrence) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = train_skipgram(testing::planted_corpus(100 + seed), planted_config(seed)).model;
    const auto& v = m.vocab();
    const auto a = m.row(v.id("alpha")), b = m.row(v.id("beta")), g = m.row(v.id("gamma"));
    if (cosine_f(a, b) > cosine_f(a, g)) ++wins;
  }
  EXPECT_GE(wins, 9);
}

TEST(Train, Deterministic) {
  const auto c = testing::planted_corpus(3, 60);
  const auto a = train_skipgram(c, planted_config(4));
  const auto b = train_skipgram(c, planted_config(4));
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

TEST(Train, Preconditions) {
  auto c = planted_config(0);
  c.epochs = 0;
  EXPECT_THROW(train_skipgram(testing::planted_corpus(1, 10), c), Error);
  c = planted_config(0);
  c.dim = 0;
  EXPECT_THROW(train_skipgram(testing::planted_corpus(1, 10), c), Error);
  EXPECT_THROW(train_skipgram({}, planted_config(0)), Error);
}

Vocab hundred_tokens() {
  std::vector<std::string> t;
  for (int i = 0; i < 100; ++i) t.push_back("tok" + std::to_string(i));
  return Vocab(t, 1);
}

TEST(Hashed, RowDefinition) {
  const auto v = hundred_tokens();
  const auto m = hashed_baseline(v, 8, 5);
  for (std::int64_t id : {std::int64_t{0}, std::int64_t{1}, std::int64_t{57}}) {
    SplitMix64 rng(fnv1a64(v.token(id)) ^ 5);
    const auto row = m.row(id);
    for (int k = 0; k < 8; ++k) {
      const double expect = (rng.uniform() - 0.5) / 8;
      EXPECT_EQ(row[k], static_cast<float>(expect));
      EXPECT_GE(row[k], -0.5f / 8);
      EXPECT_LT(row[k], 0.5f / 8);
    }
  }
  EXPECT_EQ(hashed_baseline(v, 8, 5), m);
  const auto other = hashed_baseline(v, 8, 6);
  EXPECT_NE(other.matrix(), m.matrix());
}

TEST(Lookup, T2vAndI2v) {
  const auto v = hundred_tokens();
  const auto m = hashed_baseline(v, 4, 1);
  const auto rows = t2v(m, TokenSeq{{"tok0"}, std::vector<std::int64_t>{4}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], std::vector<float>(m.row(4).begin(), m.row(4).end()));
  EXPECT_TRUE(t2v(m, TokenSeq{{}, std::vector<std::int64_t>{}}).empty());
  EXPECT_THROW(t2v(m, TokenSeq{{"x"}, std::vector<std::int64_t>{104}}), Error);
  EXPECT_THROW(t2v(m, TokenSeq{{"x"}, std::nullopt}), Error);

  const auto two = mean_pool(m, {5, 9});
  for (int k = 0; k < 4; ++k) EXPECT_EQ(two[k], (double(m.row(5)[k]) + double(m.row(9)[k])) / 2);
  SifItem empty;
  empty.content = "";
  EXPECT_EQ(i2v(m, empty, TokenizerConfig::named("pure_text")), std::vector<double>(4, 0.0));
}

TEST(Lookup, I2vIsMeanOfT2v) {
  const auto items_text = testing::raw_corpus(100, 17);
  const auto cfg = TokenizerConfig::named("pure_text");
  std::vector<std::vector<std::string>> corpus;
  std::vector<SifItem> items;
  for (const auto& s : items_text) {
    SifItem it;
    it.content = s;
    corpus.push_back(tokenize_item(it, cfg).tokens);
    items.push_back(std::move(it));
  }
  const auto m = hashed_baseline(build_vocab(corpus, 2), 12, 3);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto seq = encode(TokenSeq{corpus[i], std::nullopt}, m.vocab());
    const auto rows = t2v(m, seq);
    std::vector<double> mean(12, 0.0);
    for (const auto& r : rows)
      for (int k = 0; k < 12; ++k) mean[k] += r[k];
    if (!rows.empty())
      for (auto& x : mean) x /= static_cast<double>(rows.size());
    EXPECT_EQ(i2v(m, items[i], cfg), mean) << i;
  }
}

TEST(Persist, RoundTripBitExact) {
  const auto trained = train_skipgram(testing::planted_corpus(2, 80), planted_config(2)).model;
  const auto dir = temp_dir("rt");
  save_model(trained, dir);
  const auto back = load_model(dir);
  EXPECT_EQ(back, trained);
  EXPECT_EQ(back.meta(), trained.meta());
  EXPECT_EQ(std::memcmp(back.matrix().data(), trained.matrix().data(), trained.matrix().size() * sizeof(float)), 0);
  const auto hashed = hashed_baseline(hundred_tokens(), 8, 9);
  save_model(hashed, dir);
  EXPECT_EQ(load_model(dir), hashed);
}

ErrorCode load_code(const std::string& dir) {
  try {
    load_model(dir);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

TEST(Persist, Corruption) {
  const auto m = hashed_baseline(hundred_tokens(), 8, 9);
  const auto dir = temp_dir("bad");
  save_model(m, dir);
  const auto w = dir + "/weights.f32";
  fs::resize_file(w, fs::file_size(w) - 3);
  EXPECT_EQ(load_code(dir), ErrorCode::CorruptModel);

  // Weights for dim 16 under a dim 8 header.
  save_model(hashed_baseline(hundred_tokens(), 16, 9), dir);
  auto meta = nlohmann::json::parse(std::ifstream(dir + "/meta.json"));
  meta["dim"] = 8;
  std::ofstream(dir + "/meta.json") << meta.dump();
  EXPECT_EQ(load_code(dir), ErrorCode::CorruptModel);

  save_model(m, dir);
  {
    std::fstream f(w, std::ios::in | std::ios::out | std::ios::binary);
    const float nan = std::nanf("");
    f.write(reinterpret_cast<const char*>(&nan), sizeof nan);
  }
  EXPECT_EQ(load_code(dir), ErrorCode::CorruptModel);
  EXPECT_EQ(load_code(dir + "/none"), ErrorCode::IoError);
}

}  // namespace
}  // namespace sifkit
