#include "sifkit/embedding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sifkit/error.h"
#include "sifkit/random.h"

namespace sifkit {

namespace fs = std::filesystem;

void TrainConfig::check() const {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  if (negatives < 1) throw Error(ErrorCode::InvalidArgument, "negatives must be >= 1");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
  if (!(learning_rate > 0) || !(min_learning_rate >= 0) || min_learning_rate > learning_rate)
    throw Error(ErrorCode::InvalidArgument, "learning rates must satisfy 0 <= min <= start, start > 0");
}

bool ModelMeta::operator==(const ModelMeta& o) const {
  const auto& a = train;
  const auto& b = o.train;
  return algo == o.algo && a.dim == b.dim && a.window == b.window && a.min_count == b.min_count &&
         a.negatives == b.negatives && a.epochs == b.epochs && a.learning_rate == b.learning_rate &&
         a.min_learning_rate == b.min_learning_rate && a.seed == b.seed;
}

EmbeddingModel::EmbeddingModel(Vocab vocab, std::vector<float> matrix, ModelMeta meta)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)), meta_(meta) {
  if (meta_.train.dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  if (matrix_.size() != vocab_.size() * dim())
    throw Error(ErrorCode::InvalidArgument, "matrix size does not match vocab_size x dim");
}

std::span<const float> EmbeddingModel::row(std::int64_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= rows())
    throw Error(ErrorCode::IdOutOfRange,
                "token id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(rows()));
  return {matrix_.data() + static_cast<std::size_t>(id) * dim(), dim()};
}

bool EmbeddingModel::operator==(const EmbeddingModel& o) const {
  if (!(vocab_ == o.vocab_) || !(meta_ == o.meta_) || matrix_.size() != o.matrix_.size()) return false;
  return std::memcmp(matrix_.data(), o.matrix_.data(), matrix_.size() * sizeof(float)) == 0;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log s(x), stable for large |x|.
double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SgnsGradient sgns_objective(std::span<const double> center, std::span<const double> context,
                            const std::vector<std::vector<double>>& negatives) {
  const std::size_t d = center.size();
  if (context.size() != d) throw Error(ErrorCode::DimMismatch, "context dimension differs from center");
  SgnsGradient g;
  g.center.assign(d, 0.0);
  const double so = dot(context.data(), center.data(), d);
  g.loss = -log_sigmoid(so);
  const double co = sigmoid(so) - 1.0;
  g.context.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.context[i] = co * center[i];
    g.center[i] += co * context[i];
  }
  for (const auto& u : negatives) {
    if (u.size() != d) throw Error(ErrorCode::DimMismatch, "negative dimension differs from center");
    const double sk = dot(u.data(), center.data(), d);
    g.loss -= log_sigmoid(-sk);
    const double ck = sigmoid(sk);
    std::vector<double> gu(d);
    for (std::size_t i = 0; i < d; ++i) {
      gu[i] = ck * center[i];
      g.center[i] += ck * u[i];
    }
    g.negatives.push_back(std::move(gu));
  }
  return g;
}

TrainResult train_skipgram(const std::vector<std::vector<std::string>>& corpus, const TrainConfig& cfg) {
  cfg.check();
  TokenCounter counter;
  for (const auto& s : corpus) counter.add(s);
  if (counter.total() == 0) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");
  Vocab vocab = build_vocab(counter, cfg.min_count);
  if (vocab.size() <= 4) throw Error(ErrorCode::EmptyCorpus, "no token reaches min_count");

  const std::size_t V = vocab.size();
  const std::size_t d = static_cast<std::size_t>(cfg.dim);

  // Out-of-vocabulary tokens are dropped from the training stream.
  std::vector<std::vector<std::int64_t>> sentences;
  std::size_t total_tokens = 0;
  for (const auto& s : corpus) {
    std::vector<std::int64_t> ids;
    for (const auto& t : s)
      if (vocab.contains(t)) ids.push_back(vocab.id(t));
    total_tokens += ids.size();
    sentences.push_back(std::move(ids));
  }

  // Noise distribution: unigram^0.75 over regular tokens.
  std::vector<double> cumulative(V, 0.0);
  double acc = 0;
  for (std::size_t id = 0; id < V; ++id) {
    if (id >= 4) acc += std::pow(static_cast<double>(counter.counts().at(vocab.token(static_cast<std::int64_t>(id)))), 0.75);
    cumulative[id] = acc;
  }

  SplitMix64 rng(cfg.seed);
  std::vector<double> in(V * d), out(V * d, 0.0);
  for (auto& x : in) x = (rng.uniform() - 0.5) / static_cast<double>(d);

  auto draw_negative = [&]() -> std::size_t {
    const double r = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) --it;
    return static_cast<std::size_t>(it - cumulative.begin());
  };

  TrainResult result;
  const double total_steps = static_cast<double>(cfg.epochs) * static_cast<double>(std::max<std::size_t>(total_tokens, 1));
  double processed = 0;
  std::vector<double> grad_center(d);
  std::vector<std::size_t> negs;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0;
    std::size_t pairs = 0;
    for (const auto& sent : sentences) {
      const std::size_t n = sent.size();
      for (std::size_t c = 0; c < n; ++c, processed += 1) {
        const double lr = cfg.learning_rate - (cfg.learning_rate - cfg.min_learning_rate) * (processed / total_steps);
        const std::size_t lo = c >= static_cast<std::size_t>(cfg.window) ? c - static_cast<std::size_t>(cfg.window) : 0;
        const std::size_t hi = std::min(n - 1, c + static_cast<std::size_t>(cfg.window));
        double* v = &in[static_cast<std::size_t>(sent[c]) * d];
        for (std::size_t o = lo; o <= hi; ++o) {
          if (o == c) continue;
          const std::size_t target = static_cast<std::size_t>(sent[o]);
          negs.clear();
          for (int k = 0; k < cfg.negatives; ++k) {
            const std::size_t neg = draw_negative();
            if (neg != target) negs.push_back(neg);
          }
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          double* u = &out[target * d];
          const double so = dot(u, v, d);
          double loss = -log_sigmoid(so);
          const double co = sigmoid(so) - 1.0;
          for (std::size_t i = 0; i < d; ++i) {
            grad_center[i] += co * u[i];
            u[i] -= lr * co * v[i];
          }
          for (auto k : negs) {
            double* uk = &out[k * d];
            const double sk = dot(uk, v, d);
            loss -= log_sigmoid(-sk);
            const double ck = sigmoid(sk);
            for (std::size_t i = 0; i < d; ++i) {
              grad_center[i] += ck * uk[i];
              uk[i] -= lr * ck * v[i];
            }
          }
          for (std::size_t i = 0; i < d; ++i) v[i] -= lr * grad_center[i];
          loss_sum += loss;
          ++pairs;
        }
      }
    }
    result.epoch_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
  }

  std::vector<float> matrix(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) matrix[i] = static_cast<float>(in[i]);
  ModelMeta meta{EmbeddingAlgo::SkipGram, cfg};
  result.model = EmbeddingModel(std::move(vocab), std::move(matrix), meta);
  return result;
}

EmbeddingModel hashed_baseline(const Vocab& vocab, int dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  const std::size_t d = static_cast<std::size_t>(dim);
  std::vector<float> matrix(vocab.size() * d);
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    SplitMix64 rng(fnv1a64(vocab.tokens()[r]) ^ seed);
    for (std::size_t j = 0; j < d; ++j)
      matrix[r * d + j] = static_cast<float>((rng.uniform() - 0.5) / static_cast<double>(d));
  }
  ModelMeta meta;
  meta.algo = EmbeddingAlgo::Hashed;
  meta.train.dim = dim;
  meta.train.seed = seed;
  return EmbeddingModel(vocab, std::move(matrix), meta);
}

std::vector<std::vector<float>> t2v(const EmbeddingModel& model, const TokenSeq& seq) {
  if (!seq.ids) throw Error(ErrorCode::InvalidArgument, "sequence is not encoded");
  std::vector<std::vector<float>> out;
  out.reserve(seq.ids->size());
  for (auto id : *seq.ids) {
    auto r = model.row(id);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

std::vector<double> mean_pool(const EmbeddingModel& model, const std::vector<std::int64_t>& ids) {
  std::vector<double> acc(model.dim(), 0.0);
  std::size_t n = 0;
  for (auto id : ids) {
    auto r = model.row(id);
    if (id == kPadId) continue;
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += static_cast<double>(r[j]);
    ++n;
  }
  if (n > 0)
    for (auto& x : acc) x /= static_cast<double>(n);
  return acc;
}

std::vector<double> i2v(const EmbeddingModel& model, const SifItem& item, const TokenizerConfig& cfg) {
  const auto seq = encode(tokenize_item(item, cfg), model.vocab());
  return mean_pool(model, *seq.ids);
}

namespace {

std::string_view algo_name(EmbeddingAlgo a) { return a == EmbeddingAlgo::SkipGram ? "skipgram" : "hashed"; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

nlohmann::json meta_to_json(const ModelMeta& meta, std::size_t vocab_size) {
  const auto& t = meta.train;
  return {{"algo", algo_name(meta.algo)},
          {"dim", t.dim},
          {"seed", t.seed},
          {"window", t.window},
          {"min_count", t.min_count},
          {"negatives", t.negatives},
          {"epochs", t.epochs},
          {"learning_rate", t.learning_rate},
          {"min_learning_rate", t.min_learning_rate},
          {"vocab_size", vocab_size}};
}

void save_model(const EmbeddingModel& model, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  save_vocab(model.vocab(), (fs::path(dir) / "vocab.txt").string());
  {
    std::ofstream out(fs::path(dir) / "meta.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write meta.json in " + dir);
    out << meta_to_json(model.meta(), model.rows()).dump(2) << "\n";
  }
  std::string bytes(model.matrix().size() * 4, '\0');
  for (std::size_t i = 0; i < model.matrix().size(); ++i) {
    const auto u = std::bit_cast<std::uint32_t>(model.matrix()[i]);
    for (int b = 0; b < 4; ++b) bytes[i * 4 + b] = static_cast<char>((u >> (8 * b)) & 0xFF);
  }
  std::ofstream out(fs::path(dir) / "weights.f32", std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write weights.f32 in " + dir);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for weights.f32");
}

EmbeddingModel load_model(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error(ErrorCode::IoError, "model directory " + dir + " not found");
  Vocab vocab = vocab_from_string(read_file(root / "vocab.txt"));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(root / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModel, std::string("meta.json: ") + e.what());
  }
  ModelMeta meta;
  std::size_t vocab_size = 0;
  try {
    const auto algo = j.at("algo").get<std::string>();
    if (algo == "skipgram") meta.algo = EmbeddingAlgo::SkipGram;
    else if (algo == "hashed") meta.algo = EmbeddingAlgo::Hashed;
    else throw Error(ErrorCode::CorruptModel, "unknown algo '" + algo + "'");
    auto& t = meta.train;
    t.dim = j.at("dim").get<int>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.window = j.at("window").get<int>();
    t.min_count = j.at("min_count").get<int>();
    t.negatives = j.at("negatives").get<int>();
    t.epochs = j.at("epochs").get<int>();
    t.learning_rate = j.at("learning_rate").get<double>();
    t.min_learning_rate = j.at("min_learning_rate").get<double>();
    vocab_size = j.at("vocab_size").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModel, std::string("meta.json: ") + e.what());
  }
  if (meta.train.dim < 1) throw Error(ErrorCode::CorruptModel, "meta dim must be >= 1");
  if (vocab_size != vocab.size())
    throw Error(ErrorCode::CorruptModel, "meta vocab_size " + std::to_string(vocab_size) + " but vocab.txt has " +
                                             std::to_string(vocab.size()) + " tokens");
  const std::string bytes = read_file(root / "weights.f32");
  const std::size_t expect = vocab_size * static_cast<std::size_t>(meta.train.dim) * 4;
  if (bytes.size() != expect)
    throw Error(ErrorCode::CorruptModel, "weights.f32 has " + std::to_string(bytes.size()) + " bytes, expected " +
                                             std::to_string(expect));
  std::vector<float> matrix(bytes.size() / 4);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + b])) << (8 * b);
    matrix[i] = std::bit_cast<float>(u);
    if (!std::isfinite(matrix[i])) throw Error(ErrorCode::CorruptModel, "non-finite weight", i);
  }
  return EmbeddingModel(std::move(vocab), std::move(matrix), meta);
}

}  // namespace sifkit
