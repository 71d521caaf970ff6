#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sifkit/item.h"
#include "sifkit/tokenizer.h"
#include "sifkit/vocab.h"

namespace sifkit {

struct TrainConfig {
  int dim = 128;
  int window = 5;
  int min_count = 20;
  int negatives = 5;
  int epochs = 10;
  double learning_rate = 0.025;
  double min_learning_rate = 1e-4;
  std::uint64_t seed = 0;

  // Throws InvalidArgument.
  void check() const;
};

enum class EmbeddingAlgo : std::uint8_t { SkipGram, Hashed };

struct ModelMeta {
  EmbeddingAlgo algo = EmbeddingAlgo::Hashed;
  TrainConfig train;  // dim and seed are meaningful for both algorithms

  bool operator==(const ModelMeta& o) const;
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // Throws InvalidArgument when the matrix shape does not match.
  EmbeddingModel(Vocab vocab, std::vector<float> matrix, ModelMeta meta);

  const Vocab& vocab() const noexcept { return vocab_; }
  const ModelMeta& meta() const noexcept { return meta_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(meta_.train.dim); }
  std::size_t rows() const noexcept { return vocab_.size(); }
  const std::vector<float>& matrix() const noexcept { return matrix_; }
  // Throws IdOutOfRange.
  std::span<const float> row(std::int64_t id) const;

  bool operator==(const EmbeddingModel& o) const;

 private:
  Vocab vocab_;
  std::vector<float> matrix_;  // row-major rows() x dim()
  ModelMeta meta_;
};

// Negative-sampling loss for one (center, context) pair with its negatives:
//   L = -log s(u_o . v_c) - sum_k log s(-u_k . v_c)
struct SgnsGradient {
  double loss = 0;
  std::vector<double> center;                 // dL/dv_c
  std::vector<double> context;                // dL/du_o
  std::vector<std::vector<double>> negatives;  // dL/du_k
};

SgnsGradient sgns_objective(std::span<const double> center, std::span<const double> context,
                            const std::vector<std::vector<double>>& negatives);

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> epoch_loss;  // mean pair loss per epoch
};

// Skip-gram with negative sampling over a fixed symmetric window.
// Single-threaded, deterministic in cfg.seed. Throws InvalidArgument,
// EmptyCorpus.
TrainResult train_skipgram(const std::vector<std::vector<std::string>>& corpus, const TrainConfig& cfg);

// Row for token t: dim splitmix64 draws seeded with fnv1a64(t) ^ seed,
// each mapped to [-0.5/dim, 0.5/dim).
EmbeddingModel hashed_baseline(const Vocab& vocab, int dim, std::uint64_t seed);

// Throws IdOutOfRange, InvalidArgument for an unencoded sequence.
std::vector<std::vector<float>> t2v(const EmbeddingModel& model, const TokenSeq& seq);

// Mean of the rows of the non-PAD tokens, accumulated in double in token
// order; zero vector when there are none.
std::vector<double> mean_pool(const EmbeddingModel& model, const std::vector<std::int64_t>& ids);
std::vector<double> i2v(const EmbeddingModel& model, const SifItem& item, const TokenizerConfig& cfg);

nlohmann::json meta_to_json(const ModelMeta& meta, std::size_t vocab_size);

// Directory with vocab.txt, weights.f32 (little-endian float32, row-major)
// and meta.json. Throws IoError, CorruptModel.
void save_model(const EmbeddingModel& model, const std::string& dir);
EmbeddingModel load_model(const std::string& dir);

}  // namespace sifkit
