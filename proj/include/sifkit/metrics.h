#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sifkit/embedding.h"
#include "sifkit/error.h"
#include "sifkit/item.h"
#include "sifkit/tokenizer.h"

namespace sifkit {

using LabelSet = std::set<std::string>;

enum class Averaging { Micro, Macro };

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Micro: pooled TP over pooled |pred| and |gold|. Macro: mean of per-label
// scores over every label seen in gold or pred. Vanishing denominators give 0.
// Throws LengthMismatch, InvalidArgument on empty input.
Prf multilabel_prf(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred,
                   Averaging avg = Averaging::Micro);

struct RegressionReport {
  double mae = 0;
  double mse = 0;
  double rmse = 0;
  std::optional<double> r2;  // unset when gold is constant
};

RegressionReport regression_metrics(const std::vector<double>& pred, const std::vector<double>& gold);
// Throws ZeroVariance when gold is constant.
double r2_score(const std::vector<double>& pred, const std::vector<double>& gold);

// Items ranked by pred descending, ties by index; gain 2^rel - 1, discount
// log2(rank + 1). Returns 1 when the ideal DCG is 0.
double ndcg(const std::vector<double>& pred, const std::vector<double>& gold, std::optional<std::size_t> k = std::nullopt);

// Throws LengthMismatch, InvalidArgument (fewer than 2 values), ZeroVariance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);
// 1-based ranks, ties share the average rank.
std::vector<double> average_ranks(const std::vector<double>& x);

template <typename T>
double accuracy(const std::vector<T>& pred, const std::vector<T>& gold) {
  if (pred.size() != gold.size()) throw Error(ErrorCode::LengthMismatch, "pred and gold differ in length");
  if (pred.empty()) throw Error(ErrorCode::InvalidArgument, "accuracy of an empty list");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == gold[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

// Throws DimMismatch, ZeroNorm.
double cosine(const std::vector<double>& u, const std::vector<double>& v);

struct MetricReport {
  std::map<std::string, double> values;
  std::size_t sample_count = 0;
  std::size_t excluded = 0;           // pairs dropped for a zero vector
  std::optional<std::string> error;   // e.g. ZeroVariance on degenerate input
  std::vector<double> predictions;    // per pair, NaN when excluded
};

nlohmann::json report_to_json(const MetricReport& r);

// Cosine of the pooled item vectors per pair, correlated with gold as
// "pcc" and "scc". Throws LengthMismatch, InvalidArgument (< 2 pairs),
// RangeViolation (gold outside [0,1]).
MetricReport similarity_task(const EmbeddingModel& model, const std::vector<std::pair<SifItem, SifItem>>& pairs,
                             const std::vector<double>& gold, const TokenizerConfig& cfg);

struct ResponseRecord {
  std::string item_id;
  std::string student_id;
  bool correct = false;
};

// Throws DuplicateRecord on a repeated (item, student) pair.
void check_responses(const std::vector<ResponseRecord>& log);

// 1 - pass rate. Throws NoRecords.
double difficulty_from_responses(const std::vector<ResponseRecord>& log, const std::string& item_id);

// P_u - P_l over the students who answered the item, ranked by their total
// correct count (desc) then id (asc); each group holds ceil(fraction * n)
// students. Throws NoRecords, InsufficientStudents, InvalidArgument.
double discrimination_from_responses(const std::vector<ResponseRecord>& log, const std::string& item_id,
                                     double fraction = 0.27);

// Difficulty and discrimination labels are published at 4 decimals.
double round_label(double x, int digits = 4);

}  // namespace sifkit
