#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sifkit/embedding.h"
#include "sifkit/error.h"
#include "sifkit/item.h"
#include "sifkit/metrics.h"
#include "sifkit/tokenizer.h"
#include "sifkit/vocab.h"

namespace sifkit {

// Preprocess steps: to_sif, validate, seg, tokenize, encode.
// Tasks: embed, similarity, metrics.
//
// Config JSON:
//   {"preprocess": [step, ...], "task": task, "on_error": "fail"|"skip",
//    "workers": N}
// A step or task is {"name": n, "params": {...}}, {"<name>": {...}} or the
// bare name string. Every form normalizes to the first one with defaults
// filled in.
class Pipeline {
 public:
  // Validates everything, loads vocabularies and models. Throws UnknownStep
  // or BadParams, both indexed by step position (the task is at position
  // preprocess.size()).
  static Pipeline build(const nlohmann::json& cfg);

  // New pipeline with `step` inserted at `position` (appended when absent).
  // Throws BadPosition, UnknownStep, BadParams.
  Pipeline add_pipe(const nlohmann::json& step, std::optional<std::size_t> position = std::nullopt) const;

  // Normalized configuration; build(config()) yields an equal config.
  const nlohmann::json& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return steps_.size(); }
  std::vector<std::string> step_names() const;
  std::optional<std::string> task_name() const;

  struct Record {
    std::size_t index = 0;
    SifItem item;
    std::optional<SegmentList> segments;
    std::optional<TokenSeq> tokens;
  };

  struct Result {
    std::vector<Record> records;          // successfully preprocessed, input order
    std::vector<Error> failures;          // tolerant mode only
    std::optional<nlohmann::json> task;   // task output, when a task is set
  };

  // Applies the steps left to right per item, then the task. In fail-fast
  // mode the first failing item throws, naming its id and the step.
  Result run(const std::vector<SifItem>& items) const;

  // Similarity over explicit pairs; item pairs are preprocessed first.
  MetricReport run_pairs(const std::vector<std::pair<SifItem, SifItem>>& pairs, const std::vector<double>& gold) const;

  // One output JSON object per record (embed adds "vector").
  static nlohmann::json record_to_json(const Record& r);

  struct Step;
  struct Task;

 private:
  Pipeline() = default;
  Record apply(std::size_t index, const SifItem& item) const;

  nlohmann::json config_;
  std::vector<std::shared_ptr<const Step>> steps_;
  std::shared_ptr<const Task> task_;
  bool tolerant_ = false;
  int workers_ = 1;
};

// Pairs file: {"content1", "content2", "similarity"} per line.
struct PairSet {
  std::vector<std::pair<SifItem, SifItem>> pairs;
  std::vector<double> gold;
};
PairSet load_pairs(const std::string& path);

// Response log: {"item_id", "student_id", "correct"} per line.
std::vector<ResponseRecord> load_responses(const std::string& path);

// {"id", "value"} per line.
std::map<std::string, double> load_values(const std::string& path);

// Regression-style metrics joined by id. Names: mae, mse, rmse, r2, ndcg,
// pcc, scc. Throws InvalidArgument for unknown names, LengthMismatch when an
// id lacks a prediction.
MetricReport regression_report(const std::map<std::string, double>& pred, const std::map<std::string, double>& gold,
                               const std::vector<std::string>& metrics);

}  // namespace sifkit
