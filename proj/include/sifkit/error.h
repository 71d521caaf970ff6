#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sifkit {

enum class ErrorCode {
  // item_model
  MalformedJson,
  MissingContent,
  RangeViolation,
  // sif_parser / segmenter
  NotSif,
  Unconvertible,
  // formula_engine
  LexError,
  MissingArgument,
  UnbalancedBrace,
  UnknownStructure,
  // tokenizer / vocab / batching
  InvalidArgument,
  EmptyCorpus,
  EmptyBatch,
  TokenizeFailed,
  // dataset_io
  IoError,
  MissingAsset,
  BadBase64,
  EmptyDataset,
  // embedding
  IdOutOfRange,
  CorruptModel,
  // eval_metrics
  LengthMismatch,
  ZeroVariance,
  ZeroNorm,
  DimMismatch,
  NoRecords,
  InsufficientStudents,
  DuplicateRecord,
  // pipeline
  UnknownStep,
  BadParams,
  BadPosition,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception type. `index`
// locates the failure in a collection (line number, item index, formula
// index, step index) and `offset` inside a string, when meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::size_t>& index() const noexcept { return index_; }
  const std::optional<std::size_t>& offset() const noexcept { return offset_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> index_;
  std::optional<std::size_t> offset_;
};

// Several independent failures collected from a batch operation. code() is
// the code of the lowest-indexed failure.
class AggregateError : public Error {
 public:
  explicit AggregateError(std::vector<Error> failures);

  const std::vector<Error>& failures() const noexcept { return failures_; }

 private:
  std::vector<Error> failures_;
};

}  // namespace sifkit
