#include "sifkit/error.h"

#include <algorithm>

namespace sifkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::MissingContent: return "MissingContent";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::NotSif: return "NotSif";
    case ErrorCode::Unconvertible: return "Unconvertible";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::MissingArgument: return "MissingArgument";
    case ErrorCode::UnbalancedBrace: return "UnbalancedBrace";
    case ErrorCode::UnknownStructure: return "UnknownStructure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::TokenizeFailed: return "TokenizeFailed";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingAsset: return "MissingAsset";
    case ErrorCode::BadBase64: return "BadBase64";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::CorruptModel: return "CorruptModel";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NoRecords: return "NoRecords";
    case ErrorCode::InsufficientStudents: return "InsufficientStudents";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::UnknownStep: return "UnknownStep";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadPosition: return "BadPosition";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           const std::optional<std::size_t>& index,
                           const std::optional<std::size_t>& offset) {
  std::string out(to_string(code));
  if (index) out += " [index " + std::to_string(*index) + "]";
  if (offset) out += " [offset " + std::to_string(*offset) + "]";
  if (!message.empty()) out += ": " + message;
  return out;
}

std::vector<Error> sorted(std::vector<Error> failures) {
  std::stable_sort(failures.begin(), failures.end(), [](const Error& a, const Error& b) {
    return a.index().value_or(0) < b.index().value_or(0);
  });
  return failures;
}

std::string summarize(const std::vector<Error>& failures) {
  std::string out = std::to_string(failures.size()) + " failure(s)";
  for (const auto& f : failures) {
    out += "; ";
    out += f.what();
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index,
             std::optional<std::size_t> offset)
    : std::runtime_error(format_message(code, message, index, offset)),
      code_(code),
      detail_(message),
      index_(index),
      offset_(offset) {}

AggregateError::AggregateError(std::vector<Error> failures)
    : Error(failures.empty() ? ErrorCode::InvalidArgument : sorted(failures).front().code(),
            summarize(sorted(failures)),
            failures.empty() ? std::nullopt : sorted(failures).front().index()),
      failures_(sorted(std::move(failures))) {}

}  // namespace sifkit
