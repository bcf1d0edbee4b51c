#ifndef COMMENTREL_ERROR_HPP
#define COMMENTREL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace commentrel {

enum class ErrorKind {
  // corpus
  MissingColumn,
  UnparsableLabel,
  EmptyCorpus,
  MalformedCsv,
  UnlabeledCorpus,
  // features / selection
  EmptyVocabulary,
  SingleClassCorpus,
  ColumnOutOfRange,
  // classifiers
  DimensionMismatch,
  // evaluation
  FoldInfeasible,
  LengthMismatch,
  EmptyReport,
  // orchestration
  UnknownRun,
  SchemaMismatch,
  MissingComponent,
  Usage,
  Io,
  Format,
};

std::string_view error_kind_name(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Row-scoped label failure; `row` is the 1-based data row (header excluded).
class UnparsableLabelError : public Error {
 public:
  UnparsableLabelError(std::size_t row, const std::string& value)
      : Error(ErrorKind::UnparsableLabel,
              "row=" + std::to_string(row) + " value='" + value + "'"),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::UnparsableLabel: return "UnparsableLabel";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::UnlabeledCorpus: return "UnlabeledCorpus";
    case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::SingleClassCorpus: return "SingleClassCorpus";
    case ErrorKind::ColumnOutOfRange: return "ColumnOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FoldInfeasible: return "FoldInfeasible";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyReport: return "EmptyReport";
    case ErrorKind::UnknownRun: return "UnknownRun";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::MissingComponent: return "MissingComponent";
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace commentrel

#endif  // COMMENTREL_ERROR_HPP
