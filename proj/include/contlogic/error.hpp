#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contlogic {

enum class ErrorKind {
  Syntax,
  ArityMismatch,
  ConstantOutOfRange,
  FreeVariable,
  UnknownSymbol,
  UnknownElement,
  MissingTableEntry,
  DuplicateEntry,
  ValueOutOfRange,
  VocabularyMismatch,
  DuplicateName,
  MissingSymbol,
  UnboundVariable,
  InvalidArgument,
  LengthMismatch,
  CommonVocabulary,
  HypothesisViolated,
  ProviderFailure,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::ConstantOutOfRange: return "constant out of range";
    case ErrorKind::FreeVariable: return "free variable";
    case ErrorKind::UnknownSymbol: return "unknown symbol";
    case ErrorKind::UnknownElement: return "unknown universe element";
    case ErrorKind::MissingTableEntry: return "missing table entry";
    case ErrorKind::DuplicateEntry: return "duplicate table entry";
    case ErrorKind::ValueOutOfRange: return "value out of range";
    case ErrorKind::VocabularyMismatch: return "vocabulary mismatch";
    case ErrorKind::DuplicateName: return "duplicate name";
    case ErrorKind::MissingSymbol: return "missing symbol";
    case ErrorKind::UnboundVariable: return "unbound variable";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::LengthMismatch: return "length mismatch";
    case ErrorKind::CommonVocabulary: return "common vocabulary violation";
    case ErrorKind::HypothesisViolated: return "hypothesis violated";
    case ErrorKind::ProviderFailure: return "provider failure";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

/// 1-based line/column; zero means "no position".
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail, SourcePos pos = {}, const std::string& source = "")
      : std::runtime_error(format(kind, detail, pos, source)), kind_(kind), detail_(detail), pos_(pos), source_(source) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  SourcePos position() const noexcept { return pos_; }
  bool has_position() const noexcept { return pos_.line != 0; }
  /// File the error was read from, if known.
  const std::string& source() const noexcept { return source_; }

 private:
  static std::string format(ErrorKind kind, const std::string& detail, SourcePos pos, const std::string& source) {
    std::string out;
    if (!source.empty()) out += source + ":";
    if (pos.line != 0) {
      out += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
    }
    if (!source.empty() && pos.line == 0) out += " ";
    out += to_string(kind);
    if (!detail.empty()) out += ": " + detail;
    return out;
  }

  ErrorKind kind_;
  std::string detail_;
  SourcePos pos_;
  std::string source_;
};

}  // namespace contlogic
