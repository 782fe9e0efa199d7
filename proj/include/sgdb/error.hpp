#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgdb {

enum class ErrorCode {
  SchemaError,
  KeyNotFound,
  FieldCollision,
  KeyCollision,
  MissingJoinKey,
  NoCommonField,
  NotJoinable,
  CorruptFile,
  SchemaMismatch,
  IoError,
  UseAfterClose,
  TableLocked,
  LexError,
  ParseError,
  UnknownTable,
  TableExists,
  DuplicateKey,
  MissingColumn,
  CsvError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::KeyNotFound: return "KeyNotFound";
    case ErrorCode::FieldCollision: return "FieldCollision";
    case ErrorCode::KeyCollision: return "KeyCollision";
    case ErrorCode::MissingJoinKey: return "MissingJoinKey";
    case ErrorCode::NoCommonField: return "NoCommonField";
    case ErrorCode::NotJoinable: return "NotJoinable";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UseAfterClose: return "UseAfterClose";
    case ErrorCode::TableLocked: return "TableLocked";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::TableExists: return "TableExists";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::CsvError: return "CsvError";
  }
  return "Unknown";
}

/// Base exception for every failure the engine reports. The code is what
/// callers (and the differential harness) compare; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// 1-based line/column, columns counted in code points.
struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Lexing and parsing failures. Carries where it happened and what would
/// have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, SourcePos pos, const std::string& message,
              std::vector<std::string> expected = {})
      : Error(code, describe(pos, message, expected)),
        pos_(pos),
        detail_(message),
        expected_(std::move(expected)) {}

  const SourcePos& position() const noexcept { return pos_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string describe(SourcePos pos, const std::string& message,
                              const std::vector<std::string>& expected) {
    std::string out = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  SourcePos pos_;
  std::string detail_;
  std::vector<std::string> expected_;
};

}  // namespace sgdb
