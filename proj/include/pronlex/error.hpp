#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pronlex {

enum class ErrorKind {
  // malformed input text (exit code 2)
  DuplicatePhone,
  ReservedSymbol,
  BadOrigin,
  UnknownPhone,
  DuplicateUtteranceId,
  MalformedLine,
  DimensionMismatch,
  NegativeWeight,
  // inputs that parse but violate a cross-record constraint (exit code 3)
  SpanWordMismatch,
  EmptySpan,
  OutOfVocabulary,
  InventoryMismatch,
  AlignmentReferenceMismatch,
  MissingUtterance,
  RowMismatch,
  EmptyPronunciation,
  SizeBound,
  InvalidConfig,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

/// True for errors caused by badly formatted input text.
bool is_format_error(ErrorKind kind) noexcept;

/// Every failure raised by the library. `line` is 1-based, 0 when the error
/// is not tied to a line of input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string detail, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
  std::string detail_;
};

}  // namespace pronlex
