#include "pronlex/error.hpp"

namespace pronlex {

namespace {

std::string format_message(ErrorKind kind, const std::string& detail,
                           std::size_t line) {
  std::string msg;
  if (line != 0) msg = "line " + std::to_string(line) + ": ";
  msg += error_kind_name(kind);
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicatePhone: return "DuplicatePhone";
    case ErrorKind::ReservedSymbol: return "ReservedSymbol";
    case ErrorKind::BadOrigin: return "BadOrigin";
    case ErrorKind::UnknownPhone: return "UnknownPhone";
    case ErrorKind::DuplicateUtteranceId: return "DuplicateUtteranceId";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::SpanWordMismatch: return "SpanWordMismatch";
    case ErrorKind::EmptySpan: return "EmptySpan";
    case ErrorKind::OutOfVocabulary: return "OutOfVocabulary";
    case ErrorKind::InventoryMismatch: return "InventoryMismatch";
    case ErrorKind::AlignmentReferenceMismatch: return "AlignmentReferenceMismatch";
    case ErrorKind::MissingUtterance: return "MissingUtterance";
    case ErrorKind::RowMismatch: return "RowMismatch";
    case ErrorKind::EmptyPronunciation: return "EmptyPronunciation";
    case ErrorKind::SizeBound: return "SizeBound";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_format_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicatePhone:
    case ErrorKind::ReservedSymbol:
    case ErrorKind::BadOrigin:
    case ErrorKind::UnknownPhone:
    case ErrorKind::DuplicateUtteranceId:
    case ErrorKind::MalformedLine:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NegativeWeight:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, std::string detail, std::size_t line)
    : std::runtime_error(format_message(kind, detail, line)),
      kind_(kind),
      line_(line),
      detail_(std::move(detail)) {}

}  // namespace pronlex
