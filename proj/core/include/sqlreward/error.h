#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqlreward {

// Base class for every error raised by the library. `kind()` is a stable
// identifier used in CLI/service error payloads.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SQLREWARD_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

SQLREWARD_DEFINE_ERROR(InvalidArgument);
SQLREWARD_DEFINE_ERROR(UnsupportedConstruct);
SQLREWARD_DEFINE_ERROR(IoError);
SQLREWARD_DEFINE_ERROR(SchemaViolation);
SQLREWARD_DEFINE_ERROR(DuplicateTable);
SQLREWARD_DEFINE_ERROR(GoldExecutionFailed);
SQLREWARD_DEFINE_ERROR(EmbedderFailure);
SQLREWARD_DEFINE_ERROR(DimensionMismatch);
SQLREWARD_DEFINE_ERROR(ZeroVector);
SQLREWARD_DEFINE_ERROR(FormatError);
SQLREWARD_DEFINE_ERROR(GroupTooSmall);
SQLREWARD_DEFINE_ERROR(NonPositiveRatio);
SQLREWARD_DEFINE_ERROR(MissingRatios);
SQLREWARD_DEFINE_ERROR(EmptyDimension);
SQLREWARD_DEFINE_ERROR(NotBreakable);
SQLREWARD_DEFINE_ERROR(UnsupportedJoinShape);
SQLREWARD_DEFINE_ERROR(AmbiguousColumn);
SQLREWARD_DEFINE_ERROR(GeneratorFailure);
SQLREWARD_DEFINE_ERROR(UnknownFixture);

#undef SQLREWARD_DEFINE_ERROR

// Malformed SQL. `offset` is a byte offset into the source text; line and
// column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, int line, int column)
      : Error("ParseError", message + " at line " + std::to_string(line) +
                                ", column " + std::to_string(column)),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const noexcept { return offset_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

}  // namespace sqlreward
