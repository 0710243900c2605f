#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sqlreward::exec {

enum class CellType { kNull, kInteger, kReal, kText, kDate, kBoolean };

const char* to_string(CellType type);

// One typed value of a result row. Dates are kept in their ISO text form.
class Cell {
 public:
  Cell() = default;

  static Cell integer(std::int64_t v);
  static Cell real(double v);
  static Cell text(std::string v);
  static Cell date(std::string v);
  static Cell boolean(bool v);

  CellType type() const { return type_; }
  bool is_null() const { return type_ == CellType::kNull; }
  // Integer, real and boolean cells are numeric.
  bool is_numeric() const {
    return type_ == CellType::kInteger || type_ == CellType::kReal || type_ == CellType::kBoolean;
  }

  std::int64_t as_integer() const { return int_; }
  bool as_boolean() const { return int_ != 0; }
  // Numeric value of a numeric cell.
  double as_real() const;
  // Text of a text or date cell.
  const std::string& as_text() const { return text_; }

  // Canonical text: "null", decimal integers, shortest round-trip reals,
  // "true"/"false", raw text.
  std::string to_string() const;

  bool operator==(const Cell&) const = default;

 private:
  CellType type_ = CellType::kNull;
  std::int64_t int_ = 0;
  double real_ = 0.0;
  std::string text_;
};

using Row = std::vector<Cell>;

struct ResultTable {
  std::vector<std::string> headers;
  std::vector<Row> rows;

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return headers.size(); }
};

enum class ExecStatus { kOk, kSyntaxError, kResolutionError, kRuntimeError, kEmptyResult };

const char* to_string(ExecStatus status);

struct ExecOutcome {
  ExecStatus status = ExecStatus::kOk;
  std::optional<ResultTable> result;  // present iff status is kOk or kEmptyResult
  std::string message;

  bool succeeded() const {
    return status == ExecStatus::kOk || status == ExecStatus::kEmptyResult;
  }
};

// Exact cell equality used by execution match: numeric cells compare by
// value (1 == 1.0 == true), text and date cells by their text, null only
// equals null.
bool cells_equal(const Cell& a, const Cell& b);

// Row-wise equality of two results. Column names are ignored; only the
// column count must agree. With `ordered` false rows are compared as
// multisets.
bool results_equal(const ResultTable& a, const ResultTable& b, bool ordered);

}  // namespace sqlreward::exec
