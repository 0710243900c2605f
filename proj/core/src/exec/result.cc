#include "sqlreward/exec/result.h"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace sqlreward::exec {

const char* to_string(CellType type) {
  switch (type) {
    case CellType::kNull: return "null";
    case CellType::kInteger: return "integer";
    case CellType::kReal: return "real";
    case CellType::kText: return "text";
    case CellType::kDate: return "date";
    case CellType::kBoolean: return "boolean";
  }
  return "?";
}

const char* to_string(ExecStatus status) {
  switch (status) {
    case ExecStatus::kOk: return "ok";
    case ExecStatus::kSyntaxError: return "syntax_error";
    case ExecStatus::kResolutionError: return "resolution_error";
    case ExecStatus::kRuntimeError: return "runtime_error";
    case ExecStatus::kEmptyResult: return "empty_result";
  }
  return "?";
}

Cell Cell::integer(std::int64_t v) {
  Cell c;
  c.type_ = CellType::kInteger;
  c.int_ = v;
  return c;
}

Cell Cell::real(double v) {
  Cell c;
  c.type_ = CellType::kReal;
  c.real_ = v;
  return c;
}

Cell Cell::text(std::string v) {
  Cell c;
  c.type_ = CellType::kText;
  c.text_ = std::move(v);
  return c;
}

Cell Cell::date(std::string v) {
  Cell c;
  c.type_ = CellType::kDate;
  c.text_ = std::move(v);
  return c;
}

Cell Cell::boolean(bool v) {
  Cell c;
  c.type_ = CellType::kBoolean;
  c.int_ = v ? 1 : 0;
  return c;
}

double Cell::as_real() const {
  return type_ == CellType::kReal ? real_ : static_cast<double>(int_);
}

std::string Cell::to_string() const {
  switch (type_) {
    case CellType::kNull: return "null";
    case CellType::kInteger: return std::to_string(int_);
    case CellType::kReal: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, real_);
      return std::string(buf, res.ptr);
    }
    case CellType::kBoolean: return int_ ? "true" : "false";
    case CellType::kText:
    case CellType::kDate: return text_;
  }
  return {};
}

namespace {

// 0 null, 1 numeric, 2 text-like.
int cell_class(const Cell& c) {
  if (c.is_null()) return 0;
  return c.is_numeric() ? 1 : 2;
}

bool is_exact_integer(const Cell& c) {
  return c.type() == CellType::kInteger || c.type() == CellType::kBoolean;
}

// Three-way numeric comparison that stays exact for integer pairs.
int compare_numeric(const Cell& a, const Cell& b) {
  if (is_exact_integer(a) && is_exact_integer(b)) {
    return a.as_integer() < b.as_integer() ? -1 : (a.as_integer() > b.as_integer() ? 1 : 0);
  }
  const long double x = is_exact_integer(a) ? static_cast<long double>(a.as_integer()) : a.as_real();
  const long double y = is_exact_integer(b) ? static_cast<long double>(b.as_integer()) : b.as_real();
  return x < y ? -1 : (x > y ? 1 : 0);
}

int compare_cells(const Cell& a, const Cell& b) {
  const int ca = cell_class(a);
  const int cb = cell_class(b);
  if (ca != cb) return ca < cb ? -1 : 1;
  if (ca == 0) return 0;
  if (ca == 1) return compare_numeric(a, b);
  return a.as_text().compare(b.as_text()) < 0 ? -1 : (a.as_text() == b.as_text() ? 0 : 1);
}

bool rows_less(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    const int c = compare_cells(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

bool rows_equal(const Row& a, const Row& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!cells_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool cells_equal(const Cell& a, const Cell& b) { return compare_cells(a, b) == 0; }

bool results_equal(const ResultTable& a, const ResultTable& b, bool ordered) {
  if (a.column_count() != b.column_count()) return false;
  if (a.row_count() != b.row_count()) return false;
  if (ordered) {
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      if (!rows_equal(a.rows[i], b.rows[i])) return false;
    }
    return true;
  }
  std::vector<const Row*> x, y;
  for (const Row& r : a.rows) x.push_back(&r);
  for (const Row& r : b.rows) y.push_back(&r);
  auto less = [](const Row* p, const Row* q) { return rows_less(*p, *q); };
  std::sort(x.begin(), x.end(), less);
  std::sort(y.begin(), y.end(), less);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!rows_equal(*x[i], *y[i])) return false;
  }
  return true;
}

}  // namespace sqlreward::exec
