#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sqlreward::sql {

// Owning pointer with value semantics: copying a Box deep-copies the pointee.
// Lets the recursive AST types below stay regular (copyable, comparable by
// walking) without shared ownership.
template <typename T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

 private:
  std::unique_ptr<T> ptr_;
};

struct Identifier {
  std::string text;
  bool quoted = false;
};

struct Query;
struct WindowSpec;

enum class ExprKind {
  kColumn,      // path = [qualifier..., column]
  kStar,        // path = optional qualifier
  kLiteral,
  kUnary,       // op in {-, +, ~, NOT}
  kBinary,      // op: OR AND = <> < <= > >= || + - * / % & | << >> IS, IS NOT, LIKE, GLOB, REGEXP, MATCH
  kBetween,     // args = [value, low, high]
  kInList,      // args = [value, items...]
  kInSubquery,  // args = [value], subquery
  kExists,      // subquery
  kSubquery,    // scalar subquery
  kFunction,    // op = name as written; args; distinct; star_arg; filter; over
  kCast,        // args = [value]; op = type name
  kCase,        // args = [operand?] (when, then)* [else?]
  kCollate,     // args = [value]; op = collation
  kTuple,       // args
};

enum class LiteralKind {
  kNumber,
  kString,
  kNull,
  kTrue,
  kFalse,
  kCurrentDate,
  kCurrentTime,
  kCurrentTimestamp,
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  LiteralKind literal = LiteralKind::kNull;
  std::vector<Identifier> path;
  // Literal lexeme (strings unescaped), operator, function name, cast type or
  // collation depending on kind.
  std::string op;
  bool negated = false;
  bool distinct = false;
  bool star_arg = false;
  bool has_operand = false;  // kCase
  bool has_else = false;     // kCase
  std::vector<Expr> args;
  std::optional<Box<Query>> subquery;
  std::optional<Box<Expr>> filter;
  std::optional<Box<WindowSpec>> over;
};

enum class SortDirection { kDefault, kAsc, kDesc };
enum class NullsOrder { kDefault, kFirst, kLast };

struct OrderItem {
  Expr expr;
  SortDirection direction = SortDirection::kDefault;
  NullsOrder nulls = NullsOrder::kDefault;
};

enum class FrameBoundKind {
  kUnboundedPreceding,
  kPreceding,
  kCurrentRow,
  kFollowing,
  kUnboundedFollowing,
};

struct FrameBound {
  FrameBoundKind kind = FrameBoundKind::kCurrentRow;
  std::optional<Expr> offset;
};

struct WindowFrame {
  std::string unit;  // ROWS, RANGE or GROUPS
  FrameBound start;
  std::optional<FrameBound> end;
  std::string exclude;  // empty, NO OTHERS, CURRENT ROW, GROUP, TIES
};

struct WindowSpec {
  std::optional<Identifier> base;
  bool bare_name = false;  // OVER w (no parentheses)
  std::vector<Expr> partition_by;
  std::vector<OrderItem> order_by;
  std::optional<WindowFrame> frame;
};

struct NamedWindow {
  Identifier name;
  WindowSpec spec;
};

enum class TableRefKind { kTable, kSubquery, kJoin };
enum class JoinType { kInner, kLeft, kRight, kFull, kCross };

struct TableRef {
  TableRefKind kind = TableRefKind::kTable;
  std::vector<Identifier> name;  // [schema.]table
  std::optional<Identifier> alias;
  std::optional<Box<Query>> subquery;

  std::optional<Box<TableRef>> left;
  std::optional<Box<TableRef>> right;
  JoinType join_type = JoinType::kInner;
  bool natural = false;
  std::optional<Expr> on;
  std::vector<Identifier> using_columns;
};

struct SelectItem {
  Expr expr;
  std::optional<Identifier> alias;
};

struct SelectCore {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::vector<TableRef> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  std::vector<NamedWindow> windows;
};

enum class SetOp { kUnion, kUnionAll, kIntersect, kExcept };

struct Cte {
  Identifier name;
  std::vector<Identifier> columns;
  Box<Query> query;
};

struct Query {
  bool recursive = false;
  std::vector<Cte> ctes;
  std::vector<SelectCore> cores;  // at least one
  std::vector<SetOp> set_ops;     // cores.size() - 1 entries
  std::vector<OrderItem> order_by;
  std::optional<Expr> limit;
  std::optional<Expr> offset;
};

enum class StatementKind { kSelect, kInsert, kUpdate, kDelete, kCreate, kDrop, kAlter };

struct Statement {
  StatementKind kind = StatementKind::kSelect;
  Query query;  // kSelect only
  // Tables named by a non-SELECT statement.
  std::vector<std::string> tables;
};

const char* to_string(StatementKind kind);
const char* to_string(JoinType type);
const char* to_string(SetOp op);

// Visits every Query reachable from `query` (itself, CTE bodies, derived
// tables, expression subqueries), outer before inner.
template <typename Fn>
void for_each_query(const Query& query, Fn&& fn);
template <typename Fn>
void for_each_query(Query& query, Fn&& fn);

}  // namespace sqlreward::sql

#include "sqlreward/sql/ast_walk.inl"
