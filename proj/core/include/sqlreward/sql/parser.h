#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sqlreward/sql/ast.h"

namespace sqlreward::sql {

enum class Dialect { kGenericAnsi };

// An accepted SQL statement together with its source text. Immutable; copies
// share the parsed tree.
class SqlQuery {
 public:
  SqlQuery(std::string raw_text, std::shared_ptr<const Statement> parsed)
      : raw_text_(std::move(raw_text)), parsed_(std::move(parsed)) {}

  const std::string& raw_text() const { return raw_text_; }
  Dialect dialect() const { return Dialect::kGenericAnsi; }
  const Statement& statement() const { return *parsed_; }
  bool is_select() const { return parsed_->kind == StatementKind::kSelect; }

 private:
  std::string raw_text_;
  std::shared_ptr<const Statement> parsed_;
};

// Parses one statement (an optional trailing semicolon is allowed).
// Throws InvalidArgument for blank input, ParseError for malformed SQL and
// UnsupportedConstruct for valid SQL outside the supported subset.
SqlQuery parse(std::string_view raw_text);

// Like parse() but reports failure as nullopt.
std::optional<SqlQuery> try_parse(std::string_view raw_text) noexcept;

Statement parse_statement(std::string_view raw_text);

// Parses a standalone scalar/predicate expression, e.g. "x = 1 AND y > 2".
Expr parse_expression(std::string_view text);

}  // namespace sqlreward::sql
