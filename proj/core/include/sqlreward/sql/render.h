#pragma once

#include <string>

#include "sqlreward/sql/ast.h"
#include "sqlreward/sql/parser.h"

namespace sqlreward::sql {

// Renders an AST back to SQL text. Output re-parses to an equivalent tree;
// keywords are uppercase and parentheses are emitted only where precedence
// requires them.
std::string render(const Expr& expr);
std::string render(const Query& query);

// SELECT statements are rendered from the tree; other statement kinds are
// returned as their original text.
std::string render(const SqlQuery& query);

std::string quote_identifier(const Identifier& id);

}  // namespace sqlreward::sql
