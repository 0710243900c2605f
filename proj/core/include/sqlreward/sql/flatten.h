#pragma once

#include <compare>
#include <set>
#include <string>

#include "sqlreward/sql/parser.h"

namespace sqlreward::sql {

// Clause a component was found in, derived from its position in the tree.
enum class ClauseTag {
  kSelect,
  kFrom,
  kJoin,
  kWhere,
  kGroupBy,
  kHaving,
  kOrderBy,
  kLimit,
  kWith,
  kWindow,
  kSetOp,
  kStatement,  // statement kind of non-SELECT statements
};

enum class ComponentKind {
  kColumn,
  kTable,
  kLiteral,
  kPredicateAtom,
  kFunctionCall,
  kAliasBinding,
  kDirection,
  kQuantity,
  kKeyword,  // DISTINCT, join types, set operators, RECURSIVE, statement kinds
};

const char* to_string(ClauseTag tag);
const char* to_string(ComponentKind kind);

// One normalized atom of a query. `text` is lowercase with quote characters
// removed.
struct TaggedComponent {
  ClauseTag clause = ClauseTag::kSelect;
  ComponentKind kind = ComponentKind::kColumn;
  std::string text;

  auto operator<=>(const TaggedComponent&) const = default;
};

std::string to_string(const TaggedComponent& c);

struct SqlComponentSet {
  std::set<TaggedComponent> components;
  std::string source;  // raw text of the query the set was built from

  std::size_t size() const { return components.size(); }
  bool contains(const TaggedComponent& c) const { return components.count(c) != 0; }
};

// Projects a parsed statement into its order-independent component set:
// identifiers are lowercased and unquoted, AND/OR trees and IN lists are
// flattened and sorted, operands of = and <> are put in a fixed order, and
// every atom is tagged with the clause it appears in. Table aliases are
// resolved to table names; a qualifier naming the only table in scope is
// dropped.
SqlComponentSet flatten(const SqlQuery& query);

// F1 overlap of two component sets: 2|P∩G| / (|P|+|G|), 1.0 when both are
// empty.
double s_ast(const SqlComponentSet& pred, const SqlComponentSet& gold);

// Normalized-structure equality: flatten(a) == flatten(b).
bool ast_equal(const SqlQuery& a, const SqlQuery& b);

}  // namespace sqlreward::sql
