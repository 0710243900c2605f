#include "sqlreward/sql/flatten.h"

#include <algorithm>
#include <cctype>
#include <vector>

namespace sqlreward::sql {
namespace {

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\'' || c == '"' || c == '`') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

struct Source {
  std::string binding;  // alias, or table name when unaliased
  std::string table;    // base table name; empty for derived tables
};

struct Scope {
  std::vector<Source> sources;
  const Scope* parent = nullptr;
};

void collect_sources(const TableRef& t, std::vector<Source>& out) {
  switch (t.kind) {
    case TableRefKind::kTable: {
      std::string table = normalize(t.name.back().text);
      out.push_back({t.alias ? normalize(t.alias->text) : table, table});
      break;
    }
    case TableRefKind::kSubquery:
      out.push_back({t.alias ? normalize(t.alias->text) : std::string(), std::string()});
      break;
    case TableRefKind::kJoin:
      collect_sources(**t.left, out);
      collect_sources(**t.right, out);
      break;
  }
}

bool is_and_or(const Expr& e) {
  return e.kind == ExprKind::kBinary && (e.op == "AND" || e.op == "OR");
}

void flatten_chain(const Expr& e, const std::string& op, std::vector<const Expr*>& out) {
  if (e.kind == ExprKind::kBinary && e.op == op) {
    flatten_chain(e.args[0], op, out);
    flatten_chain(e.args[1], op, out);
  } else {
    out.push_back(&e);
  }
}

std::string direction_suffix(const OrderItem& item) {
  std::string s = item.direction == SortDirection::kDesc ? " desc" : " asc";
  if (item.nulls == NullsOrder::kFirst) s += " nulls first";
  if (item.nulls == NullsOrder::kLast) s += " nulls last";
  return s;
}

std::string join_keyword(const TableRef& t) {
  std::string s = t.natural ? "natural " : "";
  switch (t.join_type) {
    case JoinType::kInner: s += "inner join"; break;
    case JoinType::kLeft: s += "left join"; break;
    case JoinType::kRight: s += "right join"; break;
    case JoinType::kFull: s += "full join"; break;
    case JoinType::kCross: s += "cross join"; break;
  }
  return s;
}

class Flattener {
 public:
  explicit Flattener(std::set<TaggedComponent>& out) : out_(out) {}

  void statement(const Statement& stmt) {
    if (stmt.kind != StatementKind::kSelect) {
      emit(ClauseTag::kStatement, ComponentKind::kKeyword, to_string(stmt.kind));
      for (const auto& t : stmt.tables) {
        const auto dot = t.rfind('.');
        emit(ClauseTag::kFrom, ComponentKind::kTable,
             normalize(dot == std::string::npos ? t : t.substr(dot + 1)));
      }
      return;
    }
    query(stmt.query, nullptr);
  }

  void query(const Query& q, const Scope* outer) {
    if (q.recursive) emit(ClauseTag::kWith, ComponentKind::kKeyword, "recursive");
    for (const Cte& cte : q.ctes) {
      emit(ClauseTag::kWith, ComponentKind::kAliasBinding, normalize(cte.name.text));
      for (const auto& c : cte.columns) {
        emit(ClauseTag::kWith, ComponentKind::kColumn, normalize(c.text));
      }
      query(*cte.query, outer);
    }
    for (SetOp op : q.set_ops) {
      emit(ClauseTag::kSetOp, ComponentKind::kKeyword, normalize(to_string(op)));
    }

    Scope first_scope;
    for (std::size_t i = 0; i < q.cores.size(); ++i) {
      Scope scope;
      scope.parent = outer;
      for (const auto& t : q.cores[i].from) collect_sources(t, scope.sources);
      core(q.cores[i], scope);
      if (i == 0) first_scope = scope;
    }

    for (const OrderItem& item : q.order_by) {
      value(ClauseTag::kOrderBy, item.expr, first_scope);
      emit(ClauseTag::kOrderBy, ComponentKind::kDirection,
           canon(item.expr, first_scope) + direction_suffix(item));
    }
    if (q.limit) {
      emit(ClauseTag::kLimit, ComponentKind::kQuantity, canon(*q.limit, first_scope));
      subqueries(*q.limit, first_scope);
    }
    if (q.offset) {
      emit(ClauseTag::kLimit, ComponentKind::kQuantity, "offset " + canon(*q.offset, first_scope));
      subqueries(*q.offset, first_scope);
    }
  }

 private:
  void emit(ClauseTag tag, ComponentKind kind, std::string text) {
    out_.insert(TaggedComponent{tag, kind, std::move(text)});
  }

  void core(const SelectCore& c, const Scope& scope) {
    if (c.distinct) emit(ClauseTag::kSelect, ComponentKind::kKeyword, "distinct");
    for (const SelectItem& item : c.items) {
      value(ClauseTag::kSelect, item.expr, scope);
      if (item.alias) {
        emit(ClauseTag::kSelect, ComponentKind::kAliasBinding, normalize(item.alias->text));
      }
    }
    for (const TableRef& t : c.from) table(t, ClauseTag::kFrom, scope);
    if (c.where) predicate(ClauseTag::kWhere, *c.where, scope);
    for (const Expr& g : c.group_by) value(ClauseTag::kGroupBy, g, scope);
    if (c.having) predicate(ClauseTag::kHaving, *c.having, scope);
    for (const NamedWindow& w : c.windows) {
      emit(ClauseTag::kWindow, ComponentKind::kAliasBinding, normalize(w.name.text));
      window(w.spec, scope);
    }
  }

  void table(const TableRef& t, ClauseTag position, const Scope& scope) {
    switch (t.kind) {
      case TableRefKind::kTable:
        emit(position, ComponentKind::kTable, normalize(t.name.back().text));
        break;
      case TableRefKind::kSubquery:
        // Derived tables see only the enclosing query's scope.
        query(**t.subquery, scope.parent);
        break;
      case TableRefKind::kJoin:
        table(**t.left, position, scope);
        table(**t.right, ClauseTag::kJoin, scope);
        emit(ClauseTag::kJoin, ComponentKind::kKeyword, join_keyword(t));
        if (t.on) predicate(ClauseTag::kJoin, *t.on, scope);
        for (const auto& c : t.using_columns) {
          emit(ClauseTag::kJoin, ComponentKind::kColumn, normalize(c.text));
        }
        break;
    }
  }

  // A boolean condition: one atom per top-level conjunct, plus the columns
  // and literals it mentions.
  void predicate(ClauseTag tag, const Expr& e, const Scope& scope) {
    std::vector<const Expr*> conjuncts;
    flatten_chain(e, "AND", conjuncts);
    for (const Expr* c : conjuncts) emit(tag, ComponentKind::kPredicateAtom, canon(*c, scope));
    leaves(tag, e, scope, /*literals=*/true);
    subqueries(e, scope);
  }

  // A scalar in SELECT/GROUP BY/ORDER BY/PARTITION BY position.
  void value(ClauseTag tag, const Expr& e, const Scope& scope) {
    switch (e.kind) {
      case ExprKind::kColumn:
      case ExprKind::kStar:
        emit(tag, ComponentKind::kColumn, canon(e, scope));
        break;
      case ExprKind::kLiteral:
        emit(tag, ComponentKind::kLiteral, canon(e, scope));
        break;
      default:
        emit(tag, ComponentKind::kFunctionCall, canon(e, scope));
        leaves(tag, e, scope, /*literals=*/false);
        break;
    }
    for_each_expr(e, [&](const Expr& node) {
      if (node.over && !(*node.over)->bare_name) window(**node.over, scope);
    });
    subqueries(e, scope);
  }

  void window(const WindowSpec& w, const Scope& scope) {
    if (w.base) emit(ClauseTag::kWindow, ComponentKind::kAliasBinding, normalize(w.base->text));
    for (const Expr& p : w.partition_by) value(ClauseTag::kWindow, p, scope);
    for (const OrderItem& o : w.order_by) {
      value(ClauseTag::kWindow, o.expr, scope);
      emit(ClauseTag::kWindow, ComponentKind::kDirection, canon(o.expr, scope) + direction_suffix(o));
    }
    if (w.frame) emit(ClauseTag::kWindow, ComponentKind::kQuantity, frame(*w.frame, scope));
  }

  void leaves(ClauseTag tag, const Expr& e, const Scope& scope, bool literals) {
    for_each_expr(e, [&](const Expr& node) {
      if (node.kind == ExprKind::kColumn) {
        emit(tag, ComponentKind::kColumn, canon(node, scope));
      } else if (literals && node.kind == ExprKind::kLiteral) {
        emit(tag, ComponentKind::kLiteral, canon(node, scope));
      }
    });
  }

  void subqueries(const Expr& e, const Scope& scope) {
    for_each_expr(e, [&](const Expr& node) {
      if (node.subquery) query(**node.subquery, &scope);
    });
  }

  // ---- canonical text --------------------------------------------------------

  static std::string column(const std::vector<Identifier>& path, const Scope& scope) {
    const std::string name = normalize(path.back().text);
    if (path.size() == 1) return name;
    const std::string qualifier = normalize(path[path.size() - 2].text);
    if (scope.sources.size() == 1 && scope.sources[0].binding == qualifier) return name;
    for (const Scope* s = &scope; s != nullptr; s = s->parent) {
      for (const Source& src : s->sources) {
        if (src.binding == qualifier) {
          return (src.table.empty() ? qualifier : src.table) + "." + name;
        }
      }
    }
    return qualifier + "." + name;
  }

  std::string canon(const Expr& e, const Scope& scope) {
    switch (e.kind) {
      case ExprKind::kColumn:
        return column(e.path, scope);
      case ExprKind::kStar: {
        if (e.path.empty()) return "*";
        std::vector<Identifier> path = e.path;
        path.push_back(Identifier{"*", false});
        return column(path, scope);
      }
      case ExprKind::kLiteral:
        return normalize(e.op);
      case ExprKind::kUnary:
        if (e.op == "NOT") return "not " + operand(e.args[0], scope);
        return e.op + operand(e.args[0], scope);
      case ExprKind::kBinary: {
        if (is_and_or(e)) {
          std::vector<const Expr*> parts;
          flatten_chain(e, e.op, parts);
          std::vector<std::string> texts;
          for (const Expr* p : parts) texts.push_back(operand(*p, scope));
          std::sort(texts.begin(), texts.end());
          std::string joiner = e.op == "AND" ? " and " : " or ";
          std::string out;
          for (std::size_t i = 0; i < texts.size(); ++i) {
            if (i) out += joiner;
            out += texts[i];
          }
          return out;
        }
        std::string lhs = operand(e.args[0], scope);
        std::string rhs = operand(e.args[1], scope);
        if ((e.op == "=" || e.op == "<>") && rhs < lhs) std::swap(lhs, rhs);
        std::string op = normalize(e.op);
        if (e.negated) op = "not " + op;
        std::string out = lhs + " " + op + " " + rhs;
        if (e.args.size() > 2) out += " escape " + operand(e.args[2], scope);
        return out;
      }
      case ExprKind::kBetween:
        return operand(e.args[0], scope) + (e.negated ? " not between " : " between ") +
               operand(e.args[1], scope) + " and " + operand(e.args[2], scope);
      case ExprKind::kInList: {
        std::vector<std::string> items;
        for (std::size_t i = 1; i < e.args.size(); ++i) items.push_back(canon(e.args[i], scope));
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        std::string out = operand(e.args[0], scope) + (e.negated ? " not in (" : " in (");
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (i) out += ", ";
          out += items[i];
        }
        return out + ")";
      }
      case ExprKind::kInSubquery:
        return operand(e.args[0], scope) + (e.negated ? " not in (" : " in (") +
               subquery_text(**e.subquery, scope) + ")";
      case ExprKind::kExists:
        return std::string(e.negated ? "not exists (" : "exists (") +
               subquery_text(**e.subquery, scope) + ")";
      case ExprKind::kSubquery:
        return "(" + subquery_text(**e.subquery, scope) + ")";
      case ExprKind::kFunction: {
        std::string out = normalize(e.op) + "(";
        if (e.star_arg) {
          out += "*";
        } else {
          if (e.distinct) out += "distinct ";
          for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += ", ";
            out += canon(e.args[i], scope);
          }
        }
        out += ")";
        if (e.filter) out += " filter (where " + canon(**e.filter, scope) + ")";
        if (e.over) {
          const WindowSpec& w = **e.over;
          out += w.bare_name ? " over " + normalize(w.base->text)
                             : " over (" + window_text(w, scope) + ")";
        }
        return out;
      }
      case ExprKind::kCast:
        return "cast(" + canon(e.args[0], scope) + " as " + normalize(e.op) + ")";
      case ExprKind::kCase: {
        std::string out = "case";
        std::size_t i = 0;
        if (e.has_operand) out += " " + canon(e.args[i++], scope);
        const std::size_t stop = e.args.size() - (e.has_else ? 1 : 0);
        for (; i < stop; i += 2) {
          out += " when " + canon(e.args[i], scope) + " then " + canon(e.args[i + 1], scope);
        }
        if (e.has_else) out += " else " + canon(e.args.back(), scope);
        return out + " end";
      }
      case ExprKind::kCollate:
        return operand(e.args[0], scope) + " collate " + normalize(e.op);
      case ExprKind::kTuple: {
        std::string out = "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out += ", ";
          out += canon(e.args[i], scope);
        }
        return out + ")";
      }
    }
    return {};
  }

  // Nested operators are parenthesized so distinct trees stay distinct.
  std::string operand(const Expr& e, const Scope& scope) {
    const bool compound = e.kind == ExprKind::kBinary || e.kind == ExprKind::kBetween ||
                          e.kind == ExprKind::kInList || e.kind == ExprKind::kInSubquery ||
                          (e.kind == ExprKind::kUnary && e.op == "NOT");
    std::string text = canon(e, scope);
    return compound ? "(" + text + ")" : text;
  }

  std::string window_text(const WindowSpec& w, const Scope& scope) {
    std::vector<std::string> parts;
    if (w.base) parts.push_back(normalize(w.base->text));
    if (!w.partition_by.empty()) {
      std::string s = "partition by ";
      for (std::size_t i = 0; i < w.partition_by.size(); ++i) {
        if (i) s += ", ";
        s += canon(w.partition_by[i], scope);
      }
      parts.push_back(s);
    }
    if (!w.order_by.empty()) {
      std::string s = "order by ";
      for (std::size_t i = 0; i < w.order_by.size(); ++i) {
        if (i) s += ", ";
        s += canon(w.order_by[i].expr, scope) + direction_suffix(w.order_by[i]);
      }
      parts.push_back(s);
    }
    if (w.frame) parts.push_back(frame(*w.frame, scope));
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ' ';
      out += parts[i];
    }
    return out;
  }

  std::string bound(const FrameBound& b, const Scope& scope) {
    switch (b.kind) {
      case FrameBoundKind::kUnboundedPreceding: return "unbounded preceding";
      case FrameBoundKind::kPreceding: return canon(*b.offset, scope) + " preceding";
      case FrameBoundKind::kCurrentRow: return "current row";
      case FrameBoundKind::kFollowing: return canon(*b.offset, scope) + " following";
      case FrameBoundKind::kUnboundedFollowing: return "unbounded following";
    }
    return {};
  }

  std::string frame(const WindowFrame& f, const Scope& scope) {
    std::string out = normalize(f.unit) + " ";
    if (f.end) {
      out += "between " + bound(f.start, scope) + " and " + bound(*f.end, scope);
    } else {
      out += bound(f.start, scope);
    }
    if (!f.exclude.empty()) out += " exclude " + normalize(f.exclude);
    return out;
  }

  // A subquery's text is its own sorted component list, so it inherits the
  // same order invariance as the outer query.
  std::string subquery_text(const Query& q, const Scope& scope) {
    std::set<TaggedComponent> inner;
    Flattener(inner).query(q, &scope);
    std::string out;
    for (const auto& c : inner) {
      if (!out.empty()) out += "; ";
      out += to_string(c);
    }
    return out;
  }

  std::set<TaggedComponent>& out_;
};

}  // namespace

const char* to_string(ClauseTag tag) {
  switch (tag) {
    case ClauseTag::kSelect: return "SELECT";
    case ClauseTag::kFrom: return "FROM";
    case ClauseTag::kJoin: return "JOIN";
    case ClauseTag::kWhere: return "WHERE";
    case ClauseTag::kGroupBy: return "GROUP_BY";
    case ClauseTag::kHaving: return "HAVING";
    case ClauseTag::kOrderBy: return "ORDER_BY";
    case ClauseTag::kLimit: return "LIMIT";
    case ClauseTag::kWith: return "WITH";
    case ClauseTag::kWindow: return "WINDOW";
    case ClauseTag::kSetOp: return "SET_OP";
    case ClauseTag::kStatement: return "STATEMENT";
  }
  return "?";
}

const char* to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kColumn: return "column";
    case ComponentKind::kTable: return "table";
    case ComponentKind::kLiteral: return "literal";
    case ComponentKind::kPredicateAtom: return "predicate-atom";
    case ComponentKind::kFunctionCall: return "function-call";
    case ComponentKind::kAliasBinding: return "alias-binding";
    case ComponentKind::kDirection: return "direction";
    case ComponentKind::kQuantity: return "quantity";
    case ComponentKind::kKeyword: return "keyword";
  }
  return "?";
}

std::string to_string(const TaggedComponent& c) {
  return std::string(to_string(c.clause)) + "|" + to_string(c.kind) + "|" + c.text;
}

SqlComponentSet flatten(const SqlQuery& query) {
  SqlComponentSet set;
  set.source = query.raw_text();
  Flattener(set.components).statement(query.statement());
  return set;
}

double s_ast(const SqlComponentSet& pred, const SqlComponentSet& gold) {
  const std::size_t total = pred.size() + gold.size();
  if (total == 0) return 1.0;
  std::size_t common = 0;
  for (const auto& c : pred.components) common += gold.contains(c) ? 1 : 0;
  return 2.0 * static_cast<double>(common) / static_cast<double>(total);
}

bool ast_equal(const SqlQuery& a, const SqlQuery& b) {
  return flatten(a).components == flatten(b).components;
}

}  // namespace sqlreward::sql
