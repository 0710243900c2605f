#include "sqlreward/sql/render.h"

namespace sqlreward::sql {
namespace {

enum Prec : int {
  kOr = 1,
  kAnd = 2,
  kNot = 3,
  kEquality = 4,
  kComparison = 5,
  kBitwise = 6,
  kAdditive = 7,
  kMultiplicative = 8,
  kConcat = 9,
  kUnaryPrec = 10,
  kCollatePrec = 11,
  kPrimary = 12,
};

int binary_precedence(const std::string& op) {
  if (op == "OR") return kOr;
  if (op == "AND") return kAnd;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return kComparison;
  if (op == "&" || op == "|" || op == "<<" || op == ">>") return kBitwise;
  if (op == "+" || op == "-") return kAdditive;
  if (op == "*" || op == "/" || op == "%") return kMultiplicative;
  if (op == "||") return kConcat;
  return kEquality;  // = <> IS IS NOT LIKE GLOB REGEXP MATCH
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kBinary: return binary_precedence(e.op);
    case ExprKind::kUnary: return e.op == "NOT" ? kNot : kUnaryPrec;
    case ExprKind::kBetween:
    case ExprKind::kInList:
    case ExprKind::kInSubquery: return kEquality;
    case ExprKind::kCollate: return kCollatePrec;
    default: return kPrimary;
  }
}

std::string string_literal(const std::string& value) {
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

class Renderer {
 public:
  std::string expr(const Expr& e, int min_prec = 0) {
    std::string body = expr_body(e);
    if (precedence(e) < min_prec) return "(" + body + ")";
    return body;
  }

  std::string query(const Query& q) {
    std::string out;
    if (!q.ctes.empty()) {
      out += q.recursive ? "WITH RECURSIVE " : "WITH ";
      for (std::size_t i = 0; i < q.ctes.size(); ++i) {
        const Cte& cte = q.ctes[i];
        if (i) out += ", ";
        out += quote_identifier(cte.name);
        if (!cte.columns.empty()) out += "(" + identifiers(cte.columns) + ")";
        out += " AS (" + query(*cte.query) + ")";
      }
      out += ' ';
    }
    for (std::size_t i = 0; i < q.cores.size(); ++i) {
      if (i) out += std::string(" ") + to_string(q.set_ops[i - 1]) + " ";
      out += core(q.cores[i]);
    }
    if (!q.order_by.empty()) out += " ORDER BY " + order_items(q.order_by);
    if (q.limit) out += " LIMIT " + expr(*q.limit);
    if (q.offset) out += " OFFSET " + expr(*q.offset);
    return out;
  }

 private:
  std::string identifiers(const std::vector<Identifier>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += ", ";
      out += quote_identifier(ids[i]);
    }
    return out;
  }

  std::string path(const std::vector<Identifier>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += '.';
      out += quote_identifier(ids[i]);
    }
    return out;
  }

  std::string expr_list(const std::vector<Expr>& list, std::size_t from = 0) {
    std::string out;
    for (std::size_t i = from; i < list.size(); ++i) {
      if (i > from) out += ", ";
      out += expr(list[i]);
    }
    return out;
  }

  std::string expr_body(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kColumn:
        return path(e.path);
      case ExprKind::kStar:
        return e.path.empty() ? "*" : path(e.path) + ".*";
      case ExprKind::kLiteral:
        return e.literal == LiteralKind::kString ? string_literal(e.op) : e.op;
      case ExprKind::kUnary: {
        if (e.op == "NOT") return "NOT " + expr(e.args[0], kNot);
        std::string operand = expr(e.args[0], kUnaryPrec);
        if (!operand.empty() && (operand[0] == '-' || operand[0] == '+')) operand = " " + operand;
        return e.op + operand;
      }
      case ExprKind::kBinary: {
        const int p = binary_precedence(e.op);
        std::string op = e.op;
        if (e.negated) op = "NOT " + op;
        std::string out = expr(e.args[0], p) + " " + op + " " + expr(e.args[1], p + 1);
        if (e.args.size() > 2) out += " ESCAPE " + expr(e.args[2], p + 1);
        return out;
      }
      case ExprKind::kBetween:
        return expr(e.args[0], kEquality) + (e.negated ? " NOT BETWEEN " : " BETWEEN ") +
               expr(e.args[1], kComparison) + " AND " + expr(e.args[2], kComparison);
      case ExprKind::kInList:
        return expr(e.args[0], kEquality) + (e.negated ? " NOT IN (" : " IN (") +
               expr_list(e.args, 1) + ")";
      case ExprKind::kInSubquery:
        return expr(e.args[0], kEquality) + (e.negated ? " NOT IN (" : " IN (") +
               query(**e.subquery) + ")";
      case ExprKind::kExists:
        return std::string(e.negated ? "NOT EXISTS (" : "EXISTS (") + query(**e.subquery) + ")";
      case ExprKind::kSubquery:
        return "(" + query(**e.subquery) + ")";
      case ExprKind::kFunction: {
        std::string out = e.op + "(";
        if (e.star_arg) {
          out += "*";
        } else {
          if (e.distinct) out += "DISTINCT ";
          out += expr_list(e.args);
        }
        out += ")";
        if (e.filter) out += " FILTER (WHERE " + expr(**e.filter) + ")";
        if (e.over) {
          const WindowSpec& w = **e.over;
          out += w.bare_name ? " OVER " + quote_identifier(*w.base) : " OVER " + window(w);
        }
        return out;
      }
      case ExprKind::kCast:
        return "CAST(" + expr(e.args[0]) + " AS " + e.op + ")";
      case ExprKind::kCase: {
        std::string out = "CASE";
        std::size_t i = 0;
        if (e.has_operand) out += " " + expr(e.args[i++]);
        const std::size_t stop = e.args.size() - (e.has_else ? 1 : 0);
        for (; i < stop; i += 2) {
          out += " WHEN " + expr(e.args[i]) + " THEN " + expr(e.args[i + 1]);
        }
        if (e.has_else) out += " ELSE " + expr(e.args.back());
        return out + " END";
      }
      case ExprKind::kCollate:
        return expr(e.args[0], kCollatePrec) + " COLLATE " + e.op;
      case ExprKind::kTuple:
        return "(" + expr_list(e.args) + ")";
    }
    return {};
  }

  std::string frame_bound(const FrameBound& b) {
    switch (b.kind) {
      case FrameBoundKind::kUnboundedPreceding: return "UNBOUNDED PRECEDING";
      case FrameBoundKind::kPreceding: return expr(*b.offset) + " PRECEDING";
      case FrameBoundKind::kCurrentRow: return "CURRENT ROW";
      case FrameBoundKind::kFollowing: return expr(*b.offset) + " FOLLOWING";
      case FrameBoundKind::kUnboundedFollowing: return "UNBOUNDED FOLLOWING";
    }
    return {};
  }

  std::string window(const WindowSpec& w) {
    std::string out;
    auto sep = [&out] {
      if (!out.empty()) out += ' ';
    };
    if (w.base) out += quote_identifier(*w.base);
    if (!w.partition_by.empty()) {
      sep();
      out += "PARTITION BY " + expr_list(w.partition_by);
    }
    if (!w.order_by.empty()) {
      sep();
      out += "ORDER BY " + order_items(w.order_by);
    }
    if (w.frame) {
      sep();
      out += w.frame->unit + " ";
      if (w.frame->end) {
        out += "BETWEEN " + frame_bound(w.frame->start) + " AND " + frame_bound(*w.frame->end);
      } else {
        out += frame_bound(w.frame->start);
      }
      if (!w.frame->exclude.empty()) out += " EXCLUDE " + w.frame->exclude;
    }
    return "(" + out + ")";
  }

  std::string order_items(const std::vector<OrderItem>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += expr(items[i].expr);
      if (items[i].direction == SortDirection::kAsc) out += " ASC";
      if (items[i].direction == SortDirection::kDesc) out += " DESC";
      if (items[i].nulls == NullsOrder::kFirst) out += " NULLS FIRST";
      if (items[i].nulls == NullsOrder::kLast) out += " NULLS LAST";
    }
    return out;
  }

  std::string table(const TableRef& t) {
    switch (t.kind) {
      case TableRefKind::kTable: {
        std::string out = path(t.name);
        if (t.alias) out += " AS " + quote_identifier(*t.alias);
        return out;
      }
      case TableRefKind::kSubquery: {
        std::string out = "(" + query(**t.subquery) + ")";
        if (t.alias) out += " AS " + quote_identifier(*t.alias);
        return out;
      }
      case TableRefKind::kJoin: {
        std::string out = table(**t.left) + " ";
        if (t.natural) out += "NATURAL ";
        switch (t.join_type) {
          case JoinType::kInner: out += "JOIN "; break;
          case JoinType::kLeft: out += "LEFT JOIN "; break;
          case JoinType::kRight: out += "RIGHT JOIN "; break;
          case JoinType::kFull: out += "FULL JOIN "; break;
          case JoinType::kCross: out += "CROSS JOIN "; break;
        }
        out += table(**t.right);
        if (t.on) out += " ON " + expr(*t.on);
        if (!t.using_columns.empty()) out += " USING (" + identifiers(t.using_columns) + ")";
        return out;
      }
    }
    return {};
  }

  std::string core(const SelectCore& c) {
    std::string out = c.distinct ? "SELECT DISTINCT " : "SELECT ";
    for (std::size_t i = 0; i < c.items.size(); ++i) {
      if (i) out += ", ";
      out += expr(c.items[i].expr);
      if (c.items[i].alias) out += " AS " + quote_identifier(*c.items[i].alias);
    }
    if (!c.from.empty()) {
      out += " FROM ";
      for (std::size_t i = 0; i < c.from.size(); ++i) {
        if (i) out += ", ";
        out += table(c.from[i]);
      }
    }
    if (c.where) out += " WHERE " + expr(*c.where);
    if (!c.group_by.empty()) out += " GROUP BY " + expr_list(c.group_by);
    if (c.having) out += " HAVING " + expr(*c.having);
    if (!c.windows.empty()) {
      out += " WINDOW ";
      for (std::size_t i = 0; i < c.windows.size(); ++i) {
        if (i) out += ", ";
        out += quote_identifier(c.windows[i].name) + " AS " + window(c.windows[i].spec);
      }
    }
    return out;
  }
};

}  // namespace

std::string quote_identifier(const Identifier& id) {
  if (!id.quoted) return id.text;
  std::string out = "\"";
  for (char c : id.text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Expr& expr) { return Renderer().expr(expr); }

std::string render(const Query& query) { return Renderer().query(query); }

std::string render(const SqlQuery& query) {
  if (!query.is_select()) return query.raw_text();
  return Renderer().query(query.statement().query);
}

}  // namespace sqlreward::sql
