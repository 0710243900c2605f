#include "sqlreward/sql/parser.h"

#include <algorithm>
#include <iterator>
#include <cctype>

#include "sqlreward/error.h"
#include "sqlreward/sql/lexer.h"

namespace sqlreward::sql {
namespace {

// Words that never act as bare identifiers or implicit aliases.
constexpr std::string_view kReserved[] = {
    "ALL",       "AND",        "AS",        "ASC",          "BETWEEN",     "BY",
    "CASE",      "CAST",       "COLLATE",   "CROSS",        "CURRENT_DATE", "CURRENT_TIME",
    "CURRENT_TIMESTAMP", "DELETE", "DESC",  "DISTINCT",     "DROP",        "ELSE",
    "END",       "ESCAPE",     "EXCEPT",    "EXISTS",       "FROM",        "FULL",
    "GLOB",      "GROUP",      "HAVING",    "IN",           "INNER",       "INSERT",
    "INTERSECT", "IS",         "ISNULL",    "JOIN",         "LEFT",        "LIKE",
    "LIMIT",     "NATURAL",    "NOT",       "NOTNULL",      "NULL",        "OFFSET",
    "ON",        "OR",         "ORDER",     "OUTER",        "REGEXP",      "RIGHT",
    "SELECT",    "THEN",       "UNION",     "UPDATE",       "USING",       "WHEN",
    "WHERE",     "WITH",
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_reserved(const Token& t) {
  if (t.kind != TokenKind::kWord) return false;
  const std::string u = upper(t.text);
  return std::find(std::begin(kReserved), std::end(kReserved), u) != std::end(kReserved);
}

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source), tokens_(tokenize(source)) {}

  Statement statement() {
    Statement stmt;
    const Token& t = peek();
    if (t.is_word("SELECT") || t.is_word("WITH")) {
      stmt.kind = StatementKind::kSelect;
      stmt.query = query();
    } else if (t.is_word("INSERT") || t.is_word("REPLACE")) {
      stmt.kind = StatementKind::kInsert;
      insert_statement(stmt);
    } else if (t.is_word("UPDATE")) {
      stmt.kind = StatementKind::kUpdate;
      update_statement(stmt);
    } else if (t.is_word("DELETE")) {
      stmt.kind = StatementKind::kDelete;
      delete_statement(stmt);
    } else if (t.is_word("CREATE")) {
      stmt.kind = StatementKind::kCreate;
      create_statement(stmt);
    } else if (t.is_word("DROP")) {
      stmt.kind = StatementKind::kDrop;
      drop_statement(stmt);
    } else if (t.is_word("ALTER")) {
      stmt.kind = StatementKind::kAlter;
      alter_statement(stmt);
    } else if (t.is_word("VALUES") || t.is_word("PRAGMA") || t.is_word("ATTACH") ||
               t.is_word("BEGIN") || t.is_word("EXPLAIN")) {
      throw UnsupportedConstruct(upper(t.text) + " statements are not supported");
    } else {
      fail(t, "expected a statement");
    }
    finish();
    return stmt;
  }

  Expr standalone_expression() {
    Expr e = expr();
    if (peek().kind != TokenKind::kEnd) fail(peek(), "unexpected token after expression");
    return e;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept_word(std::string_view w) {
    if (peek().is_word(w)) {
      next();
      return true;
    }
    return false;
  }
  bool accept_punct(std::string_view p) {
    if (peek().is_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail(peek(), "expected " + std::string(w));
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
  }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    std::string near = at.kind == TokenKind::kEnd ? "end of input" : "'" + at.text + "'";
    throw_parse_error(source_, at.offset, what + " near " + near);
  }

  void finish() {
    while (accept_punct(";")) {
      if (peek().kind != TokenKind::kEnd) {
        throw UnsupportedConstruct("multiple statements are not supported");
      }
    }
    if (peek().kind != TokenKind::kEnd) fail(peek(), "unexpected token");
  }

  bool at_identifier() const {
    const Token& t = peek();
    return t.kind == TokenKind::kQuotedIdentifier ||
           (t.kind == TokenKind::kWord && !is_reserved(t));
  }

  Identifier identifier(const char* what = "identifier") {
    const Token& t = peek();
    if (t.kind == TokenKind::kQuotedIdentifier) {
      next();
      return Identifier{t.text, true};
    }
    if (t.kind == TokenKind::kWord && !is_reserved(t)) {
      next();
      return Identifier{t.text, false};
    }
    fail(t, std::string("expected ") + what);
  }

  std::vector<Identifier> qualified_name() {
    std::vector<Identifier> parts{identifier("table name")};
    while (peek().is_punct(".") && peek(1).kind != TokenKind::kPunct) {
      next();
      parts.push_back(identifier());
    }
    return parts;
  }

  std::optional<Identifier> optional_alias() {
    if (accept_word("AS")) {
      if (peek().kind == TokenKind::kString) return Identifier{next().text, true};
      return identifier("alias");
    }
    if (peek().kind == TokenKind::kString) return Identifier{next().text, true};
    if (at_identifier()) return identifier();
    return std::nullopt;
  }

  // Skips a parenthesized token group starting at '('.
  void skip_balanced() {
    expect_punct("(");
    int depth = 1;
    while (depth > 0) {
      const Token& t = next();
      if (t.kind == TokenKind::kEnd) fail(t, "unbalanced parentheses");
      if (t.is_punct("(")) ++depth;
      if (t.is_punct(")")) --depth;
    }
  }

  // ---- queries -------------------------------------------------------------

  Query query() {
    Query q;
    if (accept_word("WITH")) {
      q.recursive = accept_word("RECURSIVE");
      do {
        Cte cte;
        cte.name = identifier("CTE name");
        if (accept_punct("(")) {
          do {
            cte.columns.push_back(identifier("column name"));
          } while (accept_punct(","));
          expect_punct(")");
        }
        expect_word("AS");
        if (accept_word("NOT")) {
          expect_word("MATERIALIZED");
        } else {
          accept_word("MATERIALIZED");
        }
        expect_punct("(");
        cte.query = query();
        expect_punct(")");
        q.ctes.push_back(std::move(cte));
      } while (accept_punct(","));
    }
    q.cores.push_back(select_core());
    for (;;) {
      if (accept_word("UNION")) {
        q.set_ops.push_back(accept_word("ALL") ? SetOp::kUnionAll : SetOp::kUnion);
      } else if (accept_word("INTERSECT")) {
        q.set_ops.push_back(SetOp::kIntersect);
      } else if (accept_word("EXCEPT")) {
        q.set_ops.push_back(SetOp::kExcept);
      } else {
        break;
      }
      q.cores.push_back(select_core());
    }
    if (accept_word("ORDER")) {
      expect_word("BY");
      q.order_by = order_items();
    }
    if (accept_word("LIMIT")) {
      Expr first = expr();
      if (accept_word("OFFSET")) {
        q.limit = std::move(first);
        q.offset = expr();
      } else if (accept_punct(",")) {
        q.offset = std::move(first);
        q.limit = expr();
      } else {
        q.limit = std::move(first);
      }
    }
    return q;
  }

  SelectCore select_core() {
    if (peek().is_word("VALUES")) throw UnsupportedConstruct("VALUES lists are not supported");
    expect_word("SELECT");
    SelectCore core;
    if (accept_word("DISTINCT")) {
      core.distinct = true;
    } else {
      accept_word("ALL");
    }
    do {
      core.items.push_back(select_item());
    } while (accept_punct(","));

    if (accept_word("FROM")) core.from = from_clause();
    if (accept_word("WHERE")) core.where = expr();
    if (accept_word("GROUP")) {
      expect_word("BY");
      do {
        core.group_by.push_back(expr());
      } while (accept_punct(","));
    }
    if (accept_word("HAVING")) core.having = expr();
    if (accept_word("WINDOW")) {
      do {
        NamedWindow w;
        w.name = identifier("window name");
        expect_word("AS");
        w.spec = window_spec_body();
        core.windows.push_back(std::move(w));
      } while (accept_punct(","));
    }
    return core;
  }

  SelectItem select_item() {
    SelectItem item;
    if (peek().is_punct("*")) {
      next();
      item.expr.kind = ExprKind::kStar;
      return item;
    }
    // t.* / s.t.*
    std::size_t k = 0;
    while ((peek(k).kind == TokenKind::kWord || peek(k).kind == TokenKind::kQuotedIdentifier) &&
           peek(k + 1).is_punct(".")) {
      k += 2;
    }
    if (k > 0 && peek(k).is_punct("*")) {
      item.expr.kind = ExprKind::kStar;
      for (std::size_t i = 0; i < k; i += 2) item.expr.path.push_back(identifier());
      while (!peek().is_punct("*")) next();
      next();
      return item;
    }
    item.expr = expr();
    item.alias = optional_alias();
    return item;
  }

  std::vector<TableRef> from_clause() {
    std::vector<TableRef> refs;
    do {
      refs.push_back(join_chain());
    } while (accept_punct(","));
    return refs;
  }

  TableRef join_chain() {
    TableRef left = table_primary();
    for (;;) {
      const std::size_t save = pos_;
      bool natural = accept_word("NATURAL");
      JoinType type = JoinType::kInner;
      bool is_join = false;
      if (accept_word("LEFT")) {
        accept_word("OUTER");
        type = JoinType::kLeft;
      } else if (accept_word("RIGHT")) {
        accept_word("OUTER");
        type = JoinType::kRight;
      } else if (accept_word("FULL")) {
        accept_word("OUTER");
        type = JoinType::kFull;
      } else if (accept_word("INNER")) {
        type = JoinType::kInner;
      } else if (accept_word("CROSS")) {
        type = JoinType::kCross;
      }
      if (accept_word("JOIN")) {
        is_join = true;
      }
      if (!is_join) {
        if (pos_ != save) fail(peek(), "expected JOIN");
        break;
      }
      TableRef join;
      join.kind = TableRefKind::kJoin;
      join.join_type = type;
      join.natural = natural;
      join.left = std::move(left);
      join.right = table_primary();
      if (accept_word("ON")) {
        join.on = expr();
      } else if (accept_word("USING")) {
        expect_punct("(");
        do {
          join.using_columns.push_back(identifier("column name"));
        } while (accept_punct(","));
        expect_punct(")");
      }
      left = std::move(join);
    }
    return left;
  }

  TableRef table_primary() {
    TableRef ref;
    if (accept_punct("(")) {
      if (!(peek().is_word("SELECT") || peek().is_word("WITH"))) {
        throw UnsupportedConstruct("parenthesized join clauses are not supported");
      }
      ref.kind = TableRefKind::kSubquery;
      ref.subquery = query();
      expect_punct(")");
      ref.alias = optional_alias();
      return ref;
    }
    ref.kind = TableRefKind::kTable;
    ref.name = qualified_name();
    if (peek().is_punct("(")) {
      throw UnsupportedConstruct("table-valued functions are not supported");
    }
    ref.alias = optional_alias();
    if (accept_word("INDEXED")) {
      expect_word("BY");
      identifier();
    } else if (peek().is_word("NOT") && peek(1).is_word("INDEXED")) {
      next();
      next();
    }
    return ref;
  }

  std::vector<OrderItem> order_items() {
    std::vector<OrderItem> items;
    do {
      OrderItem item;
      item.expr = expr();
      if (accept_word("ASC")) {
        item.direction = SortDirection::kAsc;
      } else if (accept_word("DESC")) {
        item.direction = SortDirection::kDesc;
      }
      if (accept_word("NULLS")) {
        if (accept_word("FIRST")) {
          item.nulls = NullsOrder::kFirst;
        } else {
          expect_word("LAST");
          item.nulls = NullsOrder::kLast;
        }
      }
      items.push_back(std::move(item));
    } while (accept_punct(","));
    return items;
  }

  WindowSpec window_spec_body() {
    WindowSpec spec;
    expect_punct("(");
    if (at_identifier() && !peek().is_word("PARTITION") && !peek().is_word("ROWS") &&
        !peek().is_word("RANGE") && !peek().is_word("GROUPS")) {
      spec.base = identifier("window name");
    }
    if (accept_word("PARTITION")) {
      expect_word("BY");
      do {
        spec.partition_by.push_back(expr());
      } while (accept_punct(","));
    }
    if (accept_word("ORDER")) {
      expect_word("BY");
      spec.order_by = order_items();
    }
    if (peek().is_word("ROWS") || peek().is_word("RANGE") || peek().is_word("GROUPS")) {
      WindowFrame frame;
      frame.unit = upper(next().text);
      if (accept_word("BETWEEN")) {
        frame.start = frame_bound();
        expect_word("AND");
        frame.end = frame_bound();
      } else {
        frame.start = frame_bound();
      }
      if (accept_word("EXCLUDE")) {
        if (accept_word("NO")) {
          expect_word("OTHERS");
          frame.exclude = "NO OTHERS";
        } else if (accept_word("CURRENT")) {
          expect_word("ROW");
          frame.exclude = "CURRENT ROW";
        } else if (accept_word("GROUP")) {
          frame.exclude = "GROUP";
        } else {
          expect_word("TIES");
          frame.exclude = "TIES";
        }
      }
      spec.frame = std::move(frame);
    }
    expect_punct(")");
    return spec;
  }

  FrameBound frame_bound() {
    FrameBound b;
    if (accept_word("UNBOUNDED")) {
      if (accept_word("PRECEDING")) {
        b.kind = FrameBoundKind::kUnboundedPreceding;
      } else {
        expect_word("FOLLOWING");
        b.kind = FrameBoundKind::kUnboundedFollowing;
      }
      return b;
    }
    if (accept_word("CURRENT")) {
      expect_word("ROW");
      b.kind = FrameBoundKind::kCurrentRow;
      return b;
    }
    b.offset = additive();
    if (accept_word("PRECEDING")) {
      b.kind = FrameBoundKind::kPreceding;
    } else {
      expect_word("FOLLOWING");
      b.kind = FrameBoundKind::kFollowing;
    }
    return b;
  }

  // ---- DML / DDL (coarse) ---------------------------------------------------

  void conflict_clause() {
    if (accept_word("OR")) {
      if (!(accept_word("ROLLBACK") || accept_word("ABORT") || accept_word("REPLACE") ||
            accept_word("FAIL") || accept_word("IGNORE"))) {
        fail(peek(), "expected conflict resolution");
      }
    }
  }

  std::string table_name_text() {
    auto parts = qualified_name();
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += '.';
      s += parts[i].text;
    }
    return s;
  }

  void insert_statement(Statement& stmt) {
    if (accept_word("REPLACE")) {
    } else {
      expect_word("INSERT");
      conflict_clause();
    }
    expect_word("INTO");
    stmt.tables.push_back(table_name_text());
    if (accept_word("AS")) identifier("alias");
    if (peek().is_punct("(") && !(peek(1).is_word("SELECT") || peek(1).is_word("WITH"))) {
      expect_punct("(");
      do {
        identifier("column name");
      } while (accept_punct(","));
      expect_punct(")");
    }
    if (accept_word("DEFAULT")) {
      expect_word("VALUES");
    } else if (accept_word("VALUES")) {
      do {
        expect_punct("(");
        do {
          expr();
        } while (accept_punct(","));
        expect_punct(")");
      } while (accept_punct(","));
    } else if (peek().is_word("SELECT") || peek().is_word("WITH")) {
      query();
    } else {
      fail(peek(), "expected VALUES or SELECT");
    }
  }

  void update_statement(Statement& stmt) {
    expect_word("UPDATE");
    conflict_clause();
    stmt.tables.push_back(table_name_text());
    expect_word("SET");
    do {
      if (accept_punct("(")) {
        do {
          identifier("column name");
        } while (accept_punct(","));
        expect_punct(")");
      } else {
        identifier("column name");
      }
      expect_punct("=");
      expr();
    } while (accept_punct(","));
    if (accept_word("WHERE")) expr();
  }

  void delete_statement(Statement& stmt) {
    expect_word("DELETE");
    expect_word("FROM");
    stmt.tables.push_back(table_name_text());
    if (accept_word("WHERE")) expr();
  }

  void if_exists(bool with_not) {
    if (accept_word("IF")) {
      if (with_not) expect_word("NOT");
      expect_word("EXISTS");
    }
  }

  void create_statement(Statement& stmt) {
    expect_word("CREATE");
    accept_word("TEMP") || accept_word("TEMPORARY");
    if (accept_word("TABLE")) {
      if_exists(true);
      stmt.tables.push_back(table_name_text());
      if (accept_word("AS")) {
        query();
      } else {
        skip_balanced();
        while (peek().kind == TokenKind::kWord && !peek().is_word("AS")) next();
      }
    } else if (accept_word("VIEW")) {
      if_exists(true);
      stmt.tables.push_back(table_name_text());
      expect_word("AS");
      query();
    } else {
      accept_word("UNIQUE");
      expect_word("INDEX");
      if_exists(true);
      identifier("index name");
      expect_word("ON");
      stmt.tables.push_back(table_name_text());
      skip_balanced();
      if (accept_word("WHERE")) expr();
    }
  }

  void drop_statement(Statement& stmt) {
    expect_word("DROP");
    if (!(accept_word("TABLE") || accept_word("VIEW") || accept_word("INDEX"))) {
      fail(peek(), "expected TABLE, VIEW or INDEX");
    }
    if_exists(false);
    stmt.tables.push_back(table_name_text());
  }

  void alter_statement(Statement& stmt) {
    expect_word("ALTER");
    expect_word("TABLE");
    stmt.tables.push_back(table_name_text());
    if (accept_word("RENAME")) {
      if (accept_word("TO")) {
        identifier("table name");
        return;
      }
      accept_word("COLUMN");
      identifier("column name");
      expect_word("TO");
      identifier("column name");
    } else if (accept_word("ADD")) {
      accept_word("COLUMN");
      identifier("column name");
      while (peek().kind == TokenKind::kWord || peek().kind == TokenKind::kNumber ||
             peek().kind == TokenKind::kString || peek().is_punct("(") || peek().is_punct(")") ||
             peek().is_punct(",")) {
        next();
      }
    } else {
      expect_word("DROP");
      accept_word("COLUMN");
      identifier("column name");
    }
  }

  // ---- expressions ---------------------------------------------------------

  static Expr binary(std::string op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::kBinary;
    e.op = std::move(op);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  Expr expr() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (accept_word("OR")) lhs = binary("OR", std::move(lhs), and_expr());
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (accept_word("AND")) lhs = binary("AND", std::move(lhs), not_expr());
    return lhs;
  }

  Expr not_expr() {
    if (peek().is_word("NOT") && !peek(1).is_word("EXISTS")) {
      next();
      Expr e;
      e.kind = ExprKind::kUnary;
      e.op = "NOT";
      e.args.push_back(not_expr());
      return e;
    }
    return equality();
  }

  Expr equality() {
    Expr lhs = comparison();
    for (;;) {
      const Token& t = peek();
      if (t.is_punct("=") || t.is_punct("==")) {
        next();
        lhs = binary("=", std::move(lhs), comparison());
      } else if (t.is_punct("<>") || t.is_punct("!=")) {
        next();
        lhs = binary("<>", std::move(lhs), comparison());
      } else if (t.is_word("IS")) {
        next();
        bool neg = accept_word("NOT");
        if (accept_word("DISTINCT")) {
          expect_word("FROM");
          neg = !neg;
        }
        lhs = binary(neg ? "IS NOT" : "IS", std::move(lhs), comparison());
      } else if (t.is_word("ISNULL")) {
        next();
        lhs = binary("IS", std::move(lhs), null_literal());
      } else if (t.is_word("NOTNULL")) {
        next();
        lhs = binary("IS NOT", std::move(lhs), null_literal());
      } else if (t.is_word("NOT") && peek(1).is_word("NULL")) {
        next();
        next();
        lhs = binary("IS NOT", std::move(lhs), null_literal());
      } else if (t.is_word("IN") || (t.is_word("NOT") && peek(1).is_word("IN"))) {
        const bool neg = accept_word("NOT");
        next();
        lhs = in_expr(std::move(lhs), neg);
      } else if (t.is_word("BETWEEN") || (t.is_word("NOT") && peek(1).is_word("BETWEEN"))) {
        const bool neg = accept_word("NOT");
        next();
        Expr e;
        e.kind = ExprKind::kBetween;
        e.negated = neg;
        e.args.push_back(std::move(lhs));
        e.args.push_back(comparison());
        expect_word("AND");
        e.args.push_back(comparison());
        lhs = std::move(e);
      } else if (like_operator(t) || (t.is_word("NOT") && like_operator(peek(1)))) {
        const bool neg = accept_word("NOT");
        std::string op = upper(next().text);
        Expr e = binary(op, std::move(lhs), comparison());
        e.negated = neg;
        if (accept_word("ESCAPE")) e.args.push_back(comparison());
        lhs = std::move(e);
      } else {
        return lhs;
      }
    }
  }

  static bool like_operator(const Token& t) {
    return t.is_word("LIKE") || t.is_word("GLOB") || t.is_word("REGEXP") || t.is_word("MATCH");
  }

  static Expr null_literal() {
    Expr e;
    e.kind = ExprKind::kLiteral;
    e.literal = LiteralKind::kNull;
    e.op = "NULL";
    return e;
  }

  Expr in_expr(Expr lhs, bool negated) {
    expect_punct("(");
    Expr e;
    e.negated = negated;
    if (peek().is_word("SELECT") || peek().is_word("WITH")) {
      e.kind = ExprKind::kInSubquery;
      e.args.push_back(std::move(lhs));
      e.subquery = query();
    } else {
      e.kind = ExprKind::kInList;
      e.args.push_back(std::move(lhs));
      if (!peek().is_punct(")")) {
        do {
          e.args.push_back(expr());
        } while (accept_punct(","));
      }
    }
    expect_punct(")");
    return e;
  }

  Expr comparison() {
    Expr lhs = bitwise();
    for (;;) {
      const Token& t = peek();
      if (t.is_punct("<") || t.is_punct("<=") || t.is_punct(">") || t.is_punct(">=")) {
        std::string op = next().text;
        lhs = binary(std::move(op), std::move(lhs), bitwise());
      } else {
        return lhs;
      }
    }
  }

  Expr bitwise() {
    Expr lhs = additive();
    for (;;) {
      const Token& t = peek();
      if (t.is_punct("&") || t.is_punct("|") || t.is_punct("<<") || t.is_punct(">>")) {
        std::string op = next().text;
        lhs = binary(std::move(op), std::move(lhs), additive());
      } else {
        return lhs;
      }
    }
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      const Token& t = peek();
      if (t.is_punct("+") || t.is_punct("-")) {
        std::string op = next().text;
        lhs = binary(std::move(op), std::move(lhs), multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expr multiplicative() {
    Expr lhs = concat();
    for (;;) {
      const Token& t = peek();
      if (t.is_punct("*") || t.is_punct("/") || t.is_punct("%")) {
        std::string op = next().text;
        lhs = binary(std::move(op), std::move(lhs), concat());
      } else {
        return lhs;
      }
    }
  }

  Expr concat() {
    Expr lhs = unary();
    while (accept_punct("||")) lhs = binary("||", std::move(lhs), unary());
    return lhs;
  }

  Expr unary() {
    const Token& t = peek();
    if (t.is_punct("-") || t.is_punct("+") || t.is_punct("~")) {
      std::string op = next().text;
      Expr e;
      e.kind = ExprKind::kUnary;
      e.op = std::move(op);
      e.args.push_back(unary());
      return e;
    }
    return postfix();
  }

  Expr postfix() {
    Expr e = primary();
    while (accept_word("COLLATE")) {
      Expr c;
      c.kind = ExprKind::kCollate;
      c.op = identifier("collation").text;
      c.args.push_back(std::move(e));
      e = std::move(c);
    }
    return e;
  }

  Expr primary() {
    const Token& t = peek();
    Expr e;
    switch (t.kind) {
      case TokenKind::kNumber:
        e.kind = ExprKind::kLiteral;
        e.literal = LiteralKind::kNumber;
        e.op = next().text;
        return e;
      case TokenKind::kString:
        e.kind = ExprKind::kLiteral;
        e.literal = LiteralKind::kString;
        e.op = next().text;
        return e;
      case TokenKind::kEnd:
        fail(t, "expected an expression");
      case TokenKind::kPunct:
        if (t.is_punct("(")) return parenthesized();
        fail(t, "expected an expression");
      case TokenKind::kQuotedIdentifier:
        return column_ref();
      case TokenKind::kWord:
        break;
    }

    if (t.is_word("NULL")) {
      next();
      return null_literal();
    }
    if (t.is_word("TRUE") || t.is_word("FALSE")) {
      e.kind = ExprKind::kLiteral;
      e.literal = t.is_word("TRUE") ? LiteralKind::kTrue : LiteralKind::kFalse;
      e.op = upper(next().text);
      return e;
    }
    if (t.is_word("CURRENT_DATE") || t.is_word("CURRENT_TIME") || t.is_word("CURRENT_TIMESTAMP")) {
      e.kind = ExprKind::kLiteral;
      e.literal = t.is_word("CURRENT_DATE")   ? LiteralKind::kCurrentDate
                  : t.is_word("CURRENT_TIME") ? LiteralKind::kCurrentTime
                                              : LiteralKind::kCurrentTimestamp;
      e.op = upper(next().text);
      return e;
    }
    if (t.is_word("EXISTS") || (t.is_word("NOT") && peek(1).is_word("EXISTS"))) {
      e.negated = accept_word("NOT");
      next();
      e.kind = ExprKind::kExists;
      expect_punct("(");
      e.subquery = query();
      expect_punct(")");
      return e;
    }
    if (t.is_word("CASE")) return case_expr();
    if (t.is_word("CAST")) {
      next();
      expect_punct("(");
      e.kind = ExprKind::kCast;
      e.args.push_back(expr());
      expect_word("AS");
      e.op = type_name();
      expect_punct(")");
      return e;
    }
    if (is_reserved(t)) fail(t, "unexpected keyword");
    if (peek(1).is_punct("(")) return function_call();
    return column_ref();
  }

  std::string type_name() {
    std::string name;
    while (peek().kind == TokenKind::kWord && !is_reserved(peek())) {
      if (!name.empty()) name += ' ';
      name += upper(next().text);
    }
    if (name.empty()) fail(peek(), "expected type name");
    if (accept_punct("(")) {
      name += '(';
      do {
        bool neg = accept_punct("-");
        if (peek().kind != TokenKind::kNumber) fail(peek(), "expected type size");
        if (name.back() != '(') name += ", ";
        if (neg) name += '-';
        name += next().text;
      } while (accept_punct(","));
      expect_punct(")");
      name += ')';
    }
    return name;
  }

  Expr parenthesized() {
    expect_punct("(");
    Expr e;
    if (peek().is_word("SELECT") || peek().is_word("WITH")) {
      e.kind = ExprKind::kSubquery;
      e.subquery = query();
      expect_punct(")");
      return e;
    }
    Expr first = expr();
    if (accept_punct(",")) {
      e.kind = ExprKind::kTuple;
      e.args.push_back(std::move(first));
      do {
        e.args.push_back(expr());
      } while (accept_punct(","));
      expect_punct(")");
      return e;
    }
    expect_punct(")");
    return first;
  }

  Expr case_expr() {
    expect_word("CASE");
    Expr e;
    e.kind = ExprKind::kCase;
    if (!peek().is_word("WHEN")) {
      e.has_operand = true;
      e.args.push_back(expr());
    }
    if (!peek().is_word("WHEN")) fail(peek(), "expected WHEN");
    while (accept_word("WHEN")) {
      e.args.push_back(expr());
      expect_word("THEN");
      e.args.push_back(expr());
    }
    if (accept_word("ELSE")) {
      e.has_else = true;
      e.args.push_back(expr());
    }
    expect_word("END");
    return e;
  }

  Expr function_call() {
    Expr e;
    e.kind = ExprKind::kFunction;
    e.op = next().text;
    expect_punct("(");
    if (accept_punct("*")) {
      e.star_arg = true;
    } else if (!peek().is_punct(")")) {
      if (accept_word("DISTINCT")) {
        e.distinct = true;
      } else {
        accept_word("ALL");
      }
      do {
        e.args.push_back(expr());
      } while (accept_punct(","));
    }
    expect_punct(")");
    if (peek().is_word("FILTER") && peek(1).is_punct("(")) {
      next();
      expect_punct("(");
      expect_word("WHERE");
      e.filter = expr();
      expect_punct(")");
    }
    if (peek().is_word("OVER")) {
      next();
      if (peek().is_punct("(")) {
        e.over = window_spec_body();
      } else {
        WindowSpec spec;
        spec.base = identifier("window name");
        spec.bare_name = true;
        e.over = std::move(spec);
      }
    }
    return e;
  }

  Expr column_ref() {
    Expr e;
    e.kind = ExprKind::kColumn;
    e.path.push_back(identifier("column name"));
    while (peek().is_punct(".")) {
      next();
      e.path.push_back(identifier("column name"));
    }
    if (e.path.size() > 3) fail(peek(), "too many qualifiers");
    return e;
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

const char* to_string(StatementKind kind) {
  switch (kind) {
    case StatementKind::kSelect: return "select";
    case StatementKind::kInsert: return "insert";
    case StatementKind::kUpdate: return "update";
    case StatementKind::kDelete: return "delete";
    case StatementKind::kCreate: return "create";
    case StatementKind::kDrop: return "drop";
    case StatementKind::kAlter: return "alter";
  }
  return "?";
}

const char* to_string(JoinType type) {
  switch (type) {
    case JoinType::kInner: return "INNER";
    case JoinType::kLeft: return "LEFT";
    case JoinType::kRight: return "RIGHT";
    case JoinType::kFull: return "FULL";
    case JoinType::kCross: return "CROSS";
  }
  return "?";
}

const char* to_string(SetOp op) {
  switch (op) {
    case SetOp::kUnion: return "UNION";
    case SetOp::kUnionAll: return "UNION ALL";
    case SetOp::kIntersect: return "INTERSECT";
    case SetOp::kExcept: return "EXCEPT";
  }
  return "?";
}

Statement parse_statement(std::string_view raw_text) {
  if (blank(raw_text)) throw InvalidArgument("SQL text is empty");
  return Parser(raw_text).statement();
}

SqlQuery parse(std::string_view raw_text) {
  auto stmt = std::make_shared<const Statement>(parse_statement(raw_text));
  return SqlQuery(std::string(raw_text), std::move(stmt));
}

std::optional<SqlQuery> try_parse(std::string_view raw_text) noexcept {
  try {
    return parse(raw_text);
  } catch (...) {
    return std::nullopt;
  }
}

Expr parse_expression(std::string_view text) {
  if (blank(text)) throw InvalidArgument("expression text is empty");
  return Parser(text).standalone_expression();
}

}  // namespace sqlreward::sql
