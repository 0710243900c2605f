#include "sqlreward/mutate/degenerate.h"

#include <sqlite3.h>

#include <cctype>
#include <optional>

#include "exec/sqlite_util.h"
#include "sqlreward/error.h"
#include "sqlreward/sql/parser.h"
#include "sqlreward/sql/render.h"

namespace sqlreward::mutate {
namespace {

using sql::Expr;
using sql::ExprKind;
using sql::TableRef;
using sql::TableRefKind;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool iequal(std::string_view a, std::string_view b) { return lower(a) == lower(b); }

std::string binding_of(const TableRef& t) { return lower(t.alias ? t.alias->text : t.name.back().text); }

bool is_table(const TableRef& t, std::string_view name) {
  return t.kind == TableRefKind::kTable && !t.name.empty() && iequal(t.name.back().text, name);
}

template <typename Fn>
void each_table(TableRef& t, Fn& fn) {
  fn(t);
  if (t.left) each_table(**t.left, fn);
  if (t.right) each_table(**t.right, fn);
}

// Every table reference of every query in the statement.
template <typename Fn>
void each_table_ref(sql::Query& root, Fn fn) {
  sql::for_each_query(root, [&](sql::Query& q) {
    for (auto& core : q.cores) {
      for (auto& t : core.from) each_table(t, fn);
    }
  });
}

// Every expression of every query, subqueries included.
template <typename Fn>
void each_expr(sql::Query& root, Fn fn) {
  sql::for_each_query(root, [&](sql::Query& q) {
    for (auto& core : q.cores) sql::for_each_core_expr(core, fn);
    for (auto& o : q.order_by) sql::for_each_expr(o.expr, fn);
    if (q.limit) sql::for_each_expr(*q.limit, fn);
    if (q.offset) sql::for_each_expr(*q.offset, fn);
  });
}

// Finds the join node whose direct child is `dim`.
TableRef* parent_join(TableRef& t, const TableRef* dim) {
  if (t.kind != TableRefKind::kJoin) return nullptr;
  if (&**t.left == dim || &**t.right == dim) return &t;
  if (TableRef* p = parent_join(**t.left, dim)) return p;
  return parent_join(**t.right, dim);
}

TableRef* find_binding(TableRef& t, const std::string& binding) {
  if (t.kind == TableRefKind::kTable) return binding_of(t) == binding ? &t : nullptr;
  if (t.kind == TableRefKind::kSubquery) return nullptr;
  if (TableRef* p = find_binding(**t.left, binding)) return p;
  return find_binding(**t.right, binding);
}

std::int64_t scalar(sqlite3* db, const std::string& sql) {
  exec::detail::Statement st(db, sql);
  if (!st.step()) return 0;
  return sqlite3_column_int64(st.get(), 0);
}

struct JoinShape {
  TableRef* join = nullptr;
  TableRef* dim = nullptr;
  TableRef* fact = nullptr;
  std::string dim_binding;
  std::string fact_binding;
  std::string dim_key;
  std::string fact_key;
  bool left_join = false;
};

JoinShape locate(sql::Query& root, std::string_view dim_table) {
  JoinShape shape;
  std::vector<TableRef*> dims;
  each_table_ref(root, [&](TableRef& t) {
    if (is_table(t, dim_table)) dims.push_back(&t);
  });
  if (dims.empty()) throw UnsupportedJoinShape("query does not reference " + std::string(dim_table));
  if (dims.size() > 1) throw UnsupportedJoinShape(std::string(dim_table) + " is referenced more than once");
  shape.dim = dims.front();
  shape.dim_binding = binding_of(*shape.dim);

  sql::for_each_query(root, [&](sql::Query& q) {
    for (auto& core : q.cores) {
      for (auto& t : core.from) {
        if (!shape.join) shape.join = parent_join(t, shape.dim);
      }
    }
  });
  if (!shape.join) throw UnsupportedJoinShape(std::string(dim_table) + " is not joined with an explicit JOIN ... ON");
  TableRef& join = *shape.join;
  if (join.natural || !join.using_columns.empty() || !join.on) {
    throw UnsupportedJoinShape("join with " + std::string(dim_table) + " must use ON");
  }
  const bool dim_right = &**join.right == shape.dim;
  if (join.join_type == sql::JoinType::kLeft && dim_right) {
    shape.left_join = true;
  } else if (join.join_type != sql::JoinType::kInner) {
    throw UnsupportedJoinShape(std::string(sql::to_string(join.join_type)) + " join with the dimension on the " +
                               (dim_right ? "right" : "left") + " is not supported");
  }

  const Expr& on = *join.on;
  auto qualified = [](const Expr& e) { return e.kind == ExprKind::kColumn && e.path.size() >= 2; };
  if (on.kind != ExprKind::kBinary || on.op != "=" || !qualified(on.args[0]) || !qualified(on.args[1])) {
    throw UnsupportedJoinShape("join condition must be a single equality of qualified columns");
  }
  const Expr* d = &on.args[0];
  const Expr* f = &on.args[1];
  auto qualifier = [](const Expr& e) { return lower(e.path[e.path.size() - 2].text); };
  if (qualifier(*f) == shape.dim_binding) std::swap(d, f);
  if (qualifier(*d) != shape.dim_binding || qualifier(*f) == shape.dim_binding) {
    throw UnsupportedJoinShape("join condition must compare a dimension column with a fact column");
  }
  shape.dim_key = d->path.back().text;
  shape.fact_key = f->path.back().text;
  shape.fact_binding = qualifier(*f);
  shape.fact = find_binding(dim_right ? **join.left : **join.right, shape.fact_binding);
  if (!shape.fact) throw UnsupportedJoinShape("the other join side must be a base table");

  int same_binding = 0;
  each_table_ref(root, [&](TableRef& t) {
    if (t.kind == TableRefKind::kTable && binding_of(t) == shape.dim_binding) ++same_binding;
  });
  if (same_binding > 1) throw UnsupportedJoinShape("binding '" + shape.dim_binding + "' is used more than once");
  return shape;
}

}  // namespace

DegenerateResult degenerate_rewrite(std::string_view sql, const exec::DatabaseFixture& fixture,
                                    std::string_view dim_table, const std::vector<std::string>& merge_columns,
                                    const exec::ResourceLimits& limits) {
  const exec::ExecOutcome original = exec::execute(sql, fixture, limits);
  if (!original.succeeded()) throw InvalidArgument("input query does not run: " + original.message);
  auto parsed = sql::try_parse(sql);
  if (!parsed || !parsed->is_select()) throw UnsupportedJoinShape("input is not a supported SELECT statement");
  sql::Query query = parsed->statement().query;

  JoinShape shape = locate(query, dim_table);
  const exec::TableDef* dim_def = fixture.find_table(dim_table);
  const exec::TableDef* fact_def = fixture.find_table(shape.fact->name.back().text);
  if (!dim_def || !fact_def) throw UnsupportedJoinShape("join tables are not in the fixture catalog");
  if (merge_columns.empty()) throw InvalidArgument("no columns to merge");
  for (const std::string& c : merge_columns) {
    if (!dim_def->find_column(c)) throw InvalidArgument(dim_def->name + " has no column " + c);
    if (fact_def->find_column(c)) {
      throw AmbiguousColumn("merging " + c + " collides with " + fact_def->name + "." + c);
    }
  }
  auto merged = [&](std::string_view name) {
    for (const std::string& c : merge_columns) {
      if (iequal(c, name)) return true;
    }
    return false;
  };

  const std::string dim_q = exec::detail::quote_ident(dim_def->name);
  const std::string fact_q = exec::detail::quote_ident(fact_def->name);
  const std::string dkey_q = exec::detail::quote_ident(shape.dim_key);
  const std::string fkey_q = exec::detail::quote_ident(shape.fact_key);
  std::int64_t duplicate_keys = 0;
  std::int64_t orphans = 0;
  {
    exec::DatabaseFixture::Lease conn = fixture.lease();
    duplicate_keys = scalar(conn.get(), "SELECT COUNT(" + dkey_q + ") - COUNT(DISTINCT " + dkey_q + ") FROM " + dim_q);
    orphans = scalar(conn.get(), "SELECT COUNT(*) FROM " + fact_q + " WHERE NOT EXISTS (SELECT 1 FROM " + dim_q +
                                     " WHERE " + dim_q + "." + dkey_q + " = " + fact_q + "." + fkey_q + ")");
  }
  if (duplicate_keys > 0) throw UnsupportedJoinShape(dim_def->name + "." + shape.dim_key + " is not unique");
  if (!shape.left_join && orphans > 0) {
    throw UnsupportedJoinShape("INNER join drops " + std::to_string(orphans) + " fact rows without a dimension match");
  }

  // Rewrite references, then splice the join out.
  const std::string removed = sql::render(*shape.join->on);
  shape.join->on.reset();
  each_expr(query, [&](Expr& e) {
    if (e.kind == ExprKind::kStar) throw UnsupportedJoinShape("star projections change shape after merging");
    if (e.kind != ExprKind::kColumn) return;
    if (e.path.size() >= 2) {
      if (lower(e.path[e.path.size() - 2].text) != shape.dim_binding) return;
      const std::string col = e.path.back().text;
      sql::Identifier fact_id{shape.fact->alias ? shape.fact->alias->text : shape.fact->name.back().text,
                              shape.fact->alias ? shape.fact->alias->quoted : shape.fact->name.back().quoted};
      if (merged(col)) {
        e.path = {fact_id, e.path.back()};
      } else if (iequal(col, shape.dim_key)) {
        if (shape.left_join && orphans > 0) {
          throw UnsupportedJoinShape("LEFT join key " + col + " differs from the fact key on unmatched rows");
        }
        e.path = {fact_id, sql::Identifier{shape.fact_key, false}};
      } else {
        throw UnsupportedJoinShape("column " + shape.dim_binding + "." + col + " is not merged");
      }
    } else if (e.path.size() == 1) {
      const std::string& col = e.path.front().text;
      if (dim_def->find_column(col) && !fact_def->find_column(col) && !merged(col)) {
        throw UnsupportedJoinShape("unqualified column " + col + " may refer to " + dim_def->name + " and is not merged");
      }
    }
  });
  TableRef& join = *shape.join;
  TableRef keep = (&**join.right == shape.dim) ? TableRef(**join.left) : TableRef(**join.right);
  join = std::move(keep);
  std::string rewritten = sql::render(query);

  std::vector<std::pair<std::string, std::string>> types;
  for (const std::string& c : merge_columns) {
    std::string decl = "TEXT";
    exec::DatabaseFixture::Lease conn = fixture.lease();
    exec::detail::Statement st(conn.get(), "SELECT type FROM pragma_table_info(?1) WHERE lower(name) = lower(?2)");
    sqlite3_bind_text(st.get(), 1, dim_def->name.c_str(), -1, SQLITE_TRANSIENT);
    sqlite3_bind_text(st.get(), 2, c.c_str(), -1, SQLITE_TRANSIENT);
    if (st.step()) {
      const char* t = reinterpret_cast<const char*>(sqlite3_column_text(st.get(), 0));
      if (t && *t) decl = t;
    }
    types.emplace_back(dim_def->find_column(c) ? dim_def->columns[*dim_def->find_column(c)].name : c, decl);
  }
  const std::string new_name = fixture.name() + "~degenerate~" + dim_def->name;
  exec::DatabaseFixture derived = fixture.derive(new_name, [&](sqlite3* db) {
    for (const auto& [col, decl] : types) {
      const std::string col_q = exec::detail::quote_ident(col);
      exec::detail::exec_script(db, "ALTER TABLE " + fact_q + " ADD COLUMN " + col_q + " " + decl + ";" + "UPDATE " +
                                  fact_q + " SET " + col_q + " = (SELECT " + dim_q + "." + col_q + " FROM " + dim_q +
                                  " WHERE " + dim_q + "." + dkey_q + " = " + fact_q + "." + fkey_q + ");");
    }
  });

  const exec::ExecOutcome after = exec::execute(rewritten, derived, limits);
  if (exec::m_exec(after, original, exec::has_top_level_order_by(sql)) != 1) {
    throw UnsupportedJoinShape("rewritten query is not equivalent on the merged fixture" +
                               (after.succeeded() ? std::string() : ": " + after.message));
  }

  std::string merged_list;
  for (const auto& [col, decl] : types) merged_list += (merged_list.empty() ? "" : ",") + col;
  MutationRecord record;
  record.kind = MutationKind::kDegenerateDimension;
  record.input_sql = std::string(sql);
  record.output_sql = std::move(rewritten);
  record.metadata = {
      {"dim_table", dim_def->name},
      {"fact_table", fact_def->name},
      {"join_type", shape.left_join ? "LEFT" : "INNER"},
      {"removed_join", removed},
      {"merge_columns", merged_list},
      {"source_fixture", fixture.name()},
      {"new_fixture", new_name},
  };
  return {std::move(derived), std::move(record)};
}

}  // namespace sqlreward::mutate
