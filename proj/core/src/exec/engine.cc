#include "sqlreward/exec/engine.h"

#include <sqlite3.h>

#include <cctype>

#include "exec/sqlite_util.h"
#include "sqlreward/error.h"
#include "sqlreward/sql/parser.h"

namespace sqlreward::exec {
namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point at;
  bool expired = false;
};

int progress_callback(void* arg) {
  auto* d = static_cast<Deadline*>(arg);
  if (Clock::now() >= d->at) {
    d->expired = true;
    return 1;
  }
  return 0;
}

bool contains(const std::string& s, const char* needle) { return s.find(needle) != std::string::npos; }

bool is_syntax_message(const std::string& m) {
  return contains(m, "syntax error") || contains(m, "incomplete input") ||
         contains(m, "unrecognized token") || contains(m, "unterminated");
}

bool is_resolution_message(const std::string& m) {
  return contains(m, "no such table") || contains(m, "no such column") ||
         contains(m, "ambiguous column name") || contains(m, "no such function") ||
         contains(m, "misuse of aggregate") || contains(m, "misuse of window function") ||
         contains(m, "wrong number of arguments") || contains(m, "no such window") ||
         contains(m, "does not match any column") || contains(m, "out of range") ||
         contains(m, "has no column named") || contains(m, "no tables specified");
}

// Rewrites "no such column: x" into the engine-neutral form used in
// reflection data: "Column 'x' cannot be resolved".
std::string resolution_message(const std::string& m) {
  for (const char* prefix : {"no such column: ", "ambiguous column name: ", "no such table: "}) {
    const auto pos = m.find(prefix);
    if (pos == std::string::npos) continue;
    std::string name = m.substr(pos + std::char_traits<char>::length(prefix));
    const char* what = contains(m, "table") && !contains(m, "column") ? "Table" : "Column";
    const char* verb = contains(m, "ambiguous") ? "is ambiguous" : "cannot be resolved";
    return std::string(what) + " '" + name + "' " + verb + " (" + m + ")";
  }
  return m;
}

ExecOutcome failure(ExecStatus status, std::string message) {
  ExecOutcome out;
  out.status = status;
  out.message = std::move(message);
  return out;
}

ExecOutcome compile_failure(const std::string& message) {
  if (is_syntax_message(message)) return failure(ExecStatus::kSyntaxError, message);
  if (is_resolution_message(message)) {
    return failure(ExecStatus::kResolutionError, resolution_message(message));
  }
  return failure(ExecStatus::kRuntimeError, message);
}

// Only whitespace, semicolons and comments remain.
bool blank_tail(std::string_view tail) {
  std::size_t i = 0;
  while (i < tail.size()) {
    const char c = tail[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
      ++i;
    } else if (tail.substr(i, 2) == "--") {
      while (i < tail.size() && tail[i] != '\n') ++i;
    } else if (tail.substr(i, 2) == "/*") {
      const auto end = tail.find("*/", i + 2);
      if (end == std::string_view::npos) return false;
      i = end + 2;
    } else {
      return false;
    }
  }
  return true;
}

struct StmtCloser {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using StmtHandle = std::unique_ptr<sqlite3_stmt, StmtCloser>;

// Compiles the single statement in `sql`. On failure returns the outcome to
// report; on success `stmt` holds the statement.
std::optional<ExecOutcome> compile(sqlite3* db, std::string_view sql, StmtHandle& stmt) {
  const char* tail = nullptr;
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()), &raw, &tail) != SQLITE_OK) {
    return compile_failure(sqlite3_errmsg(db));
  }
  stmt.reset(raw);
  if (raw == nullptr) return failure(ExecStatus::kSyntaxError, "empty statement");
  const std::string_view rest(tail, static_cast<std::size_t>(sql.data() + sql.size() - tail));
  if (!blank_tail(rest)) {
    sqlite3_stmt* extra = nullptr;
    if (sqlite3_prepare_v2(db, rest.data(), static_cast<int>(rest.size()), &extra, nullptr) != SQLITE_OK) {
      return compile_failure(sqlite3_errmsg(db));
    }
    sqlite3_finalize(extra);
    return failure(ExecStatus::kSyntaxError, "multiple statements are not supported");
  }
  return std::nullopt;
}

Cell read_cell(sqlite3_stmt* stmt, int i) {
  const char* decl = sqlite3_column_decltype(stmt, i);
  const std::optional<ColumnType> declared =
      decl ? std::optional<ColumnType>(column_type_from_decl(decl)) : std::nullopt;
  switch (sqlite3_column_type(stmt, i)) {
    case SQLITE_NULL:
      return Cell();
    case SQLITE_INTEGER: {
      const std::int64_t v = sqlite3_column_int64(stmt, i);
      if (declared == ColumnType::kBoolean) return Cell::boolean(v != 0);
      if (declared == ColumnType::kReal) return Cell::real(static_cast<double>(v));
      return Cell::integer(v);
    }
    case SQLITE_FLOAT:
      return Cell::real(sqlite3_column_double(stmt, i));
    case SQLITE_TEXT: {
      std::string text(reinterpret_cast<const char*>(sqlite3_column_text(stmt, i)),
                       static_cast<std::size_t>(sqlite3_column_bytes(stmt, i)));
      if (declared == ColumnType::kDate) return Cell::date(std::move(text));
      return Cell::text(std::move(text));
    }
    default: {
      const auto* bytes = static_cast<const unsigned char*>(sqlite3_column_blob(stmt, i));
      const int n = sqlite3_column_bytes(stmt, i);
      static const char* kHex = "0123456789abcdef";
      std::string text = "x'";
      for (int k = 0; k < n; ++k) {
        text.push_back(kHex[bytes[k] >> 4]);
        text.push_back(kHex[bytes[k] & 0xf]);
      }
      return Cell::text(text + "'");
    }
  }
}

}  // namespace

ExecOutcome execute(std::string_view sql, const DatabaseFixture& fixture, const ResourceLimits& limits) {
  DatabaseFixture::Lease conn = fixture.lease();
  sqlite3* db = conn.get();
  StmtHandle stmt;
  if (auto err = compile(db, sql, stmt)) return *err;
  if (!sqlite3_stmt_readonly(stmt.get())) {
    return failure(ExecStatus::kRuntimeError, "only read-only statements can be executed");
  }

  Deadline deadline{Clock::now() + limits.timeout};
  sqlite3_progress_handler(db, 1000, progress_callback, &deadline);

  ResultTable table;
  const int columns = sqlite3_column_count(stmt.get());
  for (int i = 0; i < columns; ++i) {
    const char* name = sqlite3_column_name(stmt.get(), i);
    table.headers.emplace_back(name ? name : "");
  }
  for (;;) {
    const int rc = sqlite3_step(stmt.get());
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) {
      if (deadline.expired || rc == SQLITE_INTERRUPT) {
        return failure(ExecStatus::kRuntimeError,
                       "query exceeded the time limit of " + std::to_string(limits.timeout.count()) + " ms");
      }
      return failure(ExecStatus::kRuntimeError, sqlite3_errmsg(db));
    }
    if (table.rows.size() >= limits.max_rows) {
      return failure(ExecStatus::kRuntimeError,
                     "result exceeds the row limit of " + std::to_string(limits.max_rows) + " rows");
    }
    Row row;
    row.reserve(static_cast<std::size_t>(columns));
    for (int i = 0; i < columns; ++i) row.push_back(read_cell(stmt.get(), i));
    table.rows.push_back(std::move(row));
  }

  ExecOutcome out;
  out.status = table.rows.empty() ? ExecStatus::kEmptyResult : ExecStatus::kOk;
  out.result = std::move(table);
  return out;
}

std::optional<std::string> syntax_diagnostic(std::string_view sql, const DatabaseFixture& fixture) {
  DatabaseFixture::Lease conn = fixture.lease();
  StmtHandle stmt;
  if (auto err = compile(conn.get(), sql, stmt)) return err->message;
  return std::nullopt;
}

bool syntax_check(std::string_view sql, const DatabaseFixture& fixture) {
  return !syntax_diagnostic(sql, fixture).has_value();
}

bool has_top_level_order_by(std::string_view sql) {
  auto parsed = sql::try_parse(sql);
  return parsed && parsed->is_select() && !parsed->statement().query.order_by.empty();
}

int m_exec(const ExecOutcome& pred, const ExecOutcome& gold, bool gold_ordered) {
  if (!gold.succeeded()) throw GoldExecutionFailed(gold.message);
  if (!pred.succeeded()) return 0;
  return results_equal(*pred.result, *gold.result, gold_ordered) ? 1 : 0;
}

int m_exec(std::string_view pred_sql, std::string_view gold_sql, const DatabaseFixture& fixture,
           const ResourceLimits& limits) {
  const ExecOutcome gold = execute(gold_sql, fixture, limits);
  if (!gold.succeeded()) {
    throw GoldExecutionFailed("gold query failed (" + std::string(to_string(gold.status)) + "): " + gold.message);
  }
  return m_exec(execute(pred_sql, fixture, limits), gold, has_top_level_order_by(gold_sql));
}

}  // namespace sqlreward::exec
