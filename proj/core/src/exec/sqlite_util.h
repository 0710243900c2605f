#pragma once

#include <sqlite3.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace sqlreward::exec::detail {

// Owns a prepared statement.
class Statement {
 public:
  Statement() = default;
  Statement(sqlite3* db, std::string_view sql);  // throws Error on failure
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  Statement(Statement&& other) noexcept : stmt_(other.stmt_) { other.stmt_ = nullptr; }
  ~Statement() { sqlite3_finalize(stmt_); }

  sqlite3_stmt* get() const { return stmt_; }
  // SQLITE_ROW → true, SQLITE_DONE → false, anything else throws.
  bool step();
  void reset();

 private:
  sqlite3_stmt* stmt_ = nullptr;
};

// Runs one or more statements; throws Error with the engine message.
void exec_script(sqlite3* db, std::string_view sql);

// Opens an empty in-memory database whose "now" is pinned to `clock_ms`.
sqlite3* open_memory(std::int64_t clock_ms);

// Name of a VFS identical to the default one except that its current time
// is fixed. Registered on first use.
const char* clock_vfs_name(std::int64_t clock_ms);

std::string quote_ident(std::string_view name);

}  // namespace sqlreward::exec::detail
