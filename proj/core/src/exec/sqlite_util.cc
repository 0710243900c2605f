#include "exec/sqlite_util.h"

#include <map>
#include <memory>
#include <mutex>

#include "sqlreward/error.h"

namespace sqlreward::exec::detail {
namespace {

// Julian day of the Unix epoch, in milliseconds.
constexpr sqlite3_int64 kUnixEpochJulianMs = 210866760000000LL;

struct ClockVfs {
  sqlite3_vfs vfs;  // must stay first
  std::int64_t unix_ms;
  std::string name;
};

int clock_current_time_int64(sqlite3_vfs* vfs, sqlite3_int64* out) {
  *out = reinterpret_cast<ClockVfs*>(vfs)->unix_ms + kUnixEpochJulianMs;
  return SQLITE_OK;
}

int clock_current_time(sqlite3_vfs* vfs, double* out) {
  sqlite3_int64 ms = 0;
  clock_current_time_int64(vfs, &ms);
  *out = static_cast<double>(ms) / 86400000.0;
  return SQLITE_OK;
}

}  // namespace

Statement::Statement(sqlite3* db, std::string_view sql) {
  if (sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()), &stmt_, nullptr) != SQLITE_OK) {
    throw Error("SqliteError", sqlite3_errmsg(db));
  }
}

bool Statement::step() {
  const int rc = sqlite3_step(stmt_);
  if (rc == SQLITE_ROW) return true;
  if (rc == SQLITE_DONE) return false;
  throw Error("SqliteError", sqlite3_errmsg(sqlite3_db_handle(stmt_)));
}

void Statement::reset() {
  sqlite3_reset(stmt_);
  sqlite3_clear_bindings(stmt_);
}

void exec_script(sqlite3* db, std::string_view sql) {
  std::string text(sql);
  char* err = nullptr;
  if (sqlite3_exec(db, text.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string message = err ? err : sqlite3_errmsg(db);
    sqlite3_free(err);
    throw Error("SqliteError", message);
  }
}

const char* clock_vfs_name(std::int64_t clock_ms) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<ClockVfs>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(clock_ms);
  if (it != registry.end()) return it->second->name.c_str();

  sqlite3_vfs* base = sqlite3_vfs_find(nullptr);
  if (base == nullptr || base->iVersion < 2) throw Error("SqliteError", "no usable default VFS");
  auto clock = std::make_unique<ClockVfs>();
  clock->vfs = *base;
  clock->unix_ms = clock_ms;
  clock->name = "sqlreward-clock-" + std::to_string(clock_ms);
  clock->vfs.zName = clock->name.c_str();
  clock->vfs.pNext = nullptr;
  clock->vfs.xCurrentTime = clock_current_time;
  clock->vfs.xCurrentTimeInt64 = clock_current_time_int64;
  if (sqlite3_vfs_register(&clock->vfs, 0) != SQLITE_OK) {
    throw Error("SqliteError", "cannot register clock VFS");
  }
  const char* name = clock->name.c_str();
  registry.emplace(clock_ms, std::move(clock));
  return name;
}

sqlite3* open_memory(std::int64_t clock_ms) {
  sqlite3* db = nullptr;
  const int rc = sqlite3_open_v2(":memory:", &db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE,
                                 clock_vfs_name(clock_ms));
  if (rc != SQLITE_OK) {
    std::string message = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    throw Error("SqliteError", message);
  }
  sqlite3_db_config(db, SQLITE_DBCONFIG_DQS_DML, 0, nullptr);
  sqlite3_db_config(db, SQLITE_DBCONFIG_DQS_DDL, 0, nullptr);
  sqlite3_extended_result_codes(db, 0);
  return db;
}

std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace sqlreward::exec::detail
