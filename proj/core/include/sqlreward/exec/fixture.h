#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlreward/exec/result.h"

struct sqlite3;

namespace sqlreward::exec {

enum class ColumnType { kInteger, kReal, kText, kDate, kBoolean };

const char* to_string(ColumnType type);

// Maps a declared SQL column type ("VARCHAR(20)", "DECIMAL(10,2)", ...) to
// the fixture type system.
ColumnType column_type_from_decl(std::string_view declared);

struct ColumnDef {
  std::string name;
  ColumnType type = ColumnType::kText;
  bool nullable = true;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;

  // Case-insensitive lookup.
  std::optional<std::size_t> find_column(std::string_view name) const;
};

// An immutable, in-memory database snapshot plus its catalog.
//
// Copies share the snapshot. Queries run on pooled read-only connections,
// so concurrent execute() calls against one fixture are safe.
class DatabaseFixture {
 public:
  // Loads a manifest of the form
  //   {"name": ..., "ddl": "schema.sql", "frozen_clock": "2024-06-30T12:00:00Z",
  //    "tables": [{"name": "t", "data": "t.csv"}, ...]}
  // Paths are relative to the manifest. Throws IoError, SchemaViolation,
  // DuplicateTable or InvalidArgument.
  static DatabaseFixture load(const std::filesystem::path& manifest_path);

  // Builds a fixture by running `script` (DDL and INSERTs) on an empty
  // database.
  static DatabaseFixture build(std::string name, std::string_view script,
                               std::int64_t frozen_clock_unix_ms = 0);

  // New fixture from a writable copy of this one, after `mutate` has run
  // on it.
  DatabaseFixture derive(std::string name, const std::function<void(sqlite3*)>& mutate) const;

  // Human-readable name from the manifest; what TaskSample.fixture_ref names.
  const std::string& name() const;
  // SHA-256 of the serialized snapshot. Identical inputs give identical ids.
  const std::string& fixture_id() const;
  const std::vector<TableDef>& schema() const;
  const TableDef* find_table(std::string_view name) const;
  std::int64_t frozen_clock_unix_ms() const;
  // CREATE statements of all tables, in catalog order.
  std::string ddl() const;

  std::size_t row_count(std::string_view table) const;
  ResultTable table_rows(std::string_view table) const;
  std::size_t total_rows() const;

  // SHA-256 over the live contents of every table, read back through a
  // connection. Used to check that nothing mutated the snapshot.
  std::string content_digest() const;

  // A pooled read-only connection. Returned to the pool on destruction.
  class Lease {
   public:
    Lease(Lease&& other) noexcept;
    Lease& operator=(Lease&&) = delete;
    Lease(const Lease&) = delete;
    ~Lease();
    sqlite3* get() const { return db_; }

    struct Pool;

   private:
    friend class DatabaseFixture;
    Lease(std::shared_ptr<Pool> pool, sqlite3* db) : pool_(std::move(pool)), db_(db) {}
    std::shared_ptr<Pool> pool_;
    sqlite3* db_;
  };
  Lease lease() const;

  struct Impl;

 private:
  explicit DatabaseFixture(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static DatabaseFixture from_database(std::string name, sqlite3* db, std::int64_t clock_ms);

  std::shared_ptr<const Impl> impl_;
};

// Writes `fixture` as a manifest, a DDL file and one CSV per table into
// `directory`, creating it if needed. Returns the manifest path.
std::filesystem::path write_fixture(const DatabaseFixture& fixture,
                                    const std::filesystem::path& directory);

// Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z]" (or a plain date) into Unix
// milliseconds, UTC. Throws InvalidArgument.
std::int64_t parse_iso8601_ms(std::string_view text);
std::string format_iso8601_ms(std::int64_t unix_ms);

}  // namespace sqlreward::exec
