#include "sqlreward/exec/fixture.h"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "exec/csv.h"
#include "exec/sqlite_util.h"
#include "sqlreward/error.h"
#include "sqlreward/exec/engine.h"
#include "util/sha256.h"

namespace sqlreward::exec {

using detail::quote_ident;
using detail::Statement;
using json = nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

struct DateTimeParts {
  int year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0, millis = 0;
  int offset_minutes = 0;
};

// Accepts YYYY-MM-DD, optionally followed by [T ]HH:MM[:SS[.fff...]] and
// then Z or ±HH:MM when `allow_zone` is set.
std::optional<DateTimeParts> parse_datetime(std::string_view s, bool allow_zone) {
  DateTimeParts p;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) || !all_digits(s.substr(8, 2))) {
    return std::nullopt;
  }
  p.year = to_int(s.substr(0, 4));
  p.month = to_int(s.substr(5, 2));
  p.day = to_int(s.substr(8, 2));
  const std::chrono::year_month_day ymd{std::chrono::year{p.year},
                                        std::chrono::month{static_cast<unsigned>(p.month)},
                                        std::chrono::day{static_cast<unsigned>(p.day)}};
  if (!ymd.ok()) return std::nullopt;
  std::string_view rest = s.substr(10);
  if (rest.empty()) return p;
  if (rest[0] != 'T' && rest[0] != ' ') return std::nullopt;
  rest.remove_prefix(1);
  if (rest.size() < 5 || rest[2] != ':' || !all_digits(rest.substr(0, 2)) ||
      !all_digits(rest.substr(3, 2))) {
    return std::nullopt;
  }
  p.hour = to_int(rest.substr(0, 2));
  p.minute = to_int(rest.substr(3, 2));
  rest.remove_prefix(5);
  if (!rest.empty() && rest[0] == ':') {
    if (rest.size() < 3 || !all_digits(rest.substr(1, 2))) return std::nullopt;
    p.second = to_int(rest.substr(1, 2));
    rest.remove_prefix(3);
    if (!rest.empty() && rest[0] == '.') {
      std::size_t n = 1;
      while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n]))) ++n;
      if (n == 1) return std::nullopt;
      std::string frac(rest.substr(1, n - 1));
      frac.resize(3, '0');
      p.millis = to_int(frac);
      rest.remove_prefix(n);
    }
  }
  if (p.hour > 23 || p.minute > 59 || p.second > 59) return std::nullopt;
  if (rest.empty()) return p;
  if (!allow_zone) return std::nullopt;
  if (rest == "Z") return p;
  if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':' &&
      all_digits(rest.substr(1, 2)) && all_digits(rest.substr(4, 2))) {
    const int minutes = to_int(rest.substr(1, 2)) * 60 + to_int(rest.substr(4, 2));
    p.offset_minutes = rest[0] == '+' ? minutes : -minutes;
    return p;
  }
  return std::nullopt;
}

ColumnDef make_column(std::string name, std::string_view declared, bool not_null) {
  return ColumnDef{std::move(name), column_type_from_decl(declared), !not_null};
}

std::vector<TableDef> read_catalog(sqlite3* db) {
  std::vector<TableDef> tables;
  Statement list(db,
                 "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' "
                 "ORDER BY rowid");
  while (list.step()) {
    TableDef table;
    table.name = reinterpret_cast<const char*>(sqlite3_column_text(list.get(), 0));
    Statement info(db, "PRAGMA table_info(" + quote_ident(table.name) + ")");
    while (info.step()) {
      const char* col = reinterpret_cast<const char*>(sqlite3_column_text(info.get(), 1));
      const char* decl = reinterpret_cast<const char*>(sqlite3_column_text(info.get(), 2));
      table.columns.push_back(make_column(col, decl ? decl : "", sqlite3_column_int(info.get(), 3) != 0));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::size_t count_rows(sqlite3* db, const std::string& table) {
  Statement st(db, "SELECT count(*) FROM " + quote_ident(table));
  st.step();
  return static_cast<std::size_t>(sqlite3_column_int64(st.get(), 0));
}

void bind_field(sqlite3_stmt* stmt, int index, const csv::Field& field, const ColumnDef& column,
                const std::string& where) {
  if (!field) {
    if (!column.nullable) {
      throw SchemaViolation(where + ": null in NOT NULL column " + column.name);
    }
    sqlite3_bind_null(stmt, index);
    return;
  }
  const std::string& v = *field;
  auto bad = [&](const char* what) {
    throw SchemaViolation(where + ": value '" + v + "' in column " + column.name + " is not " + what);
  };
  switch (column.type) {
    case ColumnType::kInteger: {
      std::int64_t x = 0;
      auto res = std::from_chars(v.data(), v.data() + v.size(), x);
      if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad("an integer");
      sqlite3_bind_int64(stmt, index, x);
      return;
    }
    case ColumnType::kReal: {
      double x = 0;
      auto res = std::from_chars(v.data(), v.data() + v.size(), x);
      if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) bad("a number");
      sqlite3_bind_double(stmt, index, x);
      return;
    }
    case ColumnType::kBoolean: {
      const std::string l = lower(v);
      if (l == "true" || l == "t" || l == "1") {
        sqlite3_bind_int(stmt, index, 1);
      } else if (l == "false" || l == "f" || l == "0") {
        sqlite3_bind_int(stmt, index, 0);
      } else {
        bad("a boolean");
      }
      return;
    }
    case ColumnType::kDate:
      if (!parse_datetime(v, false)) bad("an ISO date");
      [[fallthrough]];
    case ColumnType::kText:
      sqlite3_bind_text(stmt, index, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
      return;
  }
}

void load_table_data(sqlite3* db, const TableDef& table, const std::filesystem::path& path) {
  const std::string label = path.filename().string();
  std::vector<csv::Record> records;
  try {
    records = csv::parse(read_file(path));
  } catch (const InvalidArgument& e) {
    throw SchemaViolation(label + ": " + e.what());
  }
  if (records.empty()) throw SchemaViolation(label + ": missing header line");

  const csv::Record& header = records.front();
  if (header.size() != table.columns.size()) {
    throw SchemaViolation(label + ": header has " + std::to_string(header.size()) + " columns, table " +
                          table.name + " has " + std::to_string(table.columns.size()));
  }
  std::vector<std::size_t> mapping;
  std::set<std::size_t> seen;
  for (const auto& h : header) {
    auto idx = h ? table.find_column(*h) : std::nullopt;
    if (!idx) throw SchemaViolation(label + ": unknown column '" + h.value_or("") + "'");
    if (!seen.insert(*idx).second) throw SchemaViolation(label + ": duplicate column '" + *h + "'");
    mapping.push_back(*idx);
  }

  std::string sql = "INSERT INTO " + quote_ident(table.name) + " (";
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    sql += (i ? ", " : "") + quote_ident(table.columns[mapping[i]].name);
  }
  sql += ") VALUES (";
  for (std::size_t i = 0; i < mapping.size(); ++i) sql += i ? ", ?" : "?";
  sql += ")";
  Statement insert(db, sql);

  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::string where = label + " record " + std::to_string(r);
    if (records[r].size() != mapping.size()) {
      throw SchemaViolation(where + ": has " + std::to_string(records[r].size()) +
                            " fields, expected " + std::to_string(mapping.size()));
    }
    for (std::size_t i = 0; i < mapping.size(); ++i) {
      bind_field(insert.get(), static_cast<int>(i + 1), records[r][i], table.columns[mapping[i]], where);
    }
    try {
      insert.step();
    } catch (const Error& e) {
      throw SchemaViolation(where + ": " + e.what());
    }
    insert.reset();
  }
}

}  // namespace

// ---- catalog -----------------------------------------------------------------

const char* to_string(ColumnType type) {
  switch (type) {
    case ColumnType::kInteger: return "integer";
    case ColumnType::kReal: return "real";
    case ColumnType::kText: return "text";
    case ColumnType::kDate: return "date";
    case ColumnType::kBoolean: return "boolean";
  }
  return "?";
}

ColumnType column_type_from_decl(std::string_view declared) {
  const std::string d = upper(declared);
  auto has = [&](const char* s) { return d.find(s) != std::string::npos; };
  if (has("BOOL")) return ColumnType::kBoolean;
  if (has("DATE") || has("TIME")) return ColumnType::kDate;
  if (has("INT")) return ColumnType::kInteger;
  if (has("CHAR") || has("CLOB") || has("TEXT")) return ColumnType::kText;
  if (has("REAL") || has("FLOA") || has("DOUB") || has("DEC") || has("NUMERIC")) return ColumnType::kReal;
  return ColumnType::kText;
}

std::optional<std::size_t> TableDef::find_column(std::string_view name) const {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (lower(columns[i].name) == key) return i;
  }
  return std::nullopt;
}

// ---- connection pool ---------------------------------------------------------

struct DatabaseFixture::Lease::Pool {
  std::shared_ptr<const std::string> image;
  std::int64_t clock_ms = 0;
  std::mutex mu;
  std::vector<sqlite3*> idle;

  ~Pool() {
    for (sqlite3* db : idle) sqlite3_close(db);
  }

  sqlite3* acquire() {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (!idle.empty()) {
        sqlite3* db = idle.back();
        idle.pop_back();
        return db;
      }
    }
    sqlite3* db = detail::open_memory(clock_ms);
    auto* data = reinterpret_cast<unsigned char*>(const_cast<char*>(image->data()));
    const auto size = static_cast<sqlite3_int64>(image->size());
    if (sqlite3_deserialize(db, "main", data, size, size, SQLITE_DESERIALIZE_READONLY) != SQLITE_OK) {
      std::string message = sqlite3_errmsg(db);
      sqlite3_close(db);
      throw Error("SqliteError", "cannot open snapshot: " + message);
    }
    detail::exec_script(db, "PRAGMA query_only = 1");
    return db;
  }

  void release(sqlite3* db) {
    sqlite3_progress_handler(db, 0, nullptr, nullptr);
    std::lock_guard<std::mutex> lock(mu);
    idle.push_back(db);
  }
};

DatabaseFixture::Lease::Lease(Lease&& other) noexcept
    : pool_(std::move(other.pool_)), db_(other.db_) {
  other.db_ = nullptr;
}

DatabaseFixture::Lease::~Lease() {
  if (pool_ && db_) pool_->release(db_);
}

struct DatabaseFixture::Impl {
  std::string name;
  std::string id;
  std::vector<TableDef> schema;
  std::vector<std::string> ddl;
  std::map<std::string, std::size_t> row_counts;  // keyed by lowercase name
  std::int64_t clock_ms = 0;
  std::shared_ptr<Lease::Pool> pool;
};

DatabaseFixture::Lease DatabaseFixture::lease() const {
  return Lease(impl_->pool, impl_->pool->acquire());
}

// ---- construction ------------------------------------------------------------

DatabaseFixture DatabaseFixture::from_database(std::string name, sqlite3* db, std::int64_t clock_ms) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->clock_ms = clock_ms;
  impl->schema = read_catalog(db);
  {
    Statement st(db,
                 "SELECT sql FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' "
                 "ORDER BY rowid");
    while (st.step()) impl->ddl.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(st.get(), 0)));
  }
  for (const TableDef& t : impl->schema) impl->row_counts[lower(t.name)] = count_rows(db, t.name);

  sqlite3_int64 size = 0;
  unsigned char* bytes = sqlite3_serialize(db, "main", &size, 0);
  if (bytes == nullptr) throw Error("SqliteError", "cannot serialize database");
  auto image = std::make_shared<std::string>(reinterpret_cast<const char*>(bytes), static_cast<std::size_t>(size));
  sqlite3_free(bytes);

  impl->id = util::sha256_hex(*image);
  impl->pool = std::make_shared<Lease::Pool>();
  impl->pool->image = std::move(image);
  impl->pool->clock_ms = clock_ms;
  return DatabaseFixture(std::move(impl));
}

namespace {

struct DbCloser {
  void operator()(sqlite3* db) const { sqlite3_close(db); }
};
using DbHandle = std::unique_ptr<sqlite3, DbCloser>;

}  // namespace

DatabaseFixture DatabaseFixture::load(const std::filesystem::path& manifest_path) {
  const std::string text = read_file(manifest_path);
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(manifest_path.string() + ": malformed manifest: " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("ddl") || !manifest.contains("tables") ||
      !manifest["tables"].is_array()) {
    throw InvalidArgument(manifest_path.string() + ": manifest needs \"ddl\" and \"tables\"");
  }
  if (!manifest.contains("frozen_clock") || !manifest["frozen_clock"].is_string()) {
    throw InvalidArgument(manifest_path.string() + ": manifest needs a \"frozen_clock\" timestamp");
  }
  const std::filesystem::path base = manifest_path.parent_path();
  std::string name = manifest.value("name", base.filename().string());
  const std::int64_t clock_ms = parse_iso8601_ms(manifest["frozen_clock"].get<std::string>());

  DbHandle db(detail::open_memory(clock_ms));
  const std::string ddl = read_file(base / manifest["ddl"].get<std::string>());
  try {
    detail::exec_script(db.get(), ddl);
  } catch (const Error& e) {
    const std::string message = e.what();
    if (message.find("already exists") != std::string::npos) throw DuplicateTable(message);
    throw SchemaViolation("DDL: " + message);
  }
  const std::vector<TableDef> catalog = read_catalog(db.get());

  std::set<std::string> listed;
  detail::exec_script(db.get(), "BEGIN");
  for (const json& entry : manifest["tables"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry.contains("data")) {
      throw InvalidArgument(manifest_path.string() + ": table entries need \"name\" and \"data\"");
    }
    const std::string table_name = entry["name"].get<std::string>();
    if (!listed.insert(lower(table_name)).second) {
      throw DuplicateTable("table " + table_name + " listed twice in manifest");
    }
    auto it = std::find_if(catalog.begin(), catalog.end(),
                           [&](const TableDef& t) { return lower(t.name) == lower(table_name); });
    if (it == catalog.end()) throw SchemaViolation("table " + table_name + " is not defined by the DDL");
    load_table_data(db.get(), *it, base / entry["data"].get<std::string>());
  }
  detail::exec_script(db.get(), "COMMIT");
  return from_database(std::move(name), db.get(), clock_ms);
}

DatabaseFixture DatabaseFixture::build(std::string name, std::string_view script, std::int64_t clock_ms) {
  DbHandle db(detail::open_memory(clock_ms));
  try {
    detail::exec_script(db.get(), script);
  } catch (const Error& e) {
    const std::string message = e.what();
    if (message.find("already exists") != std::string::npos) throw DuplicateTable(message);
    throw SchemaViolation(message);
  }
  return from_database(std::move(name), db.get(), clock_ms);
}

DatabaseFixture DatabaseFixture::derive(std::string name,
                                        const std::function<void(sqlite3*)>& mutate) const {
  const std::string& image = *impl_->pool->image;
  DbHandle db(detail::open_memory(impl_->clock_ms));
  auto* copy = static_cast<unsigned char*>(sqlite3_malloc64(image.size()));
  if (copy == nullptr) throw Error("SqliteError", "out of memory");
  std::copy(image.begin(), image.end(), copy);
  const auto size = static_cast<sqlite3_int64>(image.size());
  if (sqlite3_deserialize(db.get(), "main", copy, size, size,
                          SQLITE_DESERIALIZE_FREEONCLOSE | SQLITE_DESERIALIZE_RESIZEABLE) != SQLITE_OK) {
    throw Error("SqliteError", sqlite3_errmsg(db.get()));
  }
  mutate(db.get());
  return from_database(std::move(name), db.get(), impl_->clock_ms);
}

// ---- accessors ---------------------------------------------------------------

const std::string& DatabaseFixture::name() const { return impl_->name; }
const std::string& DatabaseFixture::fixture_id() const { return impl_->id; }
const std::vector<TableDef>& DatabaseFixture::schema() const { return impl_->schema; }
std::int64_t DatabaseFixture::frozen_clock_unix_ms() const { return impl_->clock_ms; }

const TableDef* DatabaseFixture::find_table(std::string_view name) const {
  const std::string key = lower(name);
  for (const TableDef& t : impl_->schema) {
    if (lower(t.name) == key) return &t;
  }
  return nullptr;
}

std::string DatabaseFixture::ddl() const {
  std::string out;
  for (const std::string& s : impl_->ddl) out += s + ";\n";
  return out;
}

std::size_t DatabaseFixture::row_count(std::string_view table) const {
  auto it = impl_->row_counts.find(lower(table));
  if (it == impl_->row_counts.end()) throw InvalidArgument("no table " + std::string(table));
  return it->second;
}

std::size_t DatabaseFixture::total_rows() const {
  std::size_t n = 0;
  for (const auto& [_, count] : impl_->row_counts) n += count;
  return n;
}

ResultTable DatabaseFixture::table_rows(std::string_view table) const {
  const TableDef* def = find_table(table);
  if (def == nullptr) throw InvalidArgument("no table " + std::string(table));
  ResourceLimits unlimited{std::numeric_limits<std::size_t>::max(), std::chrono::hours(1)};
  ExecOutcome out = execute("SELECT * FROM " + quote_ident(def->name) + " ORDER BY rowid", *this, unlimited);
  if (!out.succeeded()) throw Error("SqliteError", out.message);
  return std::move(*out.result);
}

std::string DatabaseFixture::content_digest() const {
  std::vector<const TableDef*> tables;
  for (const TableDef& t : impl_->schema) tables.push_back(&t);
  std::sort(tables.begin(), tables.end(), [](auto* a, auto* b) { return a->name < b->name; });

  Lease conn = lease();
  util::Sha256 hash;
  for (const TableDef* t : tables) {
    hash.update("table\x1f" + t->name + "\n");
    for (const ColumnDef& c : t->columns) hash.update(c.name + "\x1f" + to_string(c.type) + "\n");
    Statement st(conn.get(), "SELECT * FROM " + quote_ident(t->name) + " ORDER BY rowid");
    const int n = sqlite3_column_count(st.get());
    while (st.step()) {
      for (int i = 0; i < n; ++i) {
        const int type = sqlite3_column_type(st.get(), i);
        const auto* bytes = reinterpret_cast<const char*>(sqlite3_column_blob(st.get(), i));
        const int len = sqlite3_column_bytes(st.get(), i);
        hash.update(std::to_string(type) + ":" + std::to_string(len) + ":");
        if (type == SQLITE_INTEGER) {
          hash.update(std::to_string(sqlite3_column_int64(st.get(), i)));
        } else if (type == SQLITE_FLOAT) {
          char buf[32];
          auto res = std::to_chars(buf, buf + sizeof buf, sqlite3_column_double(st.get(), i));
          hash.update(std::string_view(buf, res.ptr - buf));
        } else if (bytes != nullptr) {
          hash.update(std::string_view(bytes, static_cast<std::size_t>(len)));
        }
        hash.update("\x1f");
      }
      hash.update("\n");
    }
  }
  return hash.hex_digest();
}

// ---- serialization -----------------------------------------------------------

std::filesystem::path write_fixture(const DatabaseFixture& fixture, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  auto write = [](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw IoError("cannot write " + path.string());
  };

  write(directory / "schema.sql", fixture.ddl());
  json tables = json::array();
  for (const TableDef& t : fixture.schema()) {
    const ResultTable rows = fixture.table_rows(t.name);
    std::string text;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      text += (i ? "," : "") + csv::escape(t.columns[i].name);
    }
    text += "\n";
    for (const Row& row : rows.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text += ",";
        if (!row[i].is_null()) text += csv::escape(row[i].to_string());
      }
      text += "\n";
    }
    const std::string file = t.name + ".csv";
    write(directory / file, text);
    tables.push_back({{"name", t.name}, {"data", file}});
  }
  json manifest = {{"name", fixture.name()},
                   {"ddl", "schema.sql"},
                   {"frozen_clock", format_iso8601_ms(fixture.frozen_clock_unix_ms())},
                   {"tables", tables}};
  const auto path = directory / "manifest.json";
  write(path, manifest.dump(2) + "\n");
  return path;
}

std::int64_t parse_iso8601_ms(std::string_view text) {
  auto parts = parse_datetime(text, true);
  if (!parts) throw InvalidArgument("not an ISO-8601 timestamp: " + std::string(text));
  using namespace std::chrono;
  const sys_days days{year{parts->year} / month{static_cast<unsigned>(parts->month)} /
                      day{static_cast<unsigned>(parts->day)}};
  const std::int64_t day_ms = static_cast<std::int64_t>(days.time_since_epoch().count()) * 86400000LL;
  return day_ms + ((parts->hour * 60LL + parts->minute - parts->offset_minutes) * 60LL + parts->second) * 1000LL +
         parts->millis;
}

std::string format_iso8601_ms(std::int64_t unix_ms) {
  using namespace std::chrono;
  std::int64_t days = unix_ms / 86400000LL;
  std::int64_t rem = unix_ms % 86400000LL;
  if (rem < 0) {
    rem += 86400000LL;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  const int ms = static_cast<int>(rem % 1000);
  const std::int64_t secs = rem / 1000;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
  std::string out = buf;
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03d", ms);
    out += buf;
  }
  return out + "Z";
}

}  // namespace sqlreward::exec
