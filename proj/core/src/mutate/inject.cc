#include "sqlreward/mutate/inject.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <vector>

#include "mutate/draw.h"
#include "sqlreward/error.h"
#include "sqlreward/sql/lexer.h"
#include "sqlreward/sql/parser.h"
#include "sqlreward/sql/render.h"

namespace sqlreward::mutate {
namespace {

constexpr const char* kKindNames[] = {"truncate_paren", "typo_keyword", "wrong_column", "drop_projection"};

constexpr const char* kKeywords[] = {
    "SELECT", "FROM",  "WHERE",  "GROUP", "ORDER",    "BY",   "JOIN", "ON",   "HAVING", "LIMIT",
    "AS",     "AND",   "OR",     "DISTINCT", "UNION", "WITH", "CASE", "WHEN", "THEN",   "ELSE",
    "END",    "OVER",  "PARTITION", "BETWEEN", "IN",  "LIKE", "INNER", "LEFT", "DESC",  "ASC",
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// An edit of `sql`: replace [offset, offset+length) by `replacement`, or,
// for drop_projection, a fully rendered query.
struct Site {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string original;
  std::string replacement;
  std::string rewritten;  // set for AST-level edits
  std::string label;
};

std::string apply(std::string_view sql, const Site& site) {
  if (!site.rewritten.empty()) return site.rewritten;
  std::string out(sql);
  out.replace(site.offset, site.length, site.replacement);
  return out;
}

std::vector<sql::Token> tokens_of(std::string_view sql) {
  try {
    return sql::tokenize(sql);
  } catch (const ParseError&) {
    return {};
  }
}

std::vector<Site> paren_sites(std::string_view sql) {
  std::vector<Site> sites;
  for (const sql::Token& t : tokens_of(sql)) {
    if (t.is_punct(")")) sites.push_back({t.offset, 1, ")", "", "", "paren@" + std::to_string(t.offset)});
  }
  return sites;
}

// Swaps two adjacent letters, or drops one when the pair is identical.
std::string misspell(const std::string& word, std::size_t pos) {
  std::string out = word;
  if (out.size() < 2) return out + out;
  pos %= out.size() - 1;
  if (std::tolower(static_cast<unsigned char>(out[pos])) == std::tolower(static_cast<unsigned char>(out[pos + 1]))) {
    out.erase(pos, 1);
  } else {
    std::swap(out[pos], out[pos + 1]);
  }
  return out;
}

std::vector<Site> keyword_sites(std::string_view sql, std::uint64_t seed) {
  std::vector<Site> sites;
  std::mt19937_64 rng(seed ^ 0x7970u);
  for (const sql::Token& t : tokens_of(sql)) {
    if (t.kind != sql::TokenKind::kWord) continue;
    const bool keyword = std::any_of(std::begin(kKeywords), std::end(kKeywords),
                                     [&](const char* k) { return t.is_word(k); });
    if (!keyword) continue;
    const std::string typo = misspell(t.text, detail::draw_index(rng, std::max<std::size_t>(1, t.text.size() - 1)));
    sites.push_back({t.offset, t.length, t.text, typo, "", "keyword@" + std::to_string(t.offset)});
  }
  return sites;
}

std::vector<Site> column_sites(std::string_view sql, const exec::DatabaseFixture& fixture) {
  std::set<std::string> names;
  std::set<std::string> columns;
  for (const exec::TableDef& t : fixture.schema()) {
    names.insert(lower(t.name));
    for (const exec::ColumnDef& c : t.columns) {
      names.insert(lower(c.name));
      columns.insert(lower(c.name));
    }
  }
  static const char* kSuffixes[] = {"_name", "_id", "_cnt", "_code", "_desc", "_type"};
  std::vector<Site> sites;
  for (const sql::Token& t : tokens_of(sql)) {
    if (t.kind != sql::TokenKind::kWord && t.kind != sql::TokenKind::kQuotedIdentifier) continue;
    const std::string name = lower(t.text);
    if (!columns.count(name)) continue;
    // Swap an existing suffix for another, else append one.
    std::string stem = name;
    for (const char* s : kSuffixes) {
      const std::string suffix = s;
      if (stem.size() > suffix.size() && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stem.resize(stem.size() - suffix.size());
        break;
      }
    }
    std::string fresh;
    for (const char* s : kSuffixes) {
      if (!names.count(stem + s)) {
        fresh = stem + s;
        break;
      }
    }
    if (fresh.empty()) fresh = name + "_x";
    const std::string replacement =
        t.kind == sql::TokenKind::kQuotedIdentifier ? "\"" + fresh + "\"" : fresh;
    sites.push_back({t.offset, t.length, std::string(sql.substr(t.offset, t.length)), replacement, "",
                     "column@" + std::to_string(t.offset)});
  }
  return sites;
}

std::vector<Site> projection_sites(std::string_view sql) {
  std::vector<Site> sites;
  auto parsed = sql::try_parse(sql);
  if (!parsed || !parsed->is_select()) return sites;
  const sql::Query& root = parsed->statement().query;
  std::size_t query_index = 0;
  sql::for_each_query(root, [&](const sql::Query& q) {
    for (std::size_t c = 0; c < q.cores.size(); ++c) {
      const auto& items = q.cores[c].items;
      if (items.size() < 2) continue;
      for (std::size_t i = 0; i < items.size(); ++i) {
        sql::Query copy = root;
        std::size_t seen = 0;
        sql::for_each_query(copy, [&](sql::Query& target) {
          if (seen++ == query_index) {
            auto& list = target.cores[c].items;
            list.erase(list.begin() + static_cast<long>(i));
          }
        });
        Site site;
        site.original = sql::render(items[i].expr);
        site.rewritten = sql::render(copy);
        site.label = "query" + std::to_string(query_index) + ".core" + std::to_string(c) + ".item" + std::to_string(i);
        sites.push_back(std::move(site));
      }
    }
    ++query_index;
  });
  return sites;
}

bool broken_as_contracted(ErrorKind kind, const exec::ExecOutcome& out, const exec::ExecOutcome& original,
                          bool ordered) {
  switch (kind) {
    case ErrorKind::kTruncateParen:
    case ErrorKind::kTypoKeyword:
      return out.status == exec::ExecStatus::kSyntaxError;
    case ErrorKind::kWrongColumn:
      return out.status == exec::ExecStatus::kResolutionError;
    case ErrorKind::kDropProjection:
      return exec::m_exec(out, original, ordered) == 0;
  }
  return false;
}

MutationRecord run(std::string_view sql, ErrorKind kind, std::uint64_t seed, const exec::DatabaseFixture& fixture,
                   const exec::ResourceLimits& limits, const std::optional<std::string>& forced_site) {
  const exec::ExecOutcome original = exec::execute(sql, fixture, limits);
  if (!original.succeeded()) {
    throw InvalidArgument("input query does not run on fixture " + fixture.name() + ": " + original.message);
  }
  std::vector<Site> sites;
  switch (kind) {
    case ErrorKind::kTruncateParen: sites = paren_sites(sql); break;
    case ErrorKind::kTypoKeyword: sites = keyword_sites(sql, seed); break;
    case ErrorKind::kWrongColumn: sites = column_sites(sql, fixture); break;
    case ErrorKind::kDropProjection: sites = projection_sites(sql); break;
  }
  if (sites.empty()) throw NotBreakable(std::string(to_string(kind)) + " does not apply to this query");

  std::mt19937_64 rng(seed);
  const std::size_t start = detail::draw_index(rng, sites.size());
  const bool ordered = exec::has_top_level_order_by(sql);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const Site& site = sites[(start + k) % sites.size()];
    if (forced_site && site.label != *forced_site) continue;
    std::string broken = apply(sql, site);
    const exec::ExecOutcome out = exec::execute(broken, fixture, limits);
    if (!broken_as_contracted(kind, out, original, ordered)) continue;

    MutationRecord r;
    r.kind = MutationKind::kReflectionError;
    r.input_sql = std::string(sql);
    r.output_sql = std::move(broken);
    r.metadata = {
        {"error_kind", to_string(kind)},
        {"seed", std::to_string(seed)},
        {"site", site.label},
        {"offset", site.rewritten.empty() ? std::to_string(site.offset) : ""},
        {"original", site.original},
        {"replacement", site.replacement},
        {"status", exec::to_string(out.status)},
        {"message", out.succeeded() ? "result changed" : out.message},
    };
    return r;
  }
  throw NotBreakable(std::string(to_string(kind)) + ": none of " + std::to_string(sites.size()) +
                     " candidate sites breaks the query as required");
}

}  // namespace

const char* to_string(ErrorKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<ErrorKind> error_kind_from_string(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kKindNames[i]) return static_cast<ErrorKind>(i);
  }
  return std::nullopt;
}

MutationRecord inject_error(std::string_view sql, ErrorKind kind, std::uint64_t seed,
                            const exec::DatabaseFixture& fixture, const exec::ResourceLimits& limits) {
  return run(sql, kind, seed, fixture, limits, std::nullopt);
}

MutationRecord replay(const MutationRecord& record, const exec::DatabaseFixture& fixture) {
  if (record.kind != MutationKind::kReflectionError) throw InvalidArgument("replay expects a reflection_error record");
  const auto kind = error_kind_from_string(record.get("error_kind").value_or(""));
  const auto seed = record.get("seed");
  if (!kind || !seed) throw InvalidArgument("record lacks error_kind or seed");
  return run(record.input_sql, *kind, std::stoull(*seed), fixture, {}, record.get("site"));
}

}  // namespace sqlreward::mutate
