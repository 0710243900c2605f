#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqlreward/grpo/grpo.h"
#include "sqlreward/mutate/inject.h"
#include "sqlreward/service/registry.h"
#include "sqlreward/service/scorer.h"

namespace sqlreward::service {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRecordErrors = 1;
inline constexpr int kExitFatal = 2;

// One response line per non-blank input line, in input order. Returns
// kExitRecordErrors when any record carries an error.
int cmd_score(std::istream& in, std::ostream& out, const Scorer& scorer, bool with_timing);

// Input lines {"query_id", "reward" | "rewards", "ratio" | "ratios"?, "kl" |
// "kl_estimates"?} are grouped by query_id in order of first appearance.
// Emits {"query_id", "rewards", "advantages", "objective"?} per group; the
// objective appears when every member has a ratio and a KL estimate.
int cmd_score_group(std::istream& in, std::ostream& out, const grpo::GrpoParams& params);

struct MutateOptions {
  std::string mode;  // "reflection", "degenerate" or "instantiate"
  std::optional<mutate::ErrorKind> error_kind;
  std::string fixture_ref;
  std::string dim_table;
  std::vector<std::string> merge_columns;
  std::uint64_t seed = 0;
  std::filesystem::path inventory;
  std::filesystem::path templates;
  std::size_t count = 1;
  // Degenerate mode: derived fixtures are written here, one directory each.
  std::optional<std::filesystem::path> write_fixtures;
};

// reflection/degenerate read one input per line: raw SQL, or
// {"sql", "fixture_ref"?, "error_kind"?, "dim_table"?, "merge_columns"?, "seed"?}.
// Line i uses seed + i unless it names its own. instantiate ignores `in` and
// emits `count` fillings per template. Failed inputs are reported inline.
// Throws for unusable options (bad inventory, unknown mode).
int cmd_mutate(std::istream& in, std::ostream& out, const MutateOptions& options, const FixtureRegistry& fixtures);

// Loads each manifest (or directory holding manifest.json) and prints a
// summary line per fixture.
int cmd_validate_fixture(const std::vector<std::filesystem::path>& paths, std::ostream& out);

}  // namespace sqlreward::service
