#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "sqlreward/exec/fixture.h"
#include "sqlreward/exec/result.h"

namespace sqlreward::exec {

struct ResourceLimits {
  std::size_t max_rows = 100000;
  std::chrono::milliseconds timeout{5000};
};

// Runs one read-only statement. Never throws for bad SQL; every failure is
// reported through the outcome status.
ExecOutcome execute(std::string_view sql, const DatabaseFixture& fixture,
                    const ResourceLimits& limits = {});

// True iff `sql` is a single statement that compiles against the fixture
// catalog. Nothing is executed.
bool syntax_check(std::string_view sql, const DatabaseFixture& fixture);

// The engine's diagnostic when syntax_check fails, nullopt when it passes.
std::optional<std::string> syntax_diagnostic(std::string_view sql, const DatabaseFixture& fixture);

// 1 iff both queries succeed and return equal results. Rows are compared in
// order only when the gold query has a top-level ORDER BY. Throws
// GoldExecutionFailed when the gold query itself fails.
int m_exec(std::string_view pred_sql, std::string_view gold_sql, const DatabaseFixture& fixture,
           const ResourceLimits& limits = {});

// Same comparison against an already executed gold outcome.
int m_exec(const ExecOutcome& pred, const ExecOutcome& gold, bool gold_ordered);

// Whether the gold query's outermost query carries ORDER BY. Unparseable
// text counts as unordered.
bool has_top_level_order_by(std::string_view sql);

}  // namespace sqlreward::exec
