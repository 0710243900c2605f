#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sqlreward/exec/engine.h"
#include "sqlreward/exec/fixture.h"
#include "sqlreward/mutate/record.h"

namespace sqlreward::mutate {

enum class ErrorKind {
  kTruncateParen,  // drop one closing parenthesis
  kTypoKeyword,    // misspell one keyword
  kWrongColumn,    // rename one column reference to a name the fixture lacks
  kDropProjection, // remove one item from a select list
};

const char* to_string(ErrorKind kind);
std::optional<ErrorKind> error_kind_from_string(std::string_view name);

// Breaks a working query and records the engine's own error message.
//
// Candidate sites are tried in a rotation whose start is drawn from `seed`;
// the first site that breaks as contracted wins. Syntactic kinds must end in
// a syntax error, wrong_column in a resolution error, and drop_projection
// must fail or change the result. Metadata keys: error_kind, seed, site,
// offset, original, replacement, status, message.
//
// Throws InvalidArgument when `sql` does not run on `fixture`, NotBreakable
// when no site qualifies.
MutationRecord inject_error(std::string_view sql, ErrorKind kind, std::uint64_t seed,
                            const exec::DatabaseFixture& fixture, const exec::ResourceLimits& limits = {});

// Re-runs the operation described by a reflection_error record.
MutationRecord replay(const MutationRecord& record, const exec::DatabaseFixture& fixture);

}  // namespace sqlreward::mutate
