#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sqlreward/exec/engine.h"
#include "sqlreward/exec/fixture.h"
#include "sqlreward/mutate/record.h"

namespace sqlreward::mutate {

struct DegenerateResult {
  exec::DatabaseFixture fixture;
  MutationRecord record;
};

// Merges `merge_columns` of `dim_table` into the fact table it joins and
// rewrites `sql` without that join.
//
// Supported shape: `dim_table` appears once in the query, joined with
// `ON d.key = f.fk` to a base table f. INNER joins may have the dimension on
// either side; LEFT joins need it on the right. The dimension key must be
// unique, and an INNER join must not drop fact rows. References to d.col
// become f.col; d.key becomes f.fk. Star projections are rejected.
//
// The new fixture is named "<old>~degenerate~<dim>". The rewrite is executed
// against it and must return the original result; otherwise it is rejected.
//
// Throws UnsupportedJoinShape, AmbiguousColumn (a merged column already
// exists on the fact table) or InvalidArgument (bad input query, unknown
// merge column).
DegenerateResult degenerate_rewrite(std::string_view sql, const exec::DatabaseFixture& fixture,
                                    std::string_view dim_table, const std::vector<std::string>& merge_columns,
                                    const exec::ResourceLimits& limits = {});

}  // namespace sqlreward::mutate
