#include <gtest/gtest.h>

#include <set>

#include "sqlreward/exec/engine.h"
#include "sqlreward/sql/parser.h"
#include "support/test_data.h"

namespace sqlreward {
namespace {

TEST(RetailStarTest, ShapeAndClock) {
  const auto& f = testing::retail_star();
  EXPECT_GE(f.schema().size(), 5u);
  EXPECT_GE(f.total_rows(), 1000u);
  EXPECT_EQ(exec::format_iso8601_ms(f.frozen_clock_unix_ms()).substr(0, 10), "2024-06-30");
}

TEST(GoldCorpusTest, EveryQueryRunsAndParses) {
  const auto& f = testing::retail_star();
  const auto queries = testing::gold_queries();
  ASSERT_GE(queries.size(), 50u);
  std::set<std::string> ids;
  for (const auto& q : queries) {
    EXPECT_TRUE(ids.insert(q.id).second) << q.id;
    const auto out = exec::execute(q.sql, f);
    EXPECT_EQ(out.status, exec::ExecStatus::kOk) << q.id << ": " << out.message;
    EXPECT_TRUE(sql::try_parse(q.sql).has_value()) << q.id;
  }
}

}  // namespace
}  // namespace sqlreward
