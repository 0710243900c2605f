#include <gtest/gtest.h>

#include <algorithm>

#include "sqlreward/error.h"
#include "sqlreward/exec/engine.h"
#include "sqlreward/mutate/consistency.h"
#include "sqlreward/mutate/degenerate.h"
#include "sqlreward/mutate/inject.h"
#include "sqlreward/mutate/templates.h"
#include "sqlreward/sql/parser.h"
#include "support/test_data.h"

namespace sqlreward::mutate {
namespace {

std::filesystem::path mutation_dir() { return testing::fixture_dir().parent_path() / "mutation"; }

const DimensionInventory& inventory() {
  static const DimensionInventory inv = load_inventory(mutation_dir() / "inventory.json");
  return inv;
}

const QueryTemplate& tpl(const std::string& id) {
  static const std::vector<QueryTemplate> all = load_templates(mutation_dir() / "templates.json");
  for (const auto& t : all) {
    if (t.template_id == id) return t;
  }
  throw std::runtime_error("no template " + id);
}

std::string describe(const SlotFilling& s) {
  std::string out;
  for (const auto& [slot, entity] : s.bindings) out += slot + "=" + entity + "\n";
  return out + s.sql + "\n";
}

TEST(TemplateTest, Deterministic) {
  for (std::uint64_t seed : {0u, 1u, 42u, 977u}) {
    EXPECT_EQ(describe(instantiate(tpl("T004"), inventory(), seed)),
              describe(instantiate(tpl("T004"), inventory(), seed)));
  }
}

TEST(TemplateTest, SkeletonsRunOnTheFixture) {
  for (const char* id : {"T001", "T002", "T003", "T004", "T005"}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SlotFilling s = instantiate(tpl(id), inventory(), seed);
      EXPECT_TRUE(exec::syntax_check(s.sql, testing::retail_star())) << s.sql;
    }
  }
}

TEST(TemplateTest, SingleEntityDimension) {
  DimensionInventory inv;
  inv.dimensions = {{"Only", {"solo"}}, {"Two", {"a", "b"}}};
  inv.fragments = {{"solo", "x = 1"}, {"a", "y = 1"}, {"b", "y = 2"}};
  inv.validate();
  QueryTemplate t{"t", {"Only", "Two"}, std::nullopt, "t"};
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(instantiate(t, inv, seed).bindings[0].second, "solo");
}

TEST(TemplateTest, PriorsShiftTheDraw) {
  DimensionInventory inv;
  inv.dimensions = {{"D", {"a", "b"}}};
  inv.fragments = {{"a", "x = 1"}, {"b", "x = 2"}};
  inv.priors = {{"D", {{"a", 0.0}}}};
  QueryTemplate t{"t", {"D"}, std::nullopt, "t"};
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(instantiate(t, inv, seed).bindings[0].second, "b");
}

TEST(TemplateTest, Errors) {
  DimensionInventory inv;
  inv.dimensions = {{"Empty", {}}, {"D", {"a"}}};
  inv.fragments = {{"a", "x = 1"}};
  EXPECT_THROW(instantiate(QueryTemplate{"t", {"Empty"}, std::nullopt, "t"}, inv, 1), EmptyDimension);
  EXPECT_THROW(instantiate(QueryTemplate{"t", {"Nope"}, std::nullopt, "t"}, inv, 1), InvalidArgument);
  inv.fragments["a"] = "x = = 1";
  EXPECT_THROW(inv.validate(), InvalidArgument);
  inv.fragments.erase("a");
  EXPECT_THROW(inv.validate(), InvalidArgument);
}

TEST(TemplateTest, GoldenBindingSeed42) {
  EXPECT_EQ(describe(instantiate(tpl("T004"), inventory(), 42)),
            testing::read_file(testing::data_dir() / "golden" / "instantiate_T004_seed42.txt"));
}

// ---- error injection --------------------------------------------------------

exec::DatabaseFixture toy() {
  return exec::DatabaseFixture::build("toy",
                                      "CREATE TABLE t (a INTEGER, x INTEGER, series_name TEXT);"
                                      "INSERT INTO t VALUES (1, 1, 'L'), (2, 0, 'M'), (3, 1, 'N');");
}

TEST(InjectTest, TruncateParen) {
  const auto f = toy();
  const MutationRecord r = inject_error("SELECT a FROM t WHERE (x=1)", ErrorKind::kTruncateParen, 3, f);
  EXPECT_EQ(r.output_sql, "SELECT a FROM t WHERE (x=1");
  EXPECT_FALSE(exec::syntax_check(r.output_sql, f));
  EXPECT_EQ(r.get("status"), "syntax_error");
  EXPECT_THROW(inject_error("SELECT a FROM t", ErrorKind::kTruncateParen, 3, f), NotBreakable);
}

TEST(InjectTest, WrongColumnIsResolutionError) {
  const auto f = toy();
  const MutationRecord r = inject_error("SELECT a FROM t", ErrorKind::kWrongColumn, 9, f);
  EXPECT_EQ(exec::execute(r.output_sql, f).status, exec::ExecStatus::kResolutionError);
  EXPECT_NE(r.get("message")->find("cannot be resolved"), std::string::npos);
}

TEST(InjectTest, DropProjectionReferencedByOuterQuery) {
  const auto f = toy();
  const std::string sql = "SELECT t4.series_name FROM (SELECT series_name, a FROM t) t4 WHERE t4.a > 1";
  bool saw_resolution = false;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const MutationRecord r = inject_error(sql, ErrorKind::kDropProjection, seed, f);
    const auto out = exec::execute(r.output_sql, f);
    if (out.status == exec::ExecStatus::kResolutionError) {
      saw_resolution = true;
      EXPECT_NE(out.message.find("cannot be resolved"), std::string::npos) << out.message;
    }
  }
  EXPECT_TRUE(saw_resolution);
}

TEST(InjectTest, TypoKeyword) {
  const auto f = toy();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MutationRecord r = inject_error("SELECT a, COUNT(*) FROM t WHERE x = 1 GROUP BY a", ErrorKind::kTypoKeyword, seed, f);
    EXPECT_EQ(exec::execute(r.output_sql, f).status, exec::ExecStatus::kSyntaxError) << r.output_sql;
  }
}

TEST(InjectTest, ReplayIsByteIdentical) {
  const auto& f = testing::retail_star();
  const auto queries = testing::gold_queries();
  for (ErrorKind kind : {ErrorKind::kTruncateParen, ErrorKind::kTypoKeyword, ErrorKind::kWrongColumn,
                         ErrorKind::kDropProjection}) {
    for (std::size_t i = 0; i < queries.size(); i += 7) {
      try {
        const MutationRecord r = inject_error(queries[i].sql, kind, 1000 + i, f);
        EXPECT_EQ(replay(r, f).output_sql, r.output_sql);
        EXPECT_EQ(replay(r, f).metadata, r.metadata);
      } catch (const NotBreakable&) {
      }
    }
  }
}

TEST(InjectTest, RejectsBrokenInput) {
  EXPECT_THROW(inject_error("SELECT nope FROM t", ErrorKind::kTypoKeyword, 1, toy()), InvalidArgument);
}

// ---- degenerate dimension ---------------------------------------------------

TEST(DegenerateTest, ProvinceNameMovesIntoTheTargetTable) {
  const auto& f = testing::retail_star();
  const std::string sql =
      "SELECT d.province_name, SUM(f.target_cnt) AS total FROM dwd_sale_target f "
      "LEFT JOIN dim_area d ON f.province_id = d.province_id WHERE f.day_id >= '2024-01-01' "
      "GROUP BY d.province_name";
  const DegenerateResult r = degenerate_rewrite(sql, f, "dim_area", {"province_name"});
  EXPECT_EQ(r.record.output_sql.find("dim_area"), std::string::npos);
  EXPECT_EQ(r.record.output_sql.find("JOIN"), std::string::npos);
  EXPECT_NE(r.record.output_sql.find("province_name"), std::string::npos);
  EXPECT_EQ(r.fixture.name(), "retail_star~degenerate~dim_area");
  ASSERT_NE(r.fixture.find_table("dwd_sale_target"), nullptr);
  EXPECT_TRUE(r.fixture.find_table("dwd_sale_target")->find_column("province_name"));
  EXPECT_FALSE(f.find_table("dwd_sale_target")->find_column("province_name"));

  const auto before = exec::execute(sql, f);
  const auto after = exec::execute(r.record.output_sql, r.fixture);
  EXPECT_EQ(exec::m_exec(after, before, false), 1);
  EXPECT_EQ(r.record.get("join_type"), "LEFT");
}

TEST(DegenerateTest, InnerJoinWithOrphansIsRejected) {
  EXPECT_THROW(degenerate_rewrite("SELECT a.province_name, t.target_cnt FROM dwd_sale_target t "
                                  "JOIN dim_area a ON t.province_id = a.province_id",
                                  testing::retail_star(), "dim_area", {"province_name"}),
               UnsupportedJoinShape);
}

TEST(DegenerateTest, InnerJoinEitherSide) {
  const auto& f = testing::retail_star();
  const std::string sql =
      "SELECT s.brand_name, COUNT(*) FROM dim_series s JOIN fact_sales f ON s.series_id = f.series_id "
      "WHERE s.product_line = 'ev' GROUP BY s.brand_name";
  const DegenerateResult r = degenerate_rewrite(sql, f, "dim_series", {"brand_name", "product_line"});
  EXPECT_EQ(exec::m_exec(exec::execute(r.record.output_sql, r.fixture), exec::execute(sql, f), false), 1);
}

TEST(DegenerateTest, UnsupportedShapes) {
  const auto& f = testing::retail_star();
  EXPECT_THROW(degenerate_rewrite("SELECT COUNT(*) FROM fact_sales", f, "dim_area", {"province_name"}),
               UnsupportedJoinShape);
  EXPECT_THROW(degenerate_rewrite("SELECT a.province_name FROM fact_sales f JOIN dim_area a "
                                  "ON f.province_id > a.province_id",
                                  f, "dim_area", {"province_name"}),
               UnsupportedJoinShape);
  EXPECT_THROW(degenerate_rewrite("SELECT a.region_name FROM fact_sales f JOIN dim_area a "
                                  "ON f.province_id = a.province_id",
                                  f, "dim_area", {"province_name"}),
               UnsupportedJoinShape);
  EXPECT_THROW(degenerate_rewrite("SELECT * FROM fact_sales f JOIN dim_area a ON f.province_id = a.province_id", f,
                                  "dim_area", {"province_name"}),
               UnsupportedJoinShape);
  EXPECT_THROW(degenerate_rewrite("SELECT a.province_name FROM dim_area a LEFT JOIN fact_sales f "
                                  "ON f.province_id = a.province_id",
                                  f, "dim_area", {"province_name"}),
               UnsupportedJoinShape);
}

TEST(DegenerateTest, CollidingColumnIsAmbiguous) {
  EXPECT_THROW(degenerate_rewrite("SELECT d.day_id FROM fact_sales f JOIN dim_date d ON f.day_id = d.day_id",
                                  testing::retail_star(), "dim_date", {"day_id"}),
               AmbiguousColumn);
}

// ---- consistency ------------------------------------------------------------

TEST(ConsistencyTest, Examples) {
  ScriptedGenerator same({"SELECT a FROM t WHERE x = 1"});
  EXPECT_TRUE(consistency_verify(same, "q").accepted);
  EXPECT_EQ(same.calls(), 3u);

  ScriptedGenerator limit({"SELECT a FROM t LIMIT 5", "SELECT a FROM t LIMIT 5", "SELECT a FROM t LIMIT 10"});
  const ConsistencyResult r = consistency_verify(limit, "q");
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.samples.size(), 3u);

  ScriptedGenerator casing({"SELECT a FROM t WHERE x = 1 AND y = 2", "select A from T where Y = 2 and X = 1",
                            "SELECT a FROM t WHERE 1 = x AND y = 2"});
  EXPECT_TRUE(consistency_verify(casing, "q").accepted);
}

TEST(ConsistencyTest, GeneratorFailureRejectsWithPartialSamples) {
  ScriptedGenerator g({"SELECT 1", "FAIL"}, "FAIL");
  const ConsistencyResult r = consistency_verify(g, "q");
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.samples, std::vector<std::string>{"SELECT 1"});
}

TEST(ConsistencyTest, OrderInvariant) {
  std::vector<std::string> s = {"SELECT a FROM t WHERE x = 1 AND y = 2", "SELECT a FROM t WHERE y = 2 AND x = 1",
                                "select a from t where x = 1 and y = 2"};
  std::sort(s.begin(), s.end());
  const ConsistencyResult first = consistency_check(s);
  do {
    const ConsistencyResult r = consistency_check(s);
    EXPECT_EQ(r.accepted, first.accepted);
    EXPECT_EQ(r.sql, first.sql);
  } while (std::next_permutation(s.begin(), s.end()));
  EXPECT_THROW(consistency_check({"SELECT 1"}), InvalidArgument);
}

}  // namespace
}  // namespace sqlreward::mutate
