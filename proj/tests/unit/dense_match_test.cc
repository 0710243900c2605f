#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sqlreward/dense/dense_match.h"
#include "sqlreward/dense/hungarian.h"
#include "sqlreward/error.h"
#include "sqlreward/semantic/embedding.h"

namespace sqlreward::dense {
namespace {

using exec::Cell;
using exec::ResultTable;

double brute_force_min(const CostMatrix& c) {
  const std::size_t rows = c.size(), cols = c[0].size();
  const bool wide = rows <= cols;
  const std::size_t k = std::min(rows, cols), big = std::max(rows, cols);
  std::vector<std::size_t> perm(big);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    if (wide) {
      for (std::size_t i = 0; i < k; ++i) s += c[i][perm[i]];
    } else {
      // perm[j] is the row for column j; sum in row order to mirror the solver.
      std::vector<int> row_col(rows, -1);
      for (std::size_t j = 0; j < k; ++j) row_col[perm[j]] = static_cast<int>(j);
      for (std::size_t i = 0; i < rows; ++i)
        if (row_col[i] >= 0) s += c[i][row_col[i]];
    }
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

ResultTable table(std::vector<std::string> headers, std::vector<exec::Row> rows) {
  return ResultTable{std::move(headers), std::move(rows)};
}

TEST(HungarianTest, TwoByTwoExample) {
  Assignment a = solve_assignment({{0.1, 0.9}, {0.8, 0.2}});
  EXPECT_EQ(a.row_to_col, (std::vector<int>{0, 1}));
  EXPECT_NEAR(a.cost, 0.3, 1e-15);
}

TEST(HungarianTest, RectangularLeavesRowsOut) {
  Assignment a = solve_assignment({{5, 1}, {1, 5}, {0, 0}});
  EXPECT_EQ(std::count(a.row_to_col.begin(), a.row_to_col.end(), -1), 1);
  EXPECT_DOUBLE_EQ(a.cost, brute_force_min({{5, 1}, {1, 5}, {0, 0}}));
}

TEST(HungarianTest, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    CostMatrix c(dim(rng), std::vector<double>(0));
    const int cols = dim(rng);
    for (auto& row : c) {
      row.resize(cols);
      for (double& x : row) x = val(rng);
    }
    Assignment a = solve_assignment(c);
    EXPECT_EQ(a.cost, brute_force_min(c));
  }
}

TEST(HungarianTest, RejectsBadInput) {
  EXPECT_THROW(solve_assignment({{1, 2}, {3}}), InvalidArgument);
  EXPECT_THROW(solve_assignment({{NAN}}), InvalidArgument);
  EXPECT_TRUE(solve_assignment({}).row_to_col.empty());
}

TEST(AlignTest, IdenticalHeadersMatchDiagonally) {
  semantic::HashedBagEmbedder e;
  ResultTable t = table({"region", "total_sales", "year"}, {});
  AlignmentPlan plan = align_schemas(t, t, e);
  ASSERT_EQ(plan.matched_pairs.size(), 3u);
  for (const MatchedPair& p : plan.matched_pairs) {
    EXPECT_EQ(p.pred, p.gold);
    EXPECT_EQ(p.similarity, 1.0);
  }
  EXPECT_EQ(s_schema(plan, t, t), 1.0);
}

TEST(AlignTest, PartialBijection) {
  semantic::HashedBagEmbedder e;
  ResultTable p = table({"a", "b", "c"}, {});
  ResultTable g = table({"a", "b"}, {});
  AlignmentPlan plan = align_schemas(p, g, e);
  EXPECT_EQ(plan.matched_pairs.size(), 2u);
  EXPECT_EQ(plan.unmatched_pred.size(), 1u);
  EXPECT_TRUE(plan.unmatched_gold.empty());
}

TEST(SchemaScoreTest, Examples) {
  ResultTable p = table({"a", "b", "c", "d"}, {});
  ResultTable g = table({"a", "b"}, {});
  AlignmentPlan plan = align_by_similarity({{1, 0}, {0, 1}, {0, 0}, {0, 0}});
  EXPECT_DOUBLE_EQ(s_schema(plan, p, g), 0.5);
  AlignmentPlan none = align_by_similarity({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
  EXPECT_EQ(s_schema(none, p, g), 0.0);
}

TEST(RowScoreTest, Examples) {
  EXPECT_EQ(s_rows(5, 5), 1.0);
  EXPECT_NEAR(s_rows(0, 9), 0.0, 1e-15);
  EXPECT_NEAR(s_rows(99, 9), 0.0, 1e-15);
  EXPECT_NEAR(s_rows(19, 9), 1.0 - std::log10(2.0), 1e-12);
  for (std::size_t a = 0; a < 40; ++a)
    for (std::size_t b = 0; b < 40; ++b) EXPECT_EQ(s_rows(a, b), s_rows(b, a));
}

TEST(ValuesMatchTest, Tolerance) {
  EXPECT_TRUE(values_match(Cell::real(100.5), Cell::real(100.0)));
  EXPECT_TRUE(values_match(Cell::real(101.0), Cell::integer(100)));
  EXPECT_FALSE(values_match(Cell::real(102.1), Cell::integer(100)));
  EXPECT_FALSE(values_match(Cell::real(1e-9), Cell::integer(0)));
  EXPECT_TRUE(values_match(Cell::integer(0), Cell::real(0.0)));
  EXPECT_TRUE(values_match(Cell(), Cell()));
  EXPECT_FALSE(values_match(Cell(), Cell::integer(0)));
  EXPECT_TRUE(values_match(Cell::text("a"), Cell::text("a")));
  EXPECT_FALSE(values_match(Cell::text("a"), Cell::text("A")));
}

TEST(ValuesScoreTest, Examples) {
  ResultTable one = table({"v"}, {{Cell::real(100.5)}});
  ResultTable gold_one = table({"v"}, {{Cell::real(100.0)}});
  AlignmentPlan diag = align_by_similarity({{1.0}});
  EXPECT_EQ(s_values(one, gold_one, diag), 1.0);

  ResultTable p = table({"v"}, {{Cell::integer(1)}, {Cell::integer(2)}});
  ResultTable g = table({"v"}, {{Cell::integer(1)}, {Cell::integer(3)}});
  EXPECT_EQ(s_values(p, g, diag), 0.5);
  EXPECT_EQ(s_values(p, p, diag), 1.0);
}

TEST(ValuesScoreTest, DeletingAMatchedCellNeverIncreases) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> v(0, 5);
  AlignmentPlan diag = align_by_similarity({{1.0}});
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    ResultTable p = table({"a"}, {}), g = table({"a"}, {});
    for (int r = 0; r < 6; ++r) {
      p.rows.push_back({Cell::integer(v(rng))});
      g.rows.push_back({Cell::integer(v(rng))});
    }
    // A pred value is fully matched when gold holds at least as many copies.
    auto count = [](const ResultTable& tab, const Cell& c) {
      return std::count_if(tab.rows.begin(), tab.rows.end(), [&](const exec::Row& r) { return r[0] == c; });
    };
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      if (count(p, p.rows[i][0]) > count(g, p.rows[i][0])) continue;
      const double before = s_values(p, g, diag);
      ResultTable smaller = p;
      smaller.rows.erase(smaller.rows.begin() + static_cast<long>(i));
      EXPECT_LE(s_values(smaller, g, diag), before);
      ++checked;
      break;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(DenseScoreTest, IdenticalTablesScoreOne) {
  semantic::HashedBagEmbedder e;
  ResultTable t = table({"region", "amount"}, {{Cell::text("north"), Cell::real(1.5)},
                                               {Cell::text("south"), Cell::real(2.5)}});
  EXPECT_EQ(s_dense(t, t, DenseWeights{}, e).total, 1.0);
  EXPECT_EQ(s_dense(t, t, DenseWeights{0.1, 0.1, 0.8}, e).total, 1.0);
}

TEST(DenseScoreTest, DisjointTablesKeepOnlyRowTerm) {
  ResultTable p = table({"alpha"}, {{Cell::text("x")}, {Cell::text("y")}});
  ResultTable g = table({"omega"}, {{Cell::text("z")}});
  AlignmentPlan plan = align_by_similarity({{0.0}});
  DenseWeights w;
  DenseScore s = s_dense(p, g, w, plan);
  EXPECT_EQ(s.s_schema, 0.0);
  EXPECT_EQ(s.s_values, 0.0);
  EXPECT_EQ(s.total, w.rows * s_rows(2, 1));
}

TEST(DenseScoreTest, WeightedSum) {
  const double total = 0.3 * 1.0 + 0.2 * (1.0 - std::log10(2.0)) + 0.5 * 0.5;
  EXPECT_NEAR(total, 0.6898, 1e-4);
}

TEST(DenseScoreTest, DegenerateWeightsSelectOneAxis) {
  ResultTable p = table({"a", "b"}, {{Cell::integer(1), Cell::integer(2)}});
  ResultTable g = table({"a"}, {{Cell::integer(1)}, {Cell::integer(4)}, {Cell::integer(5)}});
  AlignmentPlan plan = align_by_similarity({{0.7}, {0.2}});
  DenseScore s = s_dense(p, g, DenseWeights{1, 0, 0}, plan);
  EXPECT_EQ(s.total, s.s_schema);
  EXPECT_EQ(s_dense(p, g, DenseWeights{0, 1, 0}, plan).total, s.s_rows);
  EXPECT_EQ(s_dense(p, g, DenseWeights{0, 0, 1}, plan).total, s.s_values);
}

TEST(DenseScoreTest, InvalidWeights) {
  EXPECT_THROW(DenseWeights({0.5, 0.5, 0.5}).validate(), InvalidArgument);
  EXPECT_THROW(DenseWeights({-0.1, 0.6, 0.5}).validate(), InvalidArgument);
  EXPECT_NO_THROW(DenseWeights({0.3, 0.2, 0.5}).validate());
}

}  // namespace
}  // namespace sqlreward::dense
