#include <benchmark/benchmark.h>

#include <random>

#include "sqlreward/dense/hungarian.h"
#include "sqlreward/grpo/grpo.h"
#include "sqlreward/reward/reward.h"
#include "sqlreward/sql/flatten.h"
#include "sqlreward/sql/parser.h"
#include "support/test_data.h"

namespace {

using namespace sqlreward;

const std::string kQuery =
    "SELECT a.region_name, s.brand_name, SUM(f.amount) AS total FROM fact_sales f "
    "JOIN dim_area a ON f.province_id = a.province_id JOIN dim_series s ON f.series_id = s.series_id "
    "WHERE f.day_id >= '2024-01-01' AND f.channel_id IN (1, 2, 3) AND f.quantity > 2 "
    "GROUP BY a.region_name, s.brand_name ORDER BY total DESC LIMIT 10";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sql::parse(kQuery));
}
BENCHMARK(BM_Parse);

void BM_FlattenAndSAst(benchmark::State& state) {
  const sql::SqlQuery gold = sql::parse(kQuery);
  const sql::SqlQuery pred = sql::parse(
      "SELECT a.region_name, SUM(f.amount) FROM fact_sales f JOIN dim_area a ON a.province_id = f.province_id "
      "WHERE f.quantity > 2 AND f.day_id >= '2024-01-01' GROUP BY a.region_name");
  for (auto _ : state) benchmark::DoNotOptimize(sql::s_ast(sql::flatten(pred), sql::flatten(gold)));
}
BENCHMARK(BM_FlattenAndSAst);

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  dense::CostMatrix m(n, std::vector<double>(n));
  for (auto& row : m) {
    for (double& x : row) x = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(dense::solve_assignment(m));
}
BENCHMARK(BM_Hungarian)->Arg(8)->Arg(32)->Arg(128);

void score_bench(benchmark::State& state, const std::string& answer) {
  const exec::DatabaseFixture& db = testing::retail_star();
  semantic::HashedBagEmbedder embedder;
  reward::TaskSample s;
  s.question = "sales by region and brand";
  s.model_output = "<think>join the dimensions</think><answer>" + answer + "</answer>";
  s.gold_target = kQuery;
  s.fixture_ref = db.name();
  const reward::RewardConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(reward::score(s, cfg, db, embedder));
  state.SetItemsProcessed(state.iterations());
}

void BM_ScoreExecMatch(benchmark::State& state) { score_bench(state, kQuery); }
BENCHMARK(BM_ScoreExecMatch);

void BM_ScoreStructural(benchmark::State& state) {
  score_bench(state,
              "SELECT a.region_name, SUM(f.quantity) AS total FROM fact_sales f JOIN dim_area a "
              "ON f.province_id = a.province_id GROUP BY a.region_name");
}
BENCHMARK(BM_ScoreStructural);

void BM_Advantages(benchmark::State& state) {
  std::vector<double> r(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 3.4);
  for (double& x : r) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(grpo::advantages(r));
}
BENCHMARK(BM_Advantages)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
