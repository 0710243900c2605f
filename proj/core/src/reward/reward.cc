#include "sqlreward/reward/reward.h"

#include <cmath>

#include "sqlreward/error.h"
#include "sqlreward/sql/flatten.h"
#include "sqlreward/sql/parser.h"

namespace sqlreward::reward {

void RewardConfig::validate() const {
  for (double w : {lambda_acc, lambda_fmt, lambda_gram, lambda_len}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("reward weights must be finite and >= 0");
  }
  if (!(alpha_struct >= 0.0 && alpha_struct <= 1.0)) throw InvalidArgument("alpha_struct must lie in [0, 1]");
  if (l_max == 0 || l_cache == 0) throw InvalidArgument("l_max and l_cache must be positive");
  if (l_cache >= l_max) throw InvalidArgument("l_cache must be smaller than l_max");
  nl_thresholds.validate();
  dense_weights.validate();
}

const char* to_string(AccBranch branch) {
  switch (branch) {
    case AccBranch::kNl: return "nl";
    case AccBranch::kExecMatch: return "exec_match";
    case AccBranch::kStructural: return "structural";
  }
  return "?";
}

int r_gram(std::string_view answer, std::string_view gold_target, const exec::DatabaseFixture& fixture) {
  if (classify_modality(answer) == Modality::kSql) return exec::syntax_check(answer, fixture) ? 1 : 0;
  return classify_modality(gold_target) == Modality::kNl ? 1 : 0;
}

double r_len(std::size_t token_count, const RewardConfig& cfg) {
  const double length = static_cast<double>(token_count);
  const double safe = static_cast<double>(cfg.l_max - cfg.l_cache);
  if (token_count <= cfg.l_max - cfg.l_cache) return 0.0;
  if (token_count <= cfg.l_max) return (safe - length) / static_cast<double>(cfg.l_cache);
  return -1.0;
}

double r_struct(double s_ast, double s_dense, double alpha) { return alpha * s_ast + (1.0 - alpha) * s_dense; }

namespace {

void note(const ScoreOptions& options, std::string text) {
  if (options.diagnostics) options.diagnostics->push_back(std::move(text));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

AccResult nl_accuracy(const std::string& answer, const TaskSample& sample, const RewardConfig& cfg,
                      const semantic::EmbeddingProvider& embedder, const ScoreOptions& options) {
  AccResult out;
  out.branch = AccBranch::kNl;
  if (semantic::trim(sample.gold_target).empty()) throw InvalidArgument("natural-language gold target is blank");
  if (semantic::trim(answer).empty()) {
    note(options, "nl: empty answer");
    return out;
  }
  std::vector<semantic::EmbeddingVector> v = semantic::embed_all(embedder, {answer, sample.gold_target});
  const double rho = semantic::cosine(v[0], v[1]);
  out.score = semantic::nl_step(rho, cfg.nl_thresholds);
  note(options, "nl: similarity " + fmt(rho));
  return out;
}

AccResult sql_accuracy(const std::string& answer, const TaskSample& sample, const RewardConfig& cfg,
                       const exec::DatabaseFixture& fixture, const semantic::EmbeddingProvider& embedder,
                       const ScoreOptions& options) {
  const exec::ExecOutcome gold = exec::execute(sample.gold_target, fixture, options.limits);
  if (!gold.succeeded()) {
    throw GoldExecutionFailed("gold query failed on fixture " + fixture.name() + " (" +
                              exec::to_string(gold.status) + "): " + gold.message);
  }
  AccResult out;
  const exec::ExecOutcome pred = exec::execute(answer, fixture, options.limits);
  if (exec::m_exec(pred, gold, exec::has_top_level_order_by(sample.gold_target)) == 1) {
    out.score = 1.0;
    out.branch = AccBranch::kExecMatch;
    note(options, "sql: execution match");
    return out;
  }

  out.branch = AccBranch::kStructural;
  auto pred_query = sql::try_parse(answer);
  if (!pred_query) {
    out.s_ast = 0.0;
    out.s_dense = 0.0;
    out.score = 0.0;
    note(options, "sql: prediction does not parse, structural reward 0");
    return out;
  }
  auto gold_query = sql::try_parse(sample.gold_target);
  if (gold_query) {
    out.s_ast = sql::s_ast(sql::flatten(*pred_query), sql::flatten(*gold_query));
  } else {
    out.s_ast = 0.0;
    note(options, "sql: gold query outside the parser subset, s_ast 0");
  }
  if (pred.succeeded()) {
    out.dense = dense::s_dense(*pred.result, *gold.result, cfg.dense_weights, embedder);
    out.s_dense = out.dense->total;
    note(options, "sql: result mismatch, s_schema " + fmt(out.dense->s_schema) + " s_rows " +
                      fmt(out.dense->s_rows) + " s_values " + fmt(out.dense->s_values));
  } else {
    out.s_dense = 0.0;
    note(options, std::string("sql: prediction failed (") + exec::to_string(pred.status) + "): " + pred.message);
  }
  out.score = r_struct(*out.s_ast, *out.s_dense, cfg.alpha_struct);
  return out;
}

}  // namespace

AccResult r_acc(const TaskSample& sample, const RewardConfig& cfg, const exec::DatabaseFixture& fixture,
                const semantic::EmbeddingProvider& embedder, const ScoreOptions& options) {
  const std::string answer = best_effort_answer(sample.model_output);
  if (modality_of(sample.category) == Modality::kNl) {
    return nl_accuracy(answer, sample, cfg, embedder, options);
  }
  return sql_accuracy(answer, sample, cfg, fixture, embedder, options);
}

double weighted_total(const RewardBreakdown& b, const RewardConfig& cfg) {
  return cfg.lambda_acc * b.r_acc + cfg.lambda_fmt * b.r_fmt + cfg.lambda_gram * b.r_gram + cfg.lambda_len * b.r_len;
}

RewardBreakdown score(const TaskSample& sample, const RewardConfig& cfg, const exec::DatabaseFixture& fixture,
                      const semantic::EmbeddingProvider& embedder, const ScoreOptions& options) {
  RewardBreakdown b;
  b.r_fmt = r_fmt(sample.model_output);
  if (b.r_fmt == 0) note(options, "format: output does not match the tag layout, using raw output as answer");
  const std::string answer = best_effort_answer(sample.model_output);

  b.r_gram = r_gram(answer, sample.gold_target, fixture);
  const std::size_t tokens =
      sample.token_count ? *sample.token_count : options.token_counter(sample.model_output);
  b.r_len = r_len(tokens, cfg);

  AccResult acc = r_acc(sample, cfg, fixture, embedder, options);
  b.r_acc = acc.score;
  b.acc_branch = acc.branch;
  b.s_ast = acc.s_ast;
  b.s_dense = acc.s_dense;
  if (acc.dense) {
    b.s_schema = acc.dense->s_schema;
    b.s_rows = acc.dense->s_rows;
    b.s_values = acc.dense->s_values;
  }
  b.total = weighted_total(b, cfg);
  return b;
}

}  // namespace sqlreward::reward
