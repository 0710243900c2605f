#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlreward/dense/dense_match.h"
#include "sqlreward/exec/engine.h"
#include "sqlreward/exec/fixture.h"
#include "sqlreward/reward/format.h"
#include "sqlreward/reward/task.h"
#include "sqlreward/semantic/embedding.h"
#include "sqlreward/semantic/nl_accuracy.h"

namespace sqlreward::reward {

struct RewardConfig {
  double lambda_acc = 1.5;
  double lambda_fmt = 1.0;
  double lambda_gram = 0.9;
  double lambda_len = 0.8;
  double alpha_struct = 0.5;
  std::size_t l_max = 4096;
  std::size_t l_cache = 512;
  semantic::NlAccThresholds nl_thresholds;
  dense::DenseWeights dense_weights;

  // Throws InvalidArgument.
  void validate() const;
};

enum class AccBranch { kNl, kExecMatch, kStructural };

const char* to_string(AccBranch branch);

struct RewardBreakdown {
  int r_fmt = 0;
  int r_gram = 0;
  double r_len = 0.0;
  double r_acc = 0.0;
  AccBranch acc_branch = AccBranch::kNl;
  std::optional<double> s_ast;
  std::optional<double> s_dense;
  std::optional<double> s_schema;
  std::optional<double> s_rows;
  std::optional<double> s_values;
  double total = 0.0;
};

struct AccResult {
  double score = 0.0;
  AccBranch branch = AccBranch::kNl;
  std::optional<double> s_ast;
  std::optional<double> s_dense;
  std::optional<dense::DenseScore> dense;
};

using TokenCounter = std::function<std::size_t(std::string_view)>;

struct ScoreOptions {
  exec::ResourceLimits limits;
  TokenCounter token_counter = default_token_count;
  // Human-readable notes (branch taken, parse errors, alignment) are
  // appended here when set. They never affect the scores.
  std::vector<std::string>* diagnostics = nullptr;
};

// Grammar gate: the engine's compile check for SQL answers, full credit when
// answer and gold are both natural language, 0 otherwise.
int r_gram(std::string_view answer, std::string_view gold_target, const exec::DatabaseFixture& fixture);

// 0 up to l_max - l_cache, linear down to -1 at l_max, -1 beyond.
double r_len(std::size_t token_count, const RewardConfig& cfg);

// Structural fallback: alpha * s_ast + (1 - alpha) * s_dense.
double r_struct(double s_ast, double s_dense, double alpha);

// Accuracy on the branch selected by the sample category. Throws
// GoldExecutionFailed and propagates EmbedderFailure.
AccResult r_acc(const TaskSample& sample, const RewardConfig& cfg, const exec::DatabaseFixture& fixture,
                const semantic::EmbeddingProvider& embedder, const ScoreOptions& options = {});

// All components and their weighted total.
RewardBreakdown score(const TaskSample& sample, const RewardConfig& cfg, const exec::DatabaseFixture& fixture,
                      const semantic::EmbeddingProvider& embedder, const ScoreOptions& options = {});

// lambda_acc * r_acc + lambda_fmt * r_fmt + lambda_gram * r_gram + lambda_len * r_len.
double weighted_total(const RewardBreakdown& b, const RewardConfig& cfg);

}  // namespace sqlreward::reward
