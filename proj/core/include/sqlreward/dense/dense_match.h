#pragma once

#include <cstddef>
#include <vector>

#include "sqlreward/dense/hungarian.h"
#include "sqlreward/exec/result.h"
#include "sqlreward/semantic/embedding.h"

namespace sqlreward::dense {

struct MatchedPair {
  std::size_t pred = 0;
  std::size_t gold = 0;
  double similarity = 0.0;  // in [0, 1]
};

struct AlignmentPlan {
  std::vector<MatchedPair> matched_pairs;  // sorted by pred index
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gold;
};

struct DenseWeights {
  double schema = 0.3;
  double rows = 0.2;
  double values = 0.5;

  // Throws InvalidArgument unless all weights are >= 0 and sum to 1 within
  // 1e-9.
  void validate() const;
};

struct DenseScore {
  double s_schema = 0.0;
  double s_rows = 0.0;
  double s_values = 0.0;
  double total = 0.0;
};

// Optimal header alignment from a similarity matrix (rows = pred columns,
// columns = gold columns). Cost is 1 - similarity; similarities are clamped
// to [0, 1].
AlignmentPlan align_by_similarity(const std::vector<std::vector<double>>& similarity);

// Aligns the columns of two results by the cosine of their embedded header
// names. Throws InvalidArgument when either side has no columns and
// propagates EmbedderFailure.
AlignmentPlan align_schemas(const exec::ResultTable& pred, const exec::ResultTable& gold,
                            const semantic::EmbeddingProvider& embedder);

// Sum of matched similarities over the larger column count.
double s_schema(const AlignmentPlan& plan, const exec::ResultTable& pred, const exec::ResultTable& gold);

// max(0, 1 - |log10((pred+1)/(gold+1))|).
double s_rows(std::size_t pred_count, std::size_t gold_count);

// Tolerant cell equality: numbers within 1% of the larger magnitude (exact
// when gold is 0), other values by canonical text, null only with null.
bool values_match(const exec::Cell& pred, const exec::Cell& gold);

// Cell F1 over the matched columns. Within each matched column, cells are
// paired greedily, exact matches first.
double s_values(const exec::ResultTable& pred, const exec::ResultTable& gold, const AlignmentPlan& plan);

DenseScore s_dense(const exec::ResultTable& pred, const exec::ResultTable& gold, const DenseWeights& weights,
                   const semantic::EmbeddingProvider& embedder);

// Same, with a precomputed alignment.
DenseScore s_dense(const exec::ResultTable& pred, const exec::ResultTable& gold, const DenseWeights& weights,
                   const AlignmentPlan& plan);

}  // namespace sqlreward::dense
