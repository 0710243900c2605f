#include "sqlreward/dense/dense_match.h"

#include <algorithm>
#include <cmath>

#include "sqlreward/error.h"

namespace sqlreward::dense {

using exec::Cell;
using exec::ResultTable;

void DenseWeights::validate() const {
  if (schema < 0 || rows < 0 || values < 0) throw InvalidArgument("dense weights must be non-negative");
  if (std::fabs(schema + rows + values - 1.0) > 1e-9) throw InvalidArgument("dense weights must sum to 1");
}

AlignmentPlan align_by_similarity(const std::vector<std::vector<double>>& similarity) {
  const std::size_t m = similarity.size();
  const std::size_t n = m ? similarity[0].size() : 0;
  CostMatrix cost(m, std::vector<double>(n));
  std::vector<std::vector<double>> sim(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i) {
    if (similarity[i].size() != n) throw InvalidArgument("similarity matrix rows differ in length");
    for (std::size_t j = 0; j < n; ++j) {
      sim[i][j] = std::clamp(similarity[i][j], 0.0, 1.0);
      cost[i][j] = 1.0 - sim[i][j];
    }
  }
  const Assignment a = solve_assignment(cost);

  AlignmentPlan plan;
  std::vector<char> gold_used(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const int j = a.row_to_col[i];
    if (j < 0) {
      plan.unmatched_pred.push_back(i);
    } else {
      plan.matched_pairs.push_back({i, static_cast<std::size_t>(j), sim[i][j]});
      gold_used[j] = 1;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!gold_used[j]) plan.unmatched_gold.push_back(j);
  }
  return plan;
}

AlignmentPlan align_schemas(const ResultTable& pred, const ResultTable& gold,
                            const semantic::EmbeddingProvider& embedder) {
  if (pred.column_count() == 0 || gold.column_count() == 0) {
    throw InvalidArgument("cannot align a result without columns");
  }
  std::vector<std::string> names;
  for (const auto* t : {&pred, &gold}) {
    for (const std::string& h : t->headers) {
      names.push_back(semantic::trim(h).empty() ? "_" : h);
    }
  }
  const std::vector<semantic::EmbeddingVector> v = semantic::embed_all(embedder, names);
  const std::size_t m = pred.column_count();
  std::vector<std::vector<double>> sim(m, std::vector<double>(gold.column_count()));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < gold.column_count(); ++j) {
      sim[i][j] = std::max(0.0, semantic::cosine(v[i], v[m + j]));
    }
  }
  return align_by_similarity(sim);
}

double s_schema(const AlignmentPlan& plan, const ResultTable& pred, const ResultTable& gold) {
  const std::size_t denom = std::max(pred.column_count(), gold.column_count());
  if (denom == 0) return 1.0;
  double sum = 0.0;
  for (const MatchedPair& p : plan.matched_pairs) sum += p.similarity;
  return sum / static_cast<double>(denom);
}

double s_rows(std::size_t pred_count, std::size_t gold_count) {
  const double diff = std::log10(static_cast<double>(pred_count) + 1.0) -
                      std::log10(static_cast<double>(gold_count) + 1.0);
  return std::max(0.0, 1.0 - std::fabs(diff));
}

bool values_match(const Cell& pred, const Cell& gold) {
  if (pred.is_null() || gold.is_null()) return pred.is_null() && gold.is_null();
  if (pred.is_numeric() && gold.is_numeric()) {
    const double a = pred.as_real();
    const double b = gold.as_real();
    if (b == 0.0) return a == 0.0;
    return std::fabs(a - b) <= 0.01 * std::max(std::fabs(a), std::fabs(b));
  }
  return pred.to_string() == gold.to_string();
}

namespace {

// Number of cells paired between two columns: exact matches first, then a
// greedy pass under values_match over what is left, both in sorted order.
std::size_t match_column(std::vector<Cell> pred, std::vector<Cell> gold) {
  auto less = [](const Cell& a, const Cell& b) {
    if (a.is_null() != b.is_null()) return a.is_null();
    if (a.is_numeric() != b.is_numeric()) return a.is_numeric();
    if (a.is_numeric()) return a.as_real() < b.as_real();
    return a.to_string() < b.to_string();
  };
  std::sort(pred.begin(), pred.end(), less);
  std::sort(gold.begin(), gold.end(), less);

  std::size_t matched = 0;
  std::vector<char> pred_used(pred.size(), 0), gold_used(gold.size(), 0);
  // Exact pass: merge the two sorted lists.
  for (std::size_t i = 0, j = 0; i < pred.size() && j < gold.size();) {
    if (exec::cells_equal(pred[i], gold[j])) {
      pred_used[i++] = 1;
      gold_used[j++] = 1;
      ++matched;
    } else if (less(pred[i], gold[j])) {
      ++i;
    } else {
      ++j;
    }
  }
  // Tolerance pass.
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred_used[i]) continue;
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (gold_used[j] || !values_match(pred[i], gold[j])) continue;
      pred_used[i] = 1;
      gold_used[j] = 1;
      ++matched;
      break;
    }
  }
  return matched;
}

std::vector<Cell> column(const ResultTable& t, std::size_t c) {
  std::vector<Cell> out;
  out.reserve(t.row_count());
  for (const auto& row : t.rows) out.push_back(row[c]);
  return out;
}

}  // namespace

double s_values(const ResultTable& pred, const ResultTable& gold, const AlignmentPlan& plan) {
  std::size_t matched = 0;
  const std::size_t n_pred = plan.matched_pairs.size() * pred.row_count();
  const std::size_t n_gold = plan.matched_pairs.size() * gold.row_count();
  if (n_pred + n_gold == 0) return 1.0;
  for (const MatchedPair& p : plan.matched_pairs) {
    matched += match_column(column(pred, p.pred), column(gold, p.gold));
  }
  return 2.0 * static_cast<double>(matched) / static_cast<double>(n_pred + n_gold);
}

DenseScore s_dense(const ResultTable& pred, const ResultTable& gold, const DenseWeights& weights,
                   const AlignmentPlan& plan) {
  weights.validate();
  DenseScore s;
  s.s_schema = s_schema(plan, pred, gold);
  s.s_rows = s_rows(pred.row_count(), gold.row_count());
  s.s_values = s_values(pred, gold, plan);
  s.total = weights.schema * s.s_schema + weights.rows * s.s_rows + weights.values * s.s_values;
  s.total = std::clamp(s.total, 0.0, 1.0);
  return s;
}

DenseScore s_dense(const ResultTable& pred, const ResultTable& gold, const DenseWeights& weights,
                   const semantic::EmbeddingProvider& embedder) {
  weights.validate();
  return s_dense(pred, gold, weights, align_schemas(pred, gold, embedder));
}

}  // namespace sqlreward::dense
