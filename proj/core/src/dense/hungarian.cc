#include "sqlreward/dense/hungarian.h"

#include <cmath>
#include <limits>

#include "sqlreward/error.h"

namespace sqlreward::dense {
namespace {

// Rows <= columns. Returns row -> column.
std::vector<int> solve_wide(const CostMatrix& a, std::size_t n, std::size_t m) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based; column 0 is a virtual column holding the row being inserted.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

Assignment solve_assignment(const CostMatrix& cost) {
  Assignment out;
  const std::size_t rows = cost.size();
  if (rows == 0) return out;
  const std::size_t cols = cost[0].size();
  for (const auto& row : cost) {
    if (row.size() != cols) throw InvalidArgument("cost matrix rows differ in length");
    for (double x : row) {
      if (!std::isfinite(x)) throw InvalidArgument("cost matrix has a non-finite entry");
    }
  }
  out.row_to_col.assign(rows, -1);
  if (cols == 0) return out;

  if (rows <= cols) {
    out.row_to_col = solve_wide(cost, rows, cols);
  } else {
    CostMatrix t(cols, std::vector<double>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) t[j][i] = cost[i][j];
    }
    const std::vector<int> col_to_row = solve_wide(t, cols, rows);
    for (std::size_t j = 0; j < cols; ++j) out.row_to_col[col_to_row[j]] = static_cast<int>(j);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (out.row_to_col[i] >= 0) out.cost += cost[i][out.row_to_col[i]];
  }
  return out;
}

}  // namespace sqlreward::dense
