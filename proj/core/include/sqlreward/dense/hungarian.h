#pragma once

#include <cstddef>
#include <vector>

namespace sqlreward::dense {

using CostMatrix = std::vector<std::vector<double>>;

struct Assignment {
  // row_to_col[i] is the column assigned to row i, or -1 when the matrix has
  // more rows than columns and row i is left out.
  std::vector<int> row_to_col;
  // Sum of the chosen entries, accumulated in row order.
  double cost = 0.0;
};

// Minimum-cost assignment of min(rows, cols) pairs for a rectangular matrix
// (Kuhn-Munkres with potentials, O(n^2 m)). Rows must all have the same
// length; an empty matrix gives an empty assignment. Throws
// InvalidArgument on ragged or non-finite input.
Assignment solve_assignment(const CostMatrix& cost);

}  // namespace sqlreward::dense
