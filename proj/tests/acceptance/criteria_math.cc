#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "acceptance.h"
#include "sqlreward/dense/hungarian.h"
#include "sqlreward/grpo/grpo.h"

namespace sqlreward::acceptance {
namespace {

// Minimum over every injective row-to-column map (or column-to-row map when
// there are more rows than columns).
double brute_min_cost(const dense::CostMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  if (rows == 0 || cols == 0) return 0.0;
  const bool by_row = rows <= cols;
  const std::size_t small = by_row ? rows : cols;
  std::vector<std::size_t> perm(by_row ? cols : rows);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < small; ++i) sum += by_row ? m[i][perm[i]] : m[perm[i]][i];
    best = std::min(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

Outcome c4_hungarian() {
  Outcome out;
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> value(-50, 99);
  int square = 0, rectangular = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t rows = static_cast<std::size_t>(dim(rng));
    const std::size_t cols = t % 3 == 0 ? rows : static_cast<std::size_t>(dim(rng));
    // Every other matrix uses quarter steps; sums stay exact either way.
    const double step = t % 2 ? 0.25 : 1.0;
    dense::CostMatrix m(rows, std::vector<double>(cols));
    for (auto& row : m) {
      for (double& x : row) x = value(rng) * step;
    }
    const dense::Assignment a = dense::solve_assignment(m);
    const double best = brute_min_cost(m);
    (rows == cols ? square : rectangular)++;
    if (a.cost != best) {
      out.fail("matrix " + std::to_string(t) + " (" + std::to_string(rows) + "x" + std::to_string(cols) +
               "): cost " + num(a.cost) + ", brute force " + num(best));
      continue;
    }
    // The reported assignment must be a valid matching of the reported cost.
    std::vector<bool> used(cols, false);
    std::size_t assigned = 0;
    double sum = 0.0;
    bool valid = a.row_to_col.size() == rows;
    for (std::size_t i = 0; valid && i < rows; ++i) {
      const int c = a.row_to_col[i];
      if (c < 0) continue;
      if (static_cast<std::size_t>(c) >= cols || used[static_cast<std::size_t>(c)]) {
        valid = false;
        break;
      }
      used[static_cast<std::size_t>(c)] = true;
      sum += m[i][static_cast<std::size_t>(c)];
      ++assigned;
    }
    if (!valid || assigned != std::min(rows, cols) || sum != a.cost) {
      out.fail("matrix " + std::to_string(t) + ": assignment is not a valid matching of its cost");
    }
  }
  out.detail = "1000 matrices (" + std::to_string(square) + " square, " + std::to_string(rectangular) +
               " rectangular, up to 6x6) equal the permutation minimum exactly";
  return out;
}

Outcome c6_grpo_math() {
  Outcome out;
  constexpr double kTol = 1e-9;
  const grpo::GrpoParams params;
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> size(2, 32);
  std::uniform_real_distribution<double> reward(-5.0, 5.0);
  const std::vector<double> discrete = {-0.8, 0.0, 1.0, 1.9, 2.5, 3.4};

  int normalized = 0, floored = 0;
  for (int g = 0; g < 1000; ++g) {
    std::vector<double> r(static_cast<std::size_t>(size(rng)));
    for (double& x : r) {
      x = g % 2 ? reward(rng) : discrete[std::uniform_int_distribution<std::size_t>(0, discrete.size() - 1)(rng)];
    }
    const std::vector<double> a = grpo::advantages(r, params);
    if (population_std(r) >= params.sigma_floor) {
      ++normalized;
      if (!(std::fabs(mean_of(a)) <= kTol)) out.fail("group " + std::to_string(g) + ": mean " + num(mean_of(a)));
      if (!(std::fabs(population_std(a) - 1.0) <= kTol)) {
        out.fail("group " + std::to_string(g) + ": std " + num(population_std(a)));
      }
    } else {
      ++floored;
      for (double x : a) {
        if (x != 0.0) out.fail("group " + std::to_string(g) + ": degenerate group gave nonzero advantage");
      }
    }
  }

  int invariance = 0;
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  for (int g = 0; g < 1000; ++g) {
    std::vector<double> r(static_cast<std::size_t>(size(rng)));
    for (double& x : r) x = reward(rng);
    const double b = shift(rng);
    const double s = std::pow(10.0, log_scale(rng));
    std::vector<double> moved(r);
    for (double& x : moved) x = s * x + b;
    const auto a = grpo::advantages(r, params);
    const auto am = grpo::advantages(moved, params);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(std::fabs(a[i] - am[i]) <= kTol)) {
        out.fail("group " + std::to_string(g) + ": advantage moved by " + num(am[i] - a[i]) + " under shift/scale");
        break;
      }
    }
    ++invariance;
  }

  const double up = grpo::surrogate_term(1.5, 1.0, params);
  const double down = grpo::surrogate_term(0.5, -1.0, params);
  if (up != 1.2) out.fail("surrogate(1.5, A=1) = " + num(up));
  if (down != -0.8) out.fail("surrogate(0.5, A=-1) = " + num(down));

  // Group of identical rewards stays at zero.
  for (double x : grpo::advantages(std::vector<double>(16, 3.4), params)) {
    if (x != 0.0) out.fail("uniform group gave nonzero advantage");
  }

  out.detail = std::to_string(normalized) + " groups mean 0 / std 1 within 1e-9 (" + std::to_string(floored) +
               " below floor), " + std::to_string(invariance) + " shift/scale checks, clip 1.2 and -0.8 exact";
  return out;
}

}  // namespace sqlreward::acceptance
