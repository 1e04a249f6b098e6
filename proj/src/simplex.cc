#include "simplex.h"

#include <cmath>
#include <limits>
#include <string>

#include "zsg/error.h"

namespace zsg::internal {
namespace {

constexpr double kPivotEps = 1e-12;

}  // namespace

SimplexResult maximize_with_slack_basis(const Grid<double>& a,
                                        const std::vector<double>& b,
                                        const std::vector<double>& c,
                                        std::size_t max_pivots) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m || c.size() != n) {
    throw SolverError("simplex: inconsistent problem dimensions");
  }

  // Tableau columns: n structural, m slack, 1 rhs. Row m is the objective
  // row holding reduced costs (negated c initially).
  const std::size_t width = n + m + 1;
  Grid<double> tab(m + 1, width, 0.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (b[r] < 0.0) throw SolverError("simplex: negative right-hand side");
    for (std::size_t j = 0; j < n; ++j) tab(r, j) = a(r, j);
    tab(r, n + r) = 1.0;
    tab(r, width - 1) = b[r];
    basis[r] = n + r;
  }
  for (std::size_t j = 0; j < n; ++j) tab(m, j) = -c[j];

  SimplexResult result;
  while (true) {
    // Bland: lowest-index column with negative reduced cost.
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (tab(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (tab(r, enter) > kPivotEps) {
        const double ratio = tab(r, width - 1) / tab(r, enter);
        if (ratio < best_ratio - kPivotEps ||
            (ratio <= best_ratio + kPivotEps && leave < m &&
             basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave == m) throw SolverError("simplex: problem is unbounded");

    if (++result.pivots > max_pivots) {
      throw SolverError("simplex: pivot cap of " + std::to_string(max_pivots) +
                        " exceeded");
    }

    const double pivot = tab(leave, enter);
    for (std::size_t j = 0; j < width; ++j) tab(leave, j) /= pivot;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double factor = tab(r, enter);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) {
        tab(r, j) -= factor * tab(leave, j);
      }
    }
    basis[leave] = enter;
  }

  result.primal.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) result.primal[basis[r]] = tab(r, width - 1);
  }
  result.dual.resize(m);
  for (std::size_t r = 0; r < m; ++r) result.dual[r] = tab(m, n + r);
  result.objective = tab(m, width - 1);
  for (double v : result.primal) {
    if (!std::isfinite(v)) throw SolverError("simplex: non-finite solution");
  }
  return result;
}

}  // namespace zsg::internal
