#pragma once

#include <cstddef>
#include <vector>

#include "zsg/grid.h"

namespace zsg::internal {

struct SimplexResult {
  std::vector<double> primal;  // x
  std::vector<double> dual;    // y, one per constraint row
  double objective = 0.0;
  std::size_t pivots = 0;
};

// Solves  max c^T x  s.t.  A x <= b,  x >= 0  for b >= 0, so the all-slack
// basis is feasible and no phase one is needed. Uses Bland's rule; throws
// SolverError if the problem is unbounded or `max_pivots` is exceeded.
SimplexResult maximize_with_slack_basis(const Grid<double>& a,
                                        const std::vector<double>& b,
                                        const std::vector<double>& c,
                                        std::size_t max_pivots);

}  // namespace zsg::internal
