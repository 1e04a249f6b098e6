#pragma once

#include <cstdint>
#include <vector>

#include "zsg/grid.h"
#include "zsg/learners.h"
#include "zsg/matrix_game.h"

namespace zsg {

struct RegretReport {
  double nash = 0.0;        // R*_T = sum delta_star * n
  double external = 0.0;    // R_T = max_player + min_player
  double max_player = 0.0;  // sum delta_max * n
  double min_player = 0.0;  // sum delta_min * n
  bool has_nash = false;
  std::vector<double> abs_cumulative;
};

// Regret of realized (or across-seed averaged) play counts. Nash regret needs
// a pure equilibrium; without one `nash` is left at 0 and `has_nash` false.
RegretReport regret_from_counts(const GapProfile& gaps,
                                const Grid<double>& counts);
RegretReport regret_from_counts(const GapProfile& gaps,
                                const Grid<std::int64_t>& counts);

// Cumulative sum of |value - A(i_t, j_t)| over the trace, using the true mean
// payoff of each played pair.
std::vector<double> abs_regret_series(const PayoffMatrix& a, double value,
                                      const RunTrace& trace);
// Final value of the same series computed from play counts.
double abs_regret_from_counts(const PayoffMatrix& a, double value,
                              const Grid<std::int64_t>& counts);

// k sum delta* + (T - N k) sum delta* exp(-k delta^2 / (16 sigma^2)).
double bound_etc(const GapProfile& gaps, double sigma, std::int64_t horizon,
                 std::int64_t k);

// Two-pair closed form with the tuned k:
// min{T delta, delta + 16 sigma^2 / delta (1 + max{0, ln(delta^2 T / 16 sigma^2)})}.
double bound_etc_min(double delta, double sigma, std::int64_t horizon);

// Smallest admissible thresholds for the elimination bounds.
double ae_lambda_floor(double sigma, std::int64_t horizon);
double nue_lambda_floor(double sigma, std::int64_t horizon);

struct BoundInputs {
  GapProfile gaps;
  double sigma = 0.0;
  std::int64_t horizon = 0;
  double lambda = 0.0;

  // Pairs with delta > lambda, and with 0 < delta <= lambda. Zero-gap pairs
  // belong to neither.
  std::vector<Pair> large_gap_pairs() const;
  std::vector<Pair> small_gap_pairs() const;
};

double bound_ae_nash(const BoundInputs& in);
double bound_ae_external(const BoundInputs& in);
double bound_nue_nash(const BoundInputs& in);
double bound_nue_external(const BoundInputs& in);

// First round whose gap guess falls below delta / 2:
// min{t : 2^(2 - t) sigma < delta / 2}.
int first_resolving_round(double delta, double sigma);

}  // namespace zsg
