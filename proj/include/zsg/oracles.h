#pragma once

// Independent reference computations used to cross-check the main code path.
// They share no solver code with matrix_game or learners.

#include <cstdint>
#include <string>
#include <vector>

#include "zsg/matrix_game.h"

namespace zsg {

struct OracleReport {
  std::string quantity;
  double oracle_value = 0.0;
  double main_value = 0.0;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
  std::int64_t trials = 0;  // 0 for deterministic checks
  double stderr_value = 0.0;
  bool pass = false;
};

// Fills the deviations from the two values. `pass` is left to the caller.
OracleReport make_report(std::string quantity, double oracle_value,
                         double main_value, std::int64_t trials = 0,
                         double stderr_value = 0.0);

// Every pair (i, j) with A(i', j) <= A(i, j) <= A(i, j') for all i', j', by
// exhaustive double loop. Row-major order. Requires m * l <= 10^4.
std::vector<Pair> brute_force_saddles(const PayoffMatrix& a);

// Mixed solution of a saddle-free 2x2 game [[a, b], [c, d]]:
// p0 = (d - c) / D, q0 = (d - b) / D, value = (ad - bc) / D with
// D = a - b - c + d. Throws std::invalid_argument on a saddle or D = 0.
MixedProfile closed_form_2x2_mixed(const PayoffMatrix& a);

struct MonteCarloEstimate {
  double frequency = 0.0;
  double stderr_value = 0.0;
  double bound = 0.0;  // analytic ceiling
  std::int64_t trials = 0;

  // frequency <= bound + num_stderr * stderr.
  bool within(double num_stderr = 3.0) const {
    return frequency <= bound + num_stderr * stderr_value;
  }
};

inline constexpr std::int64_t kMinOracleTrials = 1000;

// Replays the ETC exploration phase (k plays of every pair) `trials` times and
// counts commits to a pair other than the unique pure equilibrium. The bound
// is sum over non-equilibrium pairs of exp(-k delta^2 / (16 sigma^2)).
MonteCarloEstimate mc_misidentification(const PayoffMatrix& a, double sigma,
                                        std::int64_t k, std::int64_t trials,
                                        std::uint64_t seed,
                                        unsigned threads = 1);

// Replays the exploration of elimination round t (k_t plays per pair, all
// pairs active) and counts how often `probe` passes the eps_t test. The
// ceiling is 16 sigma^2 / (delta_hat_t^2 T). Requires a unique pure
// equilibrium, probe != equilibrium, and t at or past the probe's first
// resolving round. Rounds past the regular last round are allowed as long as
// the schedule is defined.
MonteCarloEstimate mc_keep_probability(const PayoffMatrix& a, double sigma,
                                       std::int64_t horizon, int round,
                                       Pair probe, std::int64_t trials,
                                       std::uint64_t seed,
                                       unsigned threads = 1);

// Runs every applicable oracle on one instance: saddle enumeration, the 2x2
// closed form (saddle-free 2x2 only), misidentification at the tuned ETC k and
// keep probability at each suboptimal pair's first resolving round.
std::vector<OracleReport> verify_instance(const PayoffMatrix& a, double sigma,
                                          std::int64_t horizon,
                                          std::int64_t trials,
                                          std::uint64_t seed,
                                          unsigned threads = 1);

}  // namespace zsg
