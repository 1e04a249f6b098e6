#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zsg/bandit_env.h"
#include "zsg/grid.h"
#include "zsg/matrix_game.h"

namespace zsg {

enum class Algorithm { kEtc, kAe, kNue, kTsallis };

// CLI tokens: etc, ae, nue, tsallis.
Algorithm parse_algorithm(std::string_view token);
std::string_view algorithm_token(Algorithm algo);

struct LearnerConfig {
  std::int64_t horizon = 0;  // T
  double sigma = 0.0;        // subgaussian parameter assumed by the schedules
  std::int64_t k = 0;        // per-pair exploration count, ETC only
  std::uint64_t seed = 0;    // action-sampling stream, Tsallis-INF only
};

struct Step {
  std::int64_t t = 0;  // 1-based
  Pair pair;
  double r = 0.0;  // row player's payoff; the column player gets -r
};

// Bookkeeping for one elimination round.
struct RoundRecord {
  int round = 0;
  double delta_hat = 0.0;
  std::int64_t k_t = 0;
  double eps_t = 0.0;
  ActiveSet active_before;
  ActiveSet active_after;
  Grid<std::int64_t> quota;  // planned plays per pair this round
  Grid<std::int64_t> plays;  // realized plays per pair this round
  bool truncated = false;    // horizon hit before the quota was met
  bool guard_retained = false;  // elimination would have emptied S_t
  // Non-uniform exploration only: joint weights used for this round's quota,
  // and the strategies computed after elimination.
  Grid<double> weights;
  std::vector<double> p_hat;
  std::vector<double> q_hat;
};

struct RunTrace {
  std::vector<Step> steps;
  Grid<std::int64_t> counts;
  std::optional<Pair> committed;
  std::int64_t commit_step = 0;  // first step of the commit phase (1-based)
  std::vector<RoundRecord> rounds;
  double max_player_total = 0.0;
  double min_player_total = 0.0;
};

struct RoundSchedule {
  double delta_hat = 0.0;  // 2^(2 - t) sigma
  std::int64_t k_t = 0;
  double eps_t = 0.0;
  int last_round = 0;
};

// max{1, ceil(16 sigma^2 / delta^2 * ln(delta^2 T / (16 sigma^2)))}.
std::int64_t etc_exploration_k(double delta, double sigma, std::int64_t horizon);

// floor(log2(T / e) / 2) and floor(log2(T / e) / 4).
int ae_last_round(std::int64_t horizon);
int nue_last_round(std::int64_t horizon);

// Gap guess, exploration count and tolerance of round t. Throws ConfigError
// when t is past last_round.
RoundSchedule ae_schedule(int t, double sigma, std::int64_t horizon);

// Same formulas without the last-round cap; valid whenever the log argument
// 4^-t T exceeds 1. Used by the Monte Carlo oracles.
RoundSchedule round_schedule_unchecked(int t, double sigma, std::int64_t horizon);

// k_t + ceil(16 sigma^2 P_ij / delta_hat^2 * ln(delta_hat^2 T / 16 sigma^2)).
std::int64_t nue_schedule(int t, double sigma, std::int64_t horizon,
                          const Grid<double>& weights, Pair p);

// Pair to commit to after exploration: the estimated saddle point if one
// exists, otherwise the maximin/minimax pair.
Pair etc_commit_pair(const PayoffMatrix& estimate);

RunTrace etc_zsg_run(Environment& env, const LearnerConfig& config);
RunTrace ae_run(Environment& env, const LearnerConfig& config);
RunTrace nue_run(Environment& env, const LearnerConfig& config);
RunTrace tsallis_inf_run(Environment& env, const LearnerConfig& config);

RunTrace run_algorithm(Algorithm algo, Environment& env,
                       const LearnerConfig& config);

// Tsallis-INF (alpha = 1/2) sampling distribution
// w_i = 4 (eta (L_i - x))^-2 with x chosen so that sum w = 1.
std::vector<double> tsallis_weights(const std::vector<double>& cumulative_loss,
                                    double eta);

}  // namespace zsg
