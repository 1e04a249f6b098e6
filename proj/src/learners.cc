#include "zsg/learners.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "zsg/error.h"

namespace zsg {
namespace {

// Drives one run: plays pairs against the environment and keeps the estimate
// and the trace in sync.
class Driver {
 public:
  Driver(Environment& env, std::int64_t horizon)
      : env_(env),
        horizon_(horizon),
        estimate_(env.truth().rows(), env.truth().cols()) {
    trace_.counts = Grid<std::int64_t>(env.truth().rows(), env.truth().cols(), 0);
    trace_.steps.reserve(static_cast<std::size_t>(horizon));
  }

  bool exhausted() const { return t_ >= horizon_; }
  std::int64_t remaining() const { return horizon_ - t_; }

  void play(Pair p) {
    const double r = env_.sample_payoff(p);
    ++t_;
    estimate_.record(p, r);
    trace_.steps.push_back({t_, p, r});
    ++trace_.counts[p];
    trace_.max_player_total += r;
    trace_.min_player_total -= r;
  }

  void commit(Pair p) {
    trace_.committed = p;
    trace_.commit_step = t_ + 1;
    while (!exhausted()) play(p);
  }

  // Round-robin sweeps over `order` until every quota is met. Returns false
  // if the horizon cut the sweeps short.
  bool explore(const std::vector<Pair>& order, const Grid<std::int64_t>& quota,
               Grid<std::int64_t>& plays) {
    Grid<std::int64_t> left = quota;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (Pair p : order) {
        if (left[p] <= 0) continue;
        if (exhausted()) return false;
        play(p);
        --left[p];
        ++plays[p];
        progressed = true;
      }
    }
    return true;
  }

  const EmpiricalEstimate& estimate() const { return estimate_; }
  RunTrace& trace() { return trace_; }
  RunTrace take() { return std::move(trace_); }

 private:
  Environment& env_;
  std::int64_t horizon_;
  std::int64_t t_ = 0;
  EmpiricalEstimate estimate_;
  RunTrace trace_;
};

void validate_horizon(std::int64_t horizon) {
  if (horizon < 1) throw ConfigError("horizon T must be >= 1");
}

void validate_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("sigma must be finite and > 0");
  }
}

double log_argument(double delta_hat, double sigma, std::int64_t horizon) {
  return delta_hat * delta_hat * static_cast<double>(horizon) /
         (16.0 * sigma * sigma);
}

int last_round_for(std::int64_t horizon, double divisor) {
  return static_cast<int>(std::floor(
      std::log2(static_cast<double>(horizon) / std::numbers::e) / divisor));
}

// Every cell of the surviving sub-game must have been observed before it is
// used in a decision.
void require_explored(const EmpiricalEstimate& est, const ActiveSet& active) {
  for (std::size_t i : active.active_rows()) {
    for (std::size_t j : active.active_cols()) {
      if (est.count({i, j}) == 0) {
        throw std::logic_error("decision reads unexplored cell " +
                               to_string(Pair{i, j}));
      }
    }
  }
}

Pair max_margin_pair(const PayoffMatrix& estimate, const ActiveSet& active) {
  const auto members = active.pairs();
  Pair best = members.front();
  double best_margin = ne_margin(estimate, best, active);
  for (Pair p : members) {
    const double margin = ne_margin(estimate, p, active);
    if (margin > best_margin) {
      best = p;
      best_margin = margin;
    }
  }
  return best;
}

// Keeps the pairs passing the eps-NE test against the surviving rows and
// columns; never returns an empty set.
ActiveSet eliminate(const PayoffMatrix& estimate, const ActiveSet& active,
                    double eps, bool& guard_retained) {
  ActiveSet next(active.rows(), active.cols(), false);
  for (Pair p : active.pairs()) {
    if (eps_ne_satisfied(estimate, p, eps, active)) next.insert(p);
  }
  guard_retained = next.empty();
  if (guard_retained) next.insert(max_margin_pair(estimate, active));
  return next;
}

Grid<double> uniform_weights(const ActiveSet& active) {
  Grid<double> w(active.rows(), active.cols(), 0.0);
  const double share = 1.0 / static_cast<double>(active.size());
  for (Pair p : active.pairs()) w[p] = share;
  return w;
}

// Minimax strategies on the surviving sub-game, lifted to full-length vectors,
// and their product renormalized over the surviving pairs.
void update_weights(const PayoffMatrix& estimate, const ActiveSet& active,
                    RoundRecord& record, Grid<double>& weights) {
  const auto rows = active.active_rows();
  const auto cols = active.active_cols();
  const MixedProfile sub = solve_minimax(estimate.restricted(rows, cols));
  record.p_hat.assign(active.rows(), 0.0);
  record.q_hat.assign(active.cols(), 0.0);
  for (std::size_t a = 0; a < rows.size(); ++a) record.p_hat[rows[a]] = sub.p[a];
  for (std::size_t b = 0; b < cols.size(); ++b) record.q_hat[cols[b]] = sub.q[b];

  const Grid<double> joint = joint_probabilities(record.p_hat, record.q_hat);
  double total = 0.0;
  for (Pair p : active.pairs()) total += joint[p];
  if (total <= 1e-12) {
    weights = uniform_weights(active);
    return;
  }
  weights = Grid<double>(active.rows(), active.cols(), 0.0);
  for (Pair p : active.pairs()) weights[p] = joint[p] / total;
}

enum class Exploration { kUniform, kNonUniform };

RunTrace run_elimination(Environment& env, const LearnerConfig& config,
                         Exploration mode) {
  validate_horizon(config.horizon);
  validate_sigma(config.sigma);
  const PayoffMatrix& truth = env.truth();
  const auto num_pairs = static_cast<std::int64_t>(truth.num_pairs());
  if (config.horizon < num_pairs) {
    throw ConfigError("horizon T must be at least the number of action pairs");
  }
  const int last = mode == Exploration::kUniform ? ae_last_round(config.horizon)
                                                 : nue_last_round(config.horizon);
  if (num_pairs > 1 && last < 0) {
    throw ConfigError("horizon T is too short for the elimination schedule");
  }

  Driver driver(env, config.horizon);
  ActiveSet active(truth.rows(), truth.cols());
  Grid<double> weights = uniform_weights(active);

  for (int t = 0; t <= last && !driver.exhausted(); ++t) {
    if (active.size() == 1) break;

    const RoundSchedule sched =
        round_schedule_unchecked(t, config.sigma, config.horizon);
    RoundRecord record;
    record.round = t;
    record.delta_hat = sched.delta_hat;
    record.k_t = sched.k_t;
    record.eps_t = sched.eps_t;
    record.active_before = active;
    record.quota = Grid<std::int64_t>(truth.rows(), truth.cols(), 0);
    record.plays = Grid<std::int64_t>(truth.rows(), truth.cols(), 0);
    const auto order = active.pairs();
    for (Pair p : order) {
      record.quota[p] = mode == Exploration::kUniform
                            ? sched.k_t
                            : nue_schedule(t, config.sigma, config.horizon,
                                           weights, p);
    }
    if (mode == Exploration::kNonUniform) record.weights = weights;

    if (!driver.explore(order, record.quota, record.plays)) {
      record.truncated = true;
      record.active_after = active;
      driver.trace().rounds.push_back(std::move(record));
      break;
    }

    const PayoffMatrix& estimate = driver.estimate().mean();
    require_explored(driver.estimate(), active);
    active = eliminate(estimate, active, sched.eps_t, record.guard_retained);
    if (mode == Exploration::kNonUniform) {
      update_weights(estimate, active, record, weights);
    }
    record.active_after = active;
    driver.trace().rounds.push_back(std::move(record));
  }

  if (!driver.exhausted()) {
    Pair target = active.pairs().front();
    if (active.size() > 1) {
      require_explored(driver.estimate(), active);
      target = max_margin_pair(driver.estimate().mean(), active);
    }
    driver.commit(target);
  }
  return driver.take();
}

}  // namespace

Algorithm parse_algorithm(std::string_view token) {
  if (token == "etc") return Algorithm::kEtc;
  if (token == "ae") return Algorithm::kAe;
  if (token == "nue") return Algorithm::kNue;
  if (token == "tsallis") return Algorithm::kTsallis;
  throw ConfigError("unknown algorithm '" + std::string(token) +
                    "' (expected etc, ae, nue or tsallis)");
}

std::string_view algorithm_token(Algorithm algo) {
  switch (algo) {
    case Algorithm::kEtc: return "etc";
    case Algorithm::kAe: return "ae";
    case Algorithm::kNue: return "nue";
    case Algorithm::kTsallis: return "tsallis";
  }
  return "unknown";
}

std::int64_t etc_exploration_k(double delta, double sigma, std::int64_t horizon) {
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  validate_sigma(sigma);
  validate_horizon(horizon);
  const double scale = 16.0 * sigma * sigma / (delta * delta);
  const double x = scale * std::log(delta * delta * static_cast<double>(horizon) /
                                    (16.0 * sigma * sigma));
  if (!(x > 1.0)) return 1;
  return static_cast<std::int64_t>(std::ceil(x));
}

int ae_last_round(std::int64_t horizon) { return last_round_for(horizon, 2.0); }
int nue_last_round(std::int64_t horizon) { return last_round_for(horizon, 4.0); }

RoundSchedule round_schedule_unchecked(int t, double sigma, std::int64_t horizon) {
  validate_sigma(sigma);
  validate_horizon(horizon);
  if (t < 0) throw ConfigError("round index must be >= 0");
  RoundSchedule s;
  s.delta_hat = std::ldexp(sigma, 2 - t);
  const double log_term = std::log(log_argument(s.delta_hat, sigma, horizon));
  if (!(log_term > 0.0)) {
    throw ConfigError("round " + std::to_string(t) +
                      " has a non-positive exploration log term for T = " +
                      std::to_string(horizon));
  }
  s.k_t = static_cast<std::int64_t>(std::ceil(
      16.0 * sigma * sigma / (s.delta_hat * s.delta_hat) * log_term));
  s.eps_t = std::sqrt(4.0 * sigma * sigma / static_cast<double>(s.k_t) * log_term);
  s.last_round = ae_last_round(horizon);
  return s;
}

RoundSchedule ae_schedule(int t, double sigma, std::int64_t horizon) {
  validate_horizon(horizon);
  const int last = ae_last_round(horizon);
  if (t < 0 || t > last) {
    throw ConfigError("round " + std::to_string(t) + " outside 0.." +
                      std::to_string(last) + " for T = " + std::to_string(horizon));
  }
  return round_schedule_unchecked(t, sigma, horizon);
}

std::int64_t nue_schedule(int t, double sigma, std::int64_t horizon,
                          const Grid<double>& weights, Pair p) {
  validate_horizon(horizon);
  const int last = nue_last_round(horizon);
  if (t < 0 || t > last) {
    throw ConfigError("round " + std::to_string(t) + " outside 0.." +
                      std::to_string(last) + " for T = " + std::to_string(horizon));
  }
  const double w = weights.at(p.row, p.col);
  if (!(w >= 0.0 && w <= 1.0)) {
    throw ConfigError("joint probability must lie in [0, 1]");
  }
  const RoundSchedule base = round_schedule_unchecked(t, sigma, horizon);
  const double log_term = std::log(log_argument(base.delta_hat, sigma, horizon));
  const double extra = 16.0 * sigma * sigma * w /
                       (base.delta_hat * base.delta_hat) * log_term;
  return base.k_t + static_cast<std::int64_t>(std::ceil(extra));
}

Pair etc_commit_pair(const PayoffMatrix& estimate) {
  const PureNeSearch ne = find_pure_ne(estimate);
  if (ne.equilibrium) return ne.equilibrium->pair;
  return maximin_pair(estimate);
}

RunTrace etc_zsg_run(Environment& env, const LearnerConfig& config) {
  validate_horizon(config.horizon);
  const PayoffMatrix& truth = env.truth();
  const auto num_pairs = static_cast<std::int64_t>(truth.num_pairs());
  if (config.k < 1) throw ConfigError("ETC needs k >= 1");
  if (num_pairs * config.k > config.horizon) {
    throw ConfigError("ETC needs N*k <= T (N = " + std::to_string(num_pairs) +
                      ", k = " + std::to_string(config.k) +
                      ", T = " + std::to_string(config.horizon) + ")");
  }

  Driver driver(env, config.horizon);
  const auto order = ActiveSet(truth.rows(), truth.cols()).pairs();
  for (std::int64_t sweep = 0; sweep < config.k; ++sweep) {
    for (Pair p : order) driver.play(p);
  }
  const Pair target = etc_commit_pair(driver.estimate().mean());
  if (driver.exhausted()) {
    driver.trace().committed = target;
    driver.trace().commit_step = config.horizon + 1;
  } else {
    driver.commit(target);
  }
  return driver.take();
}

RunTrace ae_run(Environment& env, const LearnerConfig& config) {
  return run_elimination(env, config, Exploration::kUniform);
}

RunTrace nue_run(Environment& env, const LearnerConfig& config) {
  return run_elimination(env, config, Exploration::kNonUniform);
}

RunTrace run_algorithm(Algorithm algo, Environment& env,
                       const LearnerConfig& config) {
  switch (algo) {
    case Algorithm::kEtc: return etc_zsg_run(env, config);
    case Algorithm::kAe: return ae_run(env, config);
    case Algorithm::kNue: return nue_run(env, config);
    case Algorithm::kTsallis: return tsallis_inf_run(env, config);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace zsg
