#include "zsg/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zsg/bandit_env.h"
#include "zsg/error.h"
#include "zsg/learners.h"
#include "zsg/parallel.h"
#include "zsg/regret_metrics.h"

namespace zsg {
namespace {

constexpr std::size_t kMaxBruteForcePairs = 10000;

MonteCarloEstimate bernoulli_estimate(const std::vector<char>& hits, double bound) {
  MonteCarloEstimate out;
  out.trials = static_cast<std::int64_t>(hits.size());
  std::int64_t count = 0;
  for (char h : hits) count += h;
  const auto n = static_cast<double>(out.trials);
  out.frequency = static_cast<double>(count) / n;
  out.stderr_value = std::sqrt(out.frequency * (1.0 - out.frequency) / n);
  out.bound = bound;
  return out;
}

void check_trials(std::int64_t trials) {
  if (trials < kMinOracleTrials) {
    throw ConfigError("Monte Carlo oracles need at least " +
                      std::to_string(kMinOracleTrials) + " trials");
  }
}

Pair unique_equilibrium_of(const PayoffMatrix& a) {
  const auto saddles = brute_force_saddles(a);
  if (saddles.size() != 1) {
    throw ConfigError("instance must have a unique pure equilibrium, found " +
                      std::to_string(saddles.size()));
  }
  return saddles.front();
}

// Samples k plays of every pair in row-major sweeps and returns the estimate.
PayoffMatrix explore_uniformly(Environment& env, std::int64_t k) {
  const PayoffMatrix& truth = env.truth();
  EmpiricalEstimate est(truth.rows(), truth.cols());
  for (std::int64_t s = 0; s < k; ++s) {
    for (std::size_t i = 0; i < truth.rows(); ++i) {
      for (std::size_t j = 0; j < truth.cols(); ++j) {
        est.record({i, j}, env.sample_payoff({i, j}));
      }
    }
  }
  return est.mean();
}

}  // namespace

OracleReport make_report(std::string quantity, double oracle_value,
                         double main_value, std::int64_t trials,
                         double stderr_value) {
  OracleReport r;
  r.quantity = std::move(quantity);
  r.oracle_value = oracle_value;
  r.main_value = main_value;
  r.abs_deviation = std::abs(oracle_value - main_value);
  const double scale = std::max(std::abs(oracle_value), std::abs(main_value));
  r.rel_deviation = scale > 0.0 ? r.abs_deviation / scale : 0.0;
  r.trials = trials;
  r.stderr_value = stderr_value;
  return r;
}

std::vector<Pair> brute_force_saddles(const PayoffMatrix& a) {
  if (a.rows() * a.cols() > kMaxBruteForcePairs) {
    throw ConfigError("brute force enumeration is limited to 10^4 pairs");
  }
  std::vector<Pair> out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      bool saddle = true;
      for (std::size_t r = 0; r < a.rows() && saddle; ++r) {
        saddle = a(r, j) <= a(i, j);
      }
      for (std::size_t c = 0; c < a.cols() && saddle; ++c) {
        saddle = a(i, j) <= a(i, c);
      }
      if (saddle) out.push_back({i, j});
    }
  }
  return out;
}

MixedProfile closed_form_2x2_mixed(const PayoffMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw std::invalid_argument("closed form needs a 2x2 game");
  }
  if (!brute_force_saddles(m).empty()) {
    throw std::invalid_argument("closed form needs a game without a saddle");
  }
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double denom = a - b - c + d;
  if (denom == 0.0) throw std::invalid_argument("degenerate 2x2 game");
  MixedProfile out;
  const double p0 = (d - c) / denom;
  const double q0 = (d - b) / denom;
  out.p = {p0, 1.0 - p0};
  out.q = {q0, 1.0 - q0};
  out.value = (a * d - b * c) / denom;
  return out;
}

MonteCarloEstimate mc_misidentification(const PayoffMatrix& a, double sigma,
                                        std::int64_t k, std::int64_t trials,
                                        std::uint64_t seed, unsigned threads) {
  check_trials(trials);
  if (k < 1) throw ConfigError("k must be >= 1");
  const NoiseModel noise = NoiseModel::gaussian(sigma);
  const Pair ne = unique_equilibrium_of(a);
  const GapProfile gaps = compute_gaps(a);

  double bound = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (Pair{i, j} == ne) continue;
      const double d = gaps.delta()(i, j);
      // exp(-inf) for sigma = 0: a noiseless exploration never errs.
      bound += std::exp(-static_cast<double>(k) * d * d / (16.0 * sigma * sigma));
    }
  }

  const auto hits = parallel_map(
      static_cast<std::size_t>(trials), threads, [&](std::size_t n) -> char {
        Environment env(a, noise, derive_seed(seed, n));
        return etc_commit_pair(explore_uniformly(env, k)) != ne;
      });
  return bernoulli_estimate(hits, bound);
}

MonteCarloEstimate mc_keep_probability(const PayoffMatrix& a, double sigma,
                                       std::int64_t horizon, int round,
                                       Pair probe, std::int64_t trials,
                                       std::uint64_t seed, unsigned threads) {
  check_trials(trials);
  (void)a.at(probe);
  const Pair ne = unique_equilibrium_of(a);
  if (probe == ne) {
    throw ConfigError("probe " + to_string(probe) +
                      " is the equilibrium; the ceiling covers suboptimal pairs");
  }
  const double delta = compute_gaps(a).delta()[probe];
  const int first = first_resolving_round(delta, sigma);
  if (round < first) {
    throw ConfigError("round " + std::to_string(round) +
                      " precedes the probe's first resolving round " +
                      std::to_string(first));
  }
  const RoundSchedule s = round_schedule_unchecked(round, sigma, horizon);
  const double ceiling = 16.0 * sigma * sigma /
                         (s.delta_hat * s.delta_hat * static_cast<double>(horizon));

  const NoiseModel noise = NoiseModel::gaussian(sigma);
  const auto hits = parallel_map(
      static_cast<std::size_t>(trials), threads, [&](std::size_t n) -> char {
        Environment env(a, noise, derive_seed(seed, n));
        return eps_ne_satisfied(explore_uniformly(env, s.k_t), probe, s.eps_t);
      });
  return bernoulli_estimate(hits, ceiling);
}

std::vector<OracleReport> verify_instance(const PayoffMatrix& a, double sigma,
                                          std::int64_t horizon,
                                          std::int64_t trials,
                                          std::uint64_t seed, unsigned threads) {
  std::vector<OracleReport> out;

  const auto saddles = brute_force_saddles(a);
  const PureNeSearch search = find_pure_ne(a);
  {
    OracleReport r = make_report("num_saddles", static_cast<double>(saddles.size()),
                                 static_cast<double>(search.num_saddles));
    const bool same_first =
        saddles.empty() ? !search.equilibrium.has_value()
                        : search.equilibrium && search.equilibrium->pair == saddles.front();
    r.pass = r.abs_deviation == 0.0 && same_first;
    out.push_back(r);
  }

  if (a.rows() == 2 && a.cols() == 2 && saddles.empty()) {
    const MixedProfile closed = closed_form_2x2_mixed(a);
    const MixedProfile lp = solve_minimax(a);
    OracleReport r = make_report("minimax_value", closed.value, lp.value);
    r.pass = r.abs_deviation <= 1e-9 * std::max(1.0, a.max_abs());
    out.push_back(r);
  }

  if (saddles.size() != 1 || !(sigma > 0.0)) return out;
  const Pair ne = saddles.front();
  const GapProfile gaps = compute_gaps(a);

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (Pair{i, j} != ne) min_gap = std::min(min_gap, gaps.delta()(i, j));
    }
  }
  if (std::isfinite(min_gap) && min_gap > 0.0) {
    const std::int64_t k = etc_exploration_k(min_gap, sigma, horizon);
    const auto mc = mc_misidentification(a, sigma, k, trials, seed, threads);
    OracleReport r = make_report("misidentification_k" + std::to_string(k),
                                 mc.frequency, mc.bound, mc.trials, mc.stderr_value);
    r.pass = mc.within();
    out.push_back(r);
  }

  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Pair p{i, j};
      const double d = gaps.delta()[p];
      if (p == ne || !(d > 0.0)) continue;
      const int t = first_resolving_round(d, sigma);
      // The schedule is undefined once 4^t >= T.
      if (!(std::ldexp(1.0, 2 * t) < static_cast<double>(horizon))) continue;
      const auto mc = mc_keep_probability(a, sigma, horizon, t, p, trials,
                                          derive_seed(seed, i * a.cols() + j + 1),
                                          threads);
      OracleReport r = make_report("keep_probability_" + to_string(p) + "_round" +
                                       std::to_string(t),
                                   mc.frequency, mc.bound, mc.trials, mc.stderr_value);
      r.pass = mc.within();
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace zsg
