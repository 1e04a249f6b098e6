#include "zsg/regret_metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zsg/error.h"

namespace zsg {
namespace {

void check_shape(const GapProfile& gaps, std::size_t rows, std::size_t cols) {
  if (gaps.rows() != rows || gaps.cols() != cols) {
    throw std::invalid_argument("count grid shape does not match the game");
  }
}

void check_bound_args(double sigma, std::int64_t horizon) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (horizon < 1) throw ConfigError("horizon T must be >= 1");
}

void check_lambda(const BoundInputs& in, double floor, const char* which) {
  check_bound_args(in.sigma, in.horizon);
  if (!(in.lambda >= floor)) {
    throw ConfigError(std::string(which) + ": lambda = " +
                      std::to_string(in.lambda) + " is below its floor " +
                      std::to_string(floor));
  }
}

// Shared shape of the elimination bounds. `log_coef` is the coefficient of
// the log term on large-gap pairs (256 for uniform, 512 for non-uniform
// exploration).
double elimination_nash_bound(const BoundInputs& in, double log_coef) {
  const double s2 = in.sigma * in.sigma;
  const auto T = static_cast<double>(in.horizon);
  const Grid<double>& star = in.gaps.delta_star();
  double total = 0.0;
  for (Pair p : in.large_gap_pairs()) {
    const double d = in.gaps.delta()[p];
    const double d2 = d * d;
    total += star[p] * (1.0 + 768.0 * s2 / d2 +
                        log_coef * s2 / d2 * std::log(d2 * T / (256.0 * s2)));
  }
  const auto small = in.small_gap_pairs();
  double worst = 0.0;
  for (std::size_t n = 0; n < small.size(); ++n) {
    const double ds = star[small[n]];
    total += ds * 512.0 * s2 / (in.lambda * in.lambda);
    worst = n == 0 ? ds : std::max(worst, ds);
  }
  return total + worst * T;
}

double large_gap_external_terms(const BoundInputs& in, double log_coef) {
  const double s2 = in.sigma * in.sigma;
  const auto T = static_cast<double>(in.horizon);
  double total = 0.0;
  for (Pair p : in.large_gap_pairs()) {
    const double d = in.gaps.delta()[p];
    total += d + 768.0 * s2 / d +
             log_coef * s2 / d * std::log(d * d * T / (256.0 * s2));
  }
  return total;
}

}  // namespace

RegretReport regret_from_counts(const GapProfile& gaps,
                                const Grid<double>& counts) {
  check_shape(gaps, counts.rows(), counts.cols());
  RegretReport out;
  out.has_nash = gaps.has_equilibrium();
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    for (std::size_t j = 0; j < counts.cols(); ++j) {
      const double n = counts(i, j);
      if (n < 0.0) throw std::invalid_argument("negative play count");
      out.max_player += gaps.delta_max()(i, j) * n;
      out.min_player += gaps.delta_min()(i, j) * n;
      if (out.has_nash) out.nash += gaps.delta_star()(i, j) * n;
    }
  }
  out.external = out.max_player + out.min_player;
  return out;
}

RegretReport regret_from_counts(const GapProfile& gaps,
                                const Grid<std::int64_t>& counts) {
  std::vector<double> as_double(counts.data().begin(), counts.data().end());
  return regret_from_counts(
      gaps, Grid<double>(counts.rows(), counts.cols(), std::move(as_double)));
}

std::vector<double> abs_regret_series(const PayoffMatrix& a, double value,
                                      const RunTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.steps.size());
  double acc = 0.0;
  for (const Step& s : trace.steps) {
    acc += std::abs(value - a.at(s.pair));
    out.push_back(acc);
  }
  return out;
}

double abs_regret_from_counts(const PayoffMatrix& a, double value,
                              const Grid<std::int64_t>& counts) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      total += std::abs(value - a(i, j)) * static_cast<double>(counts.at(i, j));
    }
  }
  return total;
}

double bound_etc(const GapProfile& gaps, double sigma, std::int64_t horizon,
                 std::int64_t k) {
  check_bound_args(sigma, horizon);
  const auto num_pairs = static_cast<std::int64_t>(gaps.rows() * gaps.cols());
  if (k < 1 || num_pairs * k > horizon) {
    throw ConfigError("ETC bound needs 1 <= N*k <= T");
  }
  const Grid<double>& star = gaps.delta_star();
  const double kd = static_cast<double>(k);
  double explore = 0.0;
  double commit = 0.0;
  for (std::size_t i = 0; i < gaps.rows(); ++i) {
    for (std::size_t j = 0; j < gaps.cols(); ++j) {
      const double d = gaps.delta()(i, j);
      explore += star(i, j);
      commit += star(i, j) * std::exp(-kd * d * d / (16.0 * sigma * sigma));
    }
  }
  return kd * explore + static_cast<double>(horizon - num_pairs * k) * commit;
}

double bound_etc_min(double delta, double sigma, std::int64_t horizon) {
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  check_bound_args(sigma, horizon);
  const double s2 = sigma * sigma;
  const double T = static_cast<double>(horizon);
  const double tuned =
      delta + 16.0 * s2 / delta *
                  (1.0 + std::max(0.0, std::log(delta * delta * T / (16.0 * s2))));
  return std::min(T * delta, tuned);
}

double ae_lambda_floor(double sigma, std::int64_t horizon) {
  check_bound_args(sigma, horizon);
  return 4.0 * sigma * std::sqrt(std::numbers::e / static_cast<double>(horizon));
}

double nue_lambda_floor(double sigma, std::int64_t horizon) {
  check_bound_args(sigma, horizon);
  return 4.0 * sigma *
         std::pow(std::numbers::e / static_cast<double>(horizon), 0.25);
}

std::vector<Pair> BoundInputs::large_gap_pairs() const {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < gaps.rows(); ++i) {
    for (std::size_t j = 0; j < gaps.cols(); ++j) {
      if (gaps.delta()(i, j) > lambda) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<Pair> BoundInputs::small_gap_pairs() const {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < gaps.rows(); ++i) {
    for (std::size_t j = 0; j < gaps.cols(); ++j) {
      const double d = gaps.delta()(i, j);
      if (d > 0.0 && d <= lambda) out.push_back({i, j});
    }
  }
  return out;
}

double bound_ae_nash(const BoundInputs& in) {
  check_lambda(in, ae_lambda_floor(in.sigma, in.horizon), "AE Nash bound");
  return elimination_nash_bound(in, 256.0);
}

double bound_ae_external(const BoundInputs& in) {
  check_lambda(in, ae_lambda_floor(in.sigma, in.horizon), "AE external bound");
  const double s2 = in.sigma * in.sigma;
  const double small = static_cast<double>(in.small_gap_pairs().size());
  return large_gap_external_terms(in, 256.0) + small * 512.0 * s2 / in.lambda +
         in.lambda * static_cast<double>(in.horizon);
}

double bound_nue_nash(const BoundInputs& in) {
  check_lambda(in, nue_lambda_floor(in.sigma, in.horizon), "NUE Nash bound");
  return elimination_nash_bound(in, 512.0);
}

double bound_nue_external(const BoundInputs& in) {
  check_lambda(in, nue_lambda_floor(in.sigma, in.horizon), "NUE external bound");
  const double s2 = in.sigma * in.sigma;
  const double small = static_cast<double>(in.small_gap_pairs().size());
  return large_gap_external_terms(in, 512.0) +
         small * (512.0 * s2 / in.lambda +
                  in.lambda * static_cast<double>(in.horizon));
}

int first_resolving_round(double delta, double sigma) {
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  int t = 0;
  while (!(std::ldexp(sigma, 2 - t) < delta / 2.0)) {
    if (++t > 4000) throw ConfigError("gap too small to resolve");
  }
  return t;
}

}  // namespace zsg
