// Independent Tsallis-INF (alpha = 1/2) learners for the two players, used as
// the comparison baseline.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "zsg/error.h"
#include "zsg/learners.h"

namespace zsg {
namespace {

constexpr double kNormalizationTol = 1e-10;
constexpr int kMaxNewtonIterations = 200;

std::size_t sample_index(const std::vector<double>& w, std::mt19937_64& rng) {
  const double u = std::generate_canonical<double, 53>(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  // u landed in the rounding slack above the last partial sum.
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] > 0.0) return i;
  }
  return w.size() - 1;
}

}  // namespace

std::vector<double> tsallis_weights(const std::vector<double>& cumulative_loss,
                                    double eta) {
  if (cumulative_loss.empty()) throw std::invalid_argument("no actions");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  const double min_loss =
      *std::min_element(cumulative_loss.begin(), cumulative_loss.end());

  // sum_i 4 (eta (L_i - x))^-2 is convex and increasing in x < min L. At the
  // start point the leader alone has weight 1, so Newton approaches the root
  // monotonically from the right.
  double x = min_loss - 2.0 / eta;
  std::vector<double> w(cumulative_loss.size());
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    double total = 0.0;
    double slope = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gap = eta * (cumulative_loss[i] - x);
      w[i] = 4.0 / (gap * gap);
      total += w[i];
      slope += eta * w[i] * std::sqrt(w[i]);
    }
    if (std::abs(total - 1.0) <= kNormalizationTol) break;
    x -= (total - 1.0) / slope;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

RunTrace tsallis_inf_run(Environment& env, const LearnerConfig& config) {
  if (config.horizon < 1) throw ConfigError("horizon T must be >= 1");
  const PayoffMatrix& truth = env.truth();
  double bound = truth.max_abs() + 5.0 * config.sigma;
  if (!(bound > 0.0)) bound = 1.0;

  std::mt19937_64 rng(config.seed);
  std::vector<double> row_loss(truth.rows(), 0.0);
  std::vector<double> col_loss(truth.cols(), 0.0);

  RunTrace trace;
  trace.counts = Grid<std::int64_t>(truth.rows(), truth.cols(), 0);
  trace.steps.reserve(static_cast<std::size_t>(config.horizon));
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const double eta = 2.0 / std::sqrt(static_cast<double>(t));
    const auto row_w = tsallis_weights(row_loss, eta);
    const auto col_w = tsallis_weights(col_loss, eta);
    const Pair p{sample_index(row_w, rng), sample_index(col_w, rng)};

    const double r = env.sample_payoff(p);
    trace.steps.push_back({t, p, r});
    ++trace.counts[p];
    trace.max_player_total += r;
    trace.min_player_total -= r;

    const double row_player_loss = std::clamp((bound - r) / (2.0 * bound), 0.0, 1.0);
    const double col_player_loss = std::clamp((r + bound) / (2.0 * bound), 0.0, 1.0);
    row_loss[p.row] += row_player_loss / row_w[p.row];
    col_loss[p.col] += col_player_loss / col_w[p.col];
  }
  return trace;
}

}  // namespace zsg
