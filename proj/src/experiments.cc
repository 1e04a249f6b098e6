#include "zsg/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "zsg/error.h"
#include "zsg/parallel.h"
#include "zsg/regret_metrics.h"

namespace zsg {
namespace {

// Sub-stream tags under a per-run seed.
constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kTsallisStream = 2;
constexpr std::uint64_t kDrawStream = 3;

struct MeanStderr {
  double mean = 0.0;
  double stderr_value = 0.0;
};

MeanStderr summarize(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stderr_value = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

std::vector<std::int64_t> sample_times(std::int64_t horizon, std::int64_t stride) {
  std::vector<std::int64_t> out;
  for (std::int64_t t = stride; t <= horizon; t += stride) out.push_back(t);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("ZSG_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
      throw ConfigError(std::string("ZSG_THREADS must be a positive integer, got '") +
                        env + "'");
    }
    return static_cast<unsigned>(v);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

GeneratedInstance generate_instance(const InstanceSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw ConfigError("dimensions must be >= 1");
  if (!(spec.entry_sigma >= 0.0) || !std::isfinite(spec.entry_sigma)) {
    throw ConfigError("entry_sigma must be finite and >= 0");
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw ConfigError("noise_sigma must be finite and >= 0");
  }
  if (spec.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> entries(spec.rows * spec.cols);
  for (std::int64_t attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    for (double& e : entries) e = spec.entry_sigma * normal(rng);
    PayoffMatrix m(spec.rows, spec.cols, entries);
    GapProfile gaps = compute_gaps(m);
    if (!spec.require_unique_pure_ne || gaps.unique_equilibrium()) {
      return {std::move(m), std::move(gaps), attempt};
    }
  }
  throw std::runtime_error(
      "no " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
      " game with a unique pure equilibrium in " +
      std::to_string(spec.max_attempts) + " attempts (acceptance rate 0)");
}

void ExperimentPlan::validate() const {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (horizon < 1) throw ConfigError("T must be >= 1");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (id == ExperimentId::kFig1) {
    if (delta_grid.empty()) throw ConfigError("delta grid is empty");
    for (double d : delta_grid) {
      if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("delta must be >= 0");
    }
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  } else {
    if (algorithms.empty()) throw ConfigError("algorithm list is empty");
    if (sigma_list.empty()) throw ConfigError("sigma list is empty");
    for (double s : sigma_list) {
      if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sigma must be > 0");
    }
    if (k_list.empty()) throw ConfigError("k list is empty");
    for (std::int64_t k : k_list) {
      if (k < 1) throw ConfigError("k must be >= 1");
      if (std::find(algorithms.begin(), algorithms.end(), Algorithm::kEtc) !=
              algorithms.end() &&
          static_cast<std::int64_t>(rows * cols) * k > horizon) {
        throw ConfigError("ETC k = " + std::to_string(k) + " does not fit T = " +
                          std::to_string(horizon));
      }
    }
  }
}

ExperimentPlan fig1_plan(int runs, std::uint64_t seed) {
  ExperimentPlan plan;
  plan.id = ExperimentId::kFig1;
  plan.algorithms = {Algorithm::kEtc};
  plan.horizon = 1000;
  plan.runs = runs;
  plan.sigma = 0.5;
  plan.seed = seed;
  for (int n = 0; n <= 20; ++n) plan.delta_grid.push_back(0.05 * n);
  return plan;
}

ExperimentPlan fig23_plan(bool large_gaps, int runs, std::uint64_t seed) {
  ExperimentPlan plan;
  plan.id = large_gaps ? ExperimentId::kFig2 : ExperimentId::kFig3;
  plan.algorithms = {Algorithm::kEtc, Algorithm::kAe, Algorithm::kNue,
                     Algorithm::kTsallis};
  plan.horizon = 10000;
  plan.runs = runs;
  plan.seed = seed;
  if (large_gaps) {
    plan.sigma_list = {0.25, 0.5, 0.75, 1.0};
  } else {
    plan.sigma_list = {0.1, 0.2};
  }
  for (std::int64_t k = 100; k <= 2500; k += 25) plan.k_list.push_back(k);
  return plan;
}

std::vector<Fig1Row> run_fig1(const ExperimentPlan& plan) {
  plan.validate();
  const unsigned threads = resolve_threads(plan.threads);
  std::vector<Fig1Row> rows;
  rows.reserve(plan.delta_grid.size());
  for (std::size_t g = 0; g < plan.delta_grid.size(); ++g) {
    const double delta = plan.delta_grid[g];
    Fig1Row row;
    row.delta = delta;
    // A zero gap makes both rows saddles: every play is regret-free.
    row.k = delta > 0.0 ? etc_exploration_k(delta, plan.sigma, plan.horizon) : 1;
    row.bound = delta > 0.0 ? bound_etc_min(delta, plan.sigma, plan.horizon) : 0.0;
    const PayoffMatrix a(2, 1, {0.0, -delta});
    const GapProfile gaps = compute_gaps(a);
    const std::uint64_t point_seed = derive_seed(plan.seed, g);
    const LearnerConfig cfg{plan.horizon, plan.sigma, row.k, 0};
    const auto regrets = parallel_map(
        static_cast<std::size_t>(plan.runs), threads, [&](std::size_t r) {
          Environment env(a, NoiseModel::gaussian(plan.sigma),
                          derive_seed(point_seed, r));
          const RunTrace trace = etc_zsg_run(env, cfg);
          return regret_from_counts(gaps, trace.counts).nash;
        });
    const MeanStderr s = summarize(regrets);
    row.mean_regret = s.mean;
    row.stderr_regret = s.stderr_value;
    rows.push_back(row);
  }
  return rows;
}

Fig23Result run_fig23(const ExperimentPlan& plan) {
  plan.validate();
  const unsigned threads = resolve_threads(plan.threads);
  const std::vector<std::int64_t> times = sample_times(plan.horizon, plan.stride);
  const std::size_t num_algos = plan.algorithms.size();

  // series[a][n]: cumulative regret of algorithm a at times[n] in one run.
  using RunSeries = std::vector<std::vector<double>>;
  const auto per_run = parallel_map(
      static_cast<std::size_t>(plan.runs), threads, [&](std::size_t r) {
        const std::uint64_t run_seed = derive_seed(plan.seed, r);
        std::mt19937_64 draw(derive_seed(run_seed, kDrawStream));
        std::uniform_int_distribution<std::size_t> pick_sigma(
            0, plan.sigma_list.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_k(0, plan.k_list.size() - 1);
        const double sigma = plan.sigma_list[pick_sigma(draw)];
        const std::int64_t k = plan.k_list[pick_k(draw)];

        InstanceSpec spec;
        spec.rows = plan.rows;
        spec.cols = plan.cols;
        spec.entry_sigma = sigma;
        spec.noise_sigma = sigma;
        spec.seed = derive_seed(run_seed, kInstanceStream);
        const GeneratedInstance inst = generate_instance(spec);
        const double value = inst.gaps.equilibrium()->value;

        RunSeries series(num_algos);
        for (std::size_t a = 0; a < num_algos; ++a) {
          Environment env(inst.matrix, NoiseModel::gaussian(sigma),
                          derive_seed(run_seed, kNoiseStream));
          const LearnerConfig cfg{plan.horizon, sigma, k,
                                  derive_seed(run_seed, kTsallisStream)};
          const RunTrace trace = run_algorithm(plan.algorithms[a], env, cfg);
          const auto cum = abs_regret_series(inst.matrix, value, trace);
          series[a].reserve(times.size());
          for (std::int64_t t : times) {
            series[a].push_back(cum[static_cast<std::size_t>(t - 1)]);
          }
        }
        return series;
      });

  Fig23Result out;
  std::vector<double> column(per_run.size());
  for (std::size_t a = 0; a < num_algos; ++a) {
    for (std::size_t n = 0; n < times.size(); ++n) {
      for (std::size_t r = 0; r < per_run.size(); ++r) column[r] = per_run[r][a][n];
      const MeanStderr s = summarize(column);
      out.rows.push_back({plan.algorithms[a], times[n], s.mean, s.stderr_value});
      if (n + 1 == times.size()) out.final_mean.push_back(s.mean);
    }
  }
  return out;
}

std::vector<Fig23Row> run_fig23_rows(const ExperimentPlan& plan) {
  return run_fig23(plan).rows;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_fig1_csv(std::ostream& os, const std::vector<Fig1Row>& rows) {
  os << "delta,mean_regret,stderr,bound\n";
  for (const Fig1Row& r : rows) {
    os << format_number(r.delta) << ',' << format_number(r.mean_regret) << ','
       << format_number(r.stderr_regret) << ',' << format_number(r.bound) << '\n';
  }
}

void write_fig23_csv(std::ostream& os, const std::vector<Fig23Row>& rows) {
  os << "algo,t,mean_cum_regret,stderr\n";
  for (const Fig23Row& r : rows) {
    os << algorithm_token(r.algo) << ',' << r.t << ','
       << format_number(r.mean_cum_regret) << ','
       << format_number(r.stderr_cum_regret) << '\n';
  }
}

void write_trace_csv(std::ostream& os, const RunTrace& trace,
                     const std::vector<double>& cum_abs_regret) {
  if (cum_abs_regret.size() != trace.steps.size()) {
    throw std::invalid_argument("regret series length does not match the trace");
  }
  os << "t,i,j,r,cum_abs_regret\n";
  for (std::size_t n = 0; n < trace.steps.size(); ++n) {
    const Step& s = trace.steps[n];
    os << s.t << ',' << s.pair.row << ',' << s.pair.col << ','
       << format_number(s.r) << ',' << format_number(cum_abs_regret[n]) << '\n';
  }
}

}  // namespace zsg
