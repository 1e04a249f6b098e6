#include "zsg/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zsg/error.h"
#include "zsg/experiments.h"
#include "zsg/json_io.h"
#include "zsg/oracles.h"
#include "zsg/parallel.h"
#include "zsg/regret_metrics.h"

namespace zsg {
namespace {

using nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::optional<int> runs;
  std::optional<std::int64_t> horizon;
  std::optional<double> sigma;
  std::string out;
  std::optional<std::int64_t> stride;
  unsigned threads = 0;
};

// Buffers the whole output so a failed command never leaves a partial file.
void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + g.out);
}

double min_positive_gap(const GapProfile& gaps) {
  double best = std::numeric_limits<double>::infinity();
  for (double d : gaps.delta().data()) {
    if (d > 0.0) best = std::min(best, d);
  }
  return best;
}

// ---- fig1 / fig23 ----------------------------------------------------------

int cmd_fig1(const GlobalOptions& g) {
  ExperimentPlan plan = fig1_plan(g.runs.value_or(1000), g.seed);
  if (g.horizon) plan.horizon = *g.horizon;
  if (g.sigma) plan.sigma = *g.sigma;
  plan.threads = g.threads;
  std::ostringstream os;
  write_fig1_csv(os, run_fig1(plan));
  emit(g, os.str());
  return 0;
}

struct Fig23Options {
  std::string regime = "large";
  std::vector<std::string> algos;
  std::vector<std::int64_t> k_list;
  std::size_t rows = 2;
  std::size_t cols = 2;
};

int cmd_fig23(const GlobalOptions& g, const Fig23Options& o) {
  if (o.regime != "large" && o.regime != "small") {
    throw ConfigError("--regime must be large or small");
  }
  ExperimentPlan plan = fig23_plan(o.regime == "large", g.runs.value_or(100), g.seed);
  if (g.horizon) plan.horizon = *g.horizon;
  if (g.sigma) plan.sigma_list = {*g.sigma};
  if (g.stride) plan.stride = *g.stride;
  if (!o.algos.empty()) {
    plan.algorithms.clear();
    for (const auto& a : o.algos) plan.algorithms.push_back(parse_algorithm(a));
  }
  plan.rows = o.rows;
  plan.cols = o.cols;
  if (!o.k_list.empty()) {
    plan.k_list = o.k_list;
  } else {
    // Keep the default counts that fit the horizon.
    const auto n = static_cast<std::int64_t>(plan.rows * plan.cols);
    std::erase_if(plan.k_list, [&](std::int64_t k) { return n * k > plan.horizon; });
  }
  plan.threads = g.threads;
  std::ostringstream os;
  write_fig23_csv(os, run_fig23_rows(plan));
  emit(g, os.str());
  return 0;
}

// ---- run -------------------------------------------------------------------

struct RunOptions {
  std::string algo;
  std::string matrix_path;
  std::string config_path;
  std::optional<std::int64_t> k;
  std::size_t rows = 2;
  std::size_t cols = 2;
};

int cmd_run(const GlobalOptions& g, const RunOptions& o) {
  RunConfig c;
  if (!o.config_path.empty()) {
    c = read_run_config_file(o.config_path);
  } else {
    if (o.algo.empty()) throw ConfigError("run needs --algo or --config");
    c.algo = parse_algorithm(o.algo);
    c.horizon = g.horizon.value_or(10000);
    c.sigma = g.sigma.value_or(0.5);
    c.seed = g.seed;
    if (!o.matrix_path.empty()) {
      c.matrix = read_matrix_file(o.matrix_path);
    } else {
      InstanceSpec spec;
      spec.rows = o.rows;
      spec.cols = o.cols;
      spec.entry_sigma = c.sigma;
      spec.noise_sigma = c.sigma;
      spec.seed = derive_seed(c.seed, 0);
      c.generator = spec;
    }
  }
  if (o.k) c.k = *o.k;

  const PayoffMatrix a =
      c.matrix ? *c.matrix : generate_instance(*c.generator).matrix;
  const GapProfile gaps = compute_gaps(a);
  if (c.algo == Algorithm::kEtc && c.k == 0) {
    const double d = min_positive_gap(gaps);
    c.k = std::isfinite(d) ? etc_exploration_k(d, c.sigma, c.horizon) : 1;
  }
  const double value =
      gaps.has_equilibrium() ? gaps.equilibrium()->value : solve_minimax(a).value;

  Environment env(a, NoiseModel::gaussian(c.sigma), derive_seed(c.seed, 1));
  const LearnerConfig cfg{c.horizon, c.sigma, c.k, derive_seed(c.seed, 2)};
  const RunTrace trace = run_algorithm(c.algo, env, cfg);
  std::ostringstream os;
  write_trace_csv(os, trace, abs_regret_series(a, value, trace));
  emit(g, os.str());
  return 0;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsOptions {
  std::string theorem;
  std::string instance_path;
  std::optional<std::int64_t> k;
  std::string lambda = "auto";
  bool verify = false;
  std::int64_t trials = kMinOracleTrials;
};

enum class Theorem { kEtc, kAeNash, kAeExternal, kNueNash, kNueExternal };

Theorem parse_theorem(const std::string& s) {
  if (s == "4.1" || s == "etc") return Theorem::kEtc;
  if (s == "5.1" || s == "ae-nash") return Theorem::kAeNash;
  if (s == "5.2" || s == "ae-external") return Theorem::kAeExternal;
  if (s == "6.1" || s == "nue-nash") return Theorem::kNueNash;
  if (s == "nue-external") return Theorem::kNueExternal;
  throw ConfigError("unknown theorem '" + s +
                    "' (use 4.1, 5.1, 5.2, 6.1, etc, ae-nash, ae-external, "
                    "nue-nash or nue-external)");
}

int cmd_bounds(const GlobalOptions& g, const BoundsOptions& o) {
  const Theorem th = parse_theorem(o.theorem);
  if (o.instance_path.empty()) throw ConfigError("bounds needs --instance");
  const PayoffMatrix a = read_matrix_file(o.instance_path);
  const GapProfile gaps = compute_gaps(a);
  if (!gaps.has_equilibrium()) {
    throw ConfigError("bounds need an instance with a pure equilibrium");
  }
  const double sigma = g.sigma.value_or(0.5);
  const std::int64_t horizon = g.horizon.value_or(10000);

  json inputs{{"instance", matrix_to_json(a)}, {"sigma", sigma}, {"T", horizon}};
  double value = 0.0;
  if (th == Theorem::kEtc) {
    std::int64_t k = 0;
    if (o.k) {
      k = *o.k;
    } else {
      const double d = min_positive_gap(gaps);
      k = std::isfinite(d) ? etc_exploration_k(d, sigma, horizon) : 1;
    }
    inputs["k"] = k;
    value = bound_etc(gaps, sigma, horizon, k);
  } else {
    const bool ae = th == Theorem::kAeNash || th == Theorem::kAeExternal;
    BoundInputs in{gaps, sigma, horizon, 0.0};
    if (o.lambda == "auto") {
      in.lambda = ae ? ae_lambda_floor(sigma, horizon) : nue_lambda_floor(sigma, horizon);
    } else {
      try {
        std::size_t used = 0;
        in.lambda = std::stod(o.lambda, &used);
        if (used != o.lambda.size()) throw std::invalid_argument(o.lambda);
      } catch (const std::exception&) {
        throw ConfigError("--lambda must be a number or 'auto'");
      }
    }
    inputs["lambda"] = in.lambda;
    switch (th) {
      case Theorem::kAeNash: value = bound_ae_nash(in); break;
      case Theorem::kAeExternal: value = bound_ae_external(in); break;
      case Theorem::kNueNash: value = bound_nue_nash(in); break;
      default: value = bound_nue_external(in); break;
    }
  }

  std::string text = json{{"theorem", o.theorem}, {"inputs", inputs}, {"value", value}}
                         .dump() + "\n";
  bool ok = true;
  if (o.verify) {
    for (const OracleReport& r :
         verify_instance(a, sigma, horizon, o.trials, g.seed, resolve_threads(g.threads))) {
      text += oracle_report_to_json(r).dump() + "\n";
      ok = ok && r.pass;
    }
  }
  emit(g, text);
  return ok ? 0 : 1;
}

// ---- gen / verify ------------------------------------------------------------

struct GenOptions {
  std::size_t rows = 2;
  std::size_t cols = 2;
  std::optional<double> entry_sigma;
  int count = 1;
  bool allow_any = false;
};

int cmd_gen(const GlobalOptions& g, const GenOptions& o) {
  if (o.count < 1) throw ConfigError("--count must be >= 1");
  std::string text;
  for (int n = 0; n < o.count; ++n) {
    InstanceSpec spec;
    spec.rows = o.rows;
    spec.cols = o.cols;
    spec.noise_sigma = g.sigma.value_or(1.0);
    spec.entry_sigma = o.entry_sigma.value_or(spec.noise_sigma);
    spec.require_unique_pure_ne = !o.allow_any;
    spec.seed = derive_seed(g.seed, static_cast<std::uint64_t>(n));
    text += matrix_to_json(generate_instance(spec).matrix).dump() + "\n";
  }
  emit(g, text);
  return 0;
}

struct VerifyOptions {
  std::string instance_path;
  std::int64_t trials = kMinOracleTrials;
};

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o) {
  if (o.instance_path.empty()) throw ConfigError("verify needs --instance");
  const PayoffMatrix a = read_matrix_file(o.instance_path);
  std::string text;
  bool ok = true;
  for (const OracleReport& r :
       verify_instance(a, g.sigma.value_or(0.5), g.horizon.value_or(10000), o.trials,
                       g.seed, resolve_threads(g.threads))) {
    text += oracle_report_to_json(r).dump() + "\n";
    ok = ok && r.pass;
  }
  emit(g, text);
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Bandit learning of pure equilibria in zero-sum matrix games"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--runs", g.runs, "Independent runs per point");
  app.add_option("--T", g.horizon, "Horizon");
  app.add_option("--sigma", g.sigma, "Noise standard deviation");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--stride", g.stride, "Sampling stride of regret curves");
  app.add_option("--threads", g.threads, "Worker threads (ZSG_THREADS overrides)");

  auto* fig1 = app.add_subcommand("fig1", "Regret of ETC against its bound over a gap grid");

  Fig23Options f23;
  auto* fig23 = app.add_subcommand("fig23", "Cumulative regret of all learners on random 2x2 games");
  fig23->add_option("--regime", f23.regime, "large or small gaps");
  fig23->add_option("--algos", f23.algos, "Subset of etc, ae, nue, tsallis");
  fig23->add_option("--k-list", f23.k_list, "ETC exploration counts to draw from");
  fig23->add_option("--m", f23.rows, "Rows");
  fig23->add_option("--l", f23.cols, "Columns");

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Single run; writes the trace CSV");
  run->add_option("--algo", ro.algo, "etc, ae, nue or tsallis");
  run->add_option("--matrix", ro.matrix_path, "Instance JSON");
  run->add_option("--config", ro.config_path, "Run config JSON");
  run->add_option("--k", ro.k, "ETC exploration count");
  run->add_option("--m", ro.rows, "Rows of a generated instance");
  run->add_option("--l", ro.cols, "Columns of a generated instance");

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a regret bound on an instance");
  bounds->add_option("--theorem", bo.theorem, "4.1, 5.1, 5.2, 6.1 or a named bound")
      ->required();
  bounds->add_option("--instance", bo.instance_path, "Instance JSON")->required();
  bounds->add_option("--k", bo.k, "ETC exploration count");
  bounds->add_option("--lambda", bo.lambda, "Gap threshold or 'auto'");
  bounds->add_flag("--verify", bo.verify, "Also run the oracles on the instance");
  bounds->add_option("--trials", bo.trials, "Monte Carlo trials for --verify");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Emit random instances as JSON lines");
  gen->add_option("--m", go.rows, "Rows");
  gen->add_option("--l", go.cols, "Columns");
  gen->add_option("--entry-sigma", go.entry_sigma, "Entry standard deviation");
  gen->add_option("--count", go.count, "Number of instances");
  gen->add_flag("--allow-any", go.allow_any, "Keep games without a unique saddle");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the oracles on an instance");
  verify->add_option("--instance", vo.instance_path, "Instance JSON")->required();
  verify->add_option("--trials", vo.trials, "Monte Carlo trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*fig1) return cmd_fig1(g);
    if (*fig23) return cmd_fig23(g, f23);
    if (*run) return cmd_run(g, ro);
    if (*bounds) return cmd_bounds(g, bo);
    if (*gen) return cmd_gen(g, go);
    if (*verify) return cmd_verify(g, vo);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace zsg
