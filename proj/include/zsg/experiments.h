#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zsg/learners.h"
#include "zsg/matrix_game.h"

namespace zsg {

struct InstanceSpec {
  std::size_t rows = 2;
  std::size_t cols = 2;
  double entry_sigma = 1.0;  // entries ~ N(0, entry_sigma^2)
  double noise_sigma = 1.0;
  bool require_unique_pure_ne = true;
  std::uint64_t seed = 0;
  std::int64_t max_attempts = 100000;
};

struct GeneratedInstance {
  PayoffMatrix matrix;
  GapProfile gaps;
  std::int64_t attempts = 0;
};

// Draws i.i.d. Gaussian entries, redrawing until the game has a unique pure
// equilibrium (when required). Throws std::runtime_error with the observed
// acceptance rate once max_attempts is exhausted.
GeneratedInstance generate_instance(const InstanceSpec& spec);

enum class ExperimentId { kFig1, kFig2, kFig3, kCustom };

struct ExperimentPlan {
  ExperimentId id = ExperimentId::kCustom;
  std::vector<Algorithm> algorithms;
  std::int64_t horizon = 0;
  int runs = 1;
  std::vector<double> delta_grid;       // fig1
  std::vector<double> sigma_list;       // fig2/fig3
  std::vector<std::int64_t> k_list;     // ETC k candidates for fig2/fig3
  double sigma = 0.5;                   // fig1 noise level
  std::size_t rows = 2;                 // fig2/fig3 game size
  std::size_t cols = 2;
  std::int64_t stride = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void validate() const;
};

// Regret-vs-gap experiment on the 2x1 games [[0], [-delta]] with the tuned k.
ExperimentPlan fig1_plan(int runs, std::uint64_t seed);
// Cumulative-regret comparison on random 2x2 games. Large gaps draw sigma from
// {0.25, 0.5, 0.75, 1}, small gaps from {0.1, 0.2}.
ExperimentPlan fig23_plan(bool large_gaps, int runs, std::uint64_t seed);

struct Fig1Row {
  double delta = 0.0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double bound = 0.0;
  std::int64_t k = 0;
};

std::vector<Fig1Row> run_fig1(const ExperimentPlan& plan);

struct Fig23Row {
  Algorithm algo = Algorithm::kEtc;
  std::int64_t t = 0;
  double mean_cum_regret = 0.0;
  double stderr_cum_regret = 0.0;
};

struct Fig23Result {
  std::vector<Fig23Row> rows;
  // Final mean cumulative regret per algorithm, in plan order.
  std::vector<double> final_mean;
};

std::vector<Fig23Row> run_fig23_rows(const ExperimentPlan& plan);
Fig23Result run_fig23(const ExperimentPlan& plan);

// CSV writers. Numbers use 9 significant digits.
void write_fig1_csv(std::ostream& os, const std::vector<Fig1Row>& rows);
void write_fig23_csv(std::ostream& os, const std::vector<Fig23Row>& rows);
void write_trace_csv(std::ostream& os, const RunTrace& trace,
                     const std::vector<double>& cum_abs_regret);

std::string format_number(double x);

}  // namespace zsg
