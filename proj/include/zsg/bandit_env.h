#pragma once

#include <cstdint>
#include <random>

#include "zsg/grid.h"
#include "zsg/matrix_game.h"

namespace zsg {

struct NoiseModel {
  enum class Kind { kGaussian };

  Kind kind = Kind::kGaussian;
  double sigma = 0.0;  // standard deviation, payoff units

  static NoiseModel gaussian(double sigma);
};

// Running means \hat A and play counts n_ij. Unvisited cells read as 0.
class EmpiricalEstimate {
 public:
  EmpiricalEstimate(std::size_t rows, std::size_t cols);

  // Adds observation r at p. Throws std::invalid_argument if r is not finite.
  void record(Pair p, double r);
  void reset();

  const PayoffMatrix& mean() const { return mean_; }
  const Grid<std::int64_t>& count() const { return count_; }
  std::int64_t count(Pair p) const { return count_[p]; }
  std::int64_t total_steps() const { return total_steps_; }

 private:
  PayoffMatrix mean_;
  Grid<double> sum_;
  Grid<std::int64_t> count_;
  std::int64_t total_steps_ = 0;
};

// Stochastic game: sample_payoff(p) = A(p) + N(0, sigma^2). The stream is a
// 64-bit Mersenne Twister, so a seed plus a call sequence replays exactly.
// Single owner; not for concurrent use.
class Environment {
 public:
  Environment(PayoffMatrix truth, NoiseModel noise, std::uint64_t seed);

  double sample_payoff(Pair p);

  const PayoffMatrix& truth() const { return truth_; }
  const NoiseModel& noise() const { return noise_; }
  std::uint64_t seed() const { return seed_; }

 private:
  PayoffMatrix truth_;
  NoiseModel noise_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> standard_normal_{0.0, 1.0};
};

}  // namespace zsg
