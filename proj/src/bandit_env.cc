#include "zsg/bandit_env.h"

#include <cmath>
#include <stdexcept>

namespace zsg {

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  }
  return NoiseModel{Kind::kGaussian, sigma};
}

EmpiricalEstimate::EmpiricalEstimate(std::size_t rows, std::size_t cols)
    : mean_(rows, cols, 0.0), sum_(rows, cols, 0.0), count_(rows, cols, 0) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("estimate needs at least one row and column");
  }
}

void EmpiricalEstimate::record(Pair p, double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("non-finite observation");
  double& sum = sum_.at(p.row, p.col);
  sum += r;
  const std::int64_t n = ++count_[p];
  mean_.values_[p] = sum / static_cast<double>(n);
  ++total_steps_;
}

void EmpiricalEstimate::reset() {
  *this = EmpiricalEstimate(mean_.rows(), mean_.cols());
}

Environment::Environment(PayoffMatrix truth, NoiseModel noise,
                         std::uint64_t seed)
    : truth_(std::move(truth)), noise_(noise), seed_(seed), rng_(seed) {}

double Environment::sample_payoff(Pair p) {
  const double mean = truth_.at(p);
  if (noise_.sigma == 0.0) return mean;
  return mean + noise_.sigma * standard_normal_(rng_);
}

}  // namespace zsg
