#include "zsg/matrix_game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "simplex.h"
#include "zsg/error.h"

namespace zsg {
namespace {

std::vector<double> row_mins(const PayoffMatrix& a) {
  std::vector<double> out(a.rows(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] = std::min(out[i], a(i, j));
  }
  return out;
}

std::vector<double> col_maxes(const PayoffMatrix& a) {
  std::vector<double> out(a.cols(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] = std::max(out[j], a(i, j));
  }
  return out;
}

std::string describe(const PayoffMatrix& a) {
  std::ostringstream os;
  os.precision(17);
  os << a.rows() << "x" << a.cols() << " [";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << a(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

// Clip tiny negative LP noise and renormalize.
void clean_distribution(std::vector<double>& v) {
  double total = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    total += x;
  }
  if (total <= 0.0) throw SolverError("minimax: degenerate strategy");
  for (double& x : v) x /= total;
}

}  // namespace

PayoffMatrix::PayoffMatrix(std::size_t rows, std::size_t cols,
                           std::vector<double> entries) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("payoff matrix needs at least one row and column");
  }
  values_ = Grid<double>(rows, cols, std::move(entries));
  for (double x : values_.data()) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("payoff matrix entries must be finite");
    }
  }
}

PayoffMatrix::PayoffMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t l = m ? rows.begin()->size() : 0;
  std::vector<double> flat;
  flat.reserve(m * l);
  for (const auto& row : rows) {
    if (row.size() != l) throw std::invalid_argument("ragged payoff matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  *this = PayoffMatrix(m, l, std::move(flat));
}

PayoffMatrix::PayoffMatrix(std::size_t rows, std::size_t cols, double fill)
    : values_(rows, cols, fill) {}

double PayoffMatrix::min_entry() const {
  return *std::min_element(values_.data().begin(), values_.data().end());
}

double PayoffMatrix::max_entry() const {
  return *std::max_element(values_.data().begin(), values_.data().end());
}

double PayoffMatrix::max_abs() const {
  return std::max(std::abs(min_entry()), std::abs(max_entry()));
}

PayoffMatrix PayoffMatrix::shifted(double c) const {
  std::vector<double> out(values_.data().begin(), values_.data().end());
  for (double& x : out) x += c;
  return PayoffMatrix(rows(), cols(), std::move(out));
}

PayoffMatrix PayoffMatrix::restricted(std::span<const std::size_t> rows,
                                      std::span<const std::size_t> cols) const {
  std::vector<double> out;
  out.reserve(rows.size() * cols.size());
  for (std::size_t i : rows) {
    for (std::size_t j : cols) out.push_back(values_.at(i, j));
  }
  return PayoffMatrix(rows.size(), cols.size(), std::move(out));
}

PureNeSearch find_pure_ne(const PayoffMatrix& a) {
  const auto mins = row_mins(a);
  const auto maxes = col_maxes(a);
  PureNeSearch out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) >= maxes[j] && a(i, j) <= mins[i]) {
        if (!out.equilibrium) out.equilibrium = PureEquilibrium{{i, j}, a(i, j)};
        ++out.num_saddles;
      }
    }
  }
  out.unique = out.num_saddles == 1;
  return out;
}

Pair maximin_pair(const PayoffMatrix& a) {
  const auto mins = row_mins(a);
  const auto maxes = col_maxes(a);
  const auto row = std::max_element(mins.begin(), mins.end()) - mins.begin();
  const auto col = std::min_element(maxes.begin(), maxes.end()) - maxes.begin();
  return {static_cast<std::size_t>(row), static_cast<std::size_t>(col)};
}

const Grid<double>& GapProfile::delta_star() const {
  if (!delta_star_) throw NoPureEquilibriumError("delta_star is undefined");
  return *delta_star_;
}

GapProfile compute_gaps(const PayoffMatrix& a) {
  const auto mins = row_mins(a);
  const auto maxes = col_maxes(a);
  GapProfile g;
  g.delta_max_ = Grid<double>(a.rows(), a.cols());
  g.delta_min_ = Grid<double>(a.rows(), a.cols());
  g.delta_ = Grid<double>(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      g.delta_max_(i, j) = maxes[j] - a(i, j);
      g.delta_min_(i, j) = a(i, j) - mins[i];
      g.delta_(i, j) = g.delta_max_(i, j) + g.delta_min_(i, j);
    }
  }
  const PureNeSearch ne = find_pure_ne(a);
  g.equilibrium_ = ne.equilibrium;
  g.unique_ = ne.unique;
  if (ne.equilibrium) {
    Grid<double> star(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        star(i, j) = ne.equilibrium->value - a(i, j);
      }
    }
    g.delta_star_ = std::move(star);
  }
  return g;
}

ActiveSet::ActiveSet(std::size_t rows, std::size_t cols, bool all_active)
    : mask_(rows, cols, all_active ? 1 : 0),
      count_(all_active ? rows * cols : 0) {}

void ActiveSet::insert(Pair p) {
  char& slot = mask_.at(p.row, p.col);
  if (!slot) {
    slot = 1;
    ++count_;
  }
}

void ActiveSet::erase(Pair p) {
  char& slot = mask_.at(p.row, p.col);
  if (slot) {
    slot = 0;
    --count_;
  }
}

bool ActiveSet::row_active(std::size_t i) const {
  for (std::size_t j = 0; j < cols(); ++j) {
    if (mask_(i, j)) return true;
  }
  return false;
}

bool ActiveSet::col_active(std::size_t j) const {
  for (std::size_t i = 0; i < rows(); ++i) {
    if (mask_(i, j)) return true;
  }
  return false;
}

std::vector<std::size_t> ActiveSet::active_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows(); ++i) {
    if (row_active(i)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ActiveSet::active_cols() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < cols(); ++j) {
    if (col_active(j)) out.push_back(j);
  }
  return out;
}

std::vector<Pair> ActiveSet::pairs() const {
  std::vector<Pair> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      if (mask_(i, j)) out.push_back({i, j});
    }
  }
  return out;
}

bool ActiveSet::is_subset_of(const ActiveSet& other) const {
  if (!mask_.same_shape(other.mask_)) return false;
  for (std::size_t k = 0; k < mask_.size(); ++k) {
    if (mask_.data()[k] && !other.mask_.data()[k]) return false;
  }
  return true;
}

bool eps_ne_satisfied(const PayoffMatrix& m, Pair p, double eps,
                      const ActiveSet& active) {
  if (active.empty()) throw std::invalid_argument("empty active set");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  if (active.rows() != m.rows() || active.cols() != m.cols()) {
    throw std::invalid_argument("active set shape does not match the matrix");
  }
  const double here = m.at(p);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (active.row_active(i) && m(i, p.col) - eps > here) return false;
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (active.col_active(j) && here > m(p.row, j) + eps) return false;
  }
  return true;
}

bool eps_ne_satisfied(const PayoffMatrix& m, Pair p, double eps) {
  return eps_ne_satisfied(m, p, eps, ActiveSet(m.rows(), m.cols()));
}

double ne_margin(const PayoffMatrix& m, Pair p, const ActiveSet& active) {
  if (active.empty()) throw std::invalid_argument("empty active set");
  const double here = m.at(p);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (active.row_active(i)) margin = std::min(margin, here - m(i, p.col));
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (active.col_active(j)) margin = std::min(margin, m(p.row, j) - here);
  }
  return margin;
}

double minimax_violation(const PayoffMatrix& a, const MixedProfile& profile) {
  double best_row = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * profile.q[j];
    best_row = std::max(best_row, s);
  }
  double best_col = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += profile.p[i] * a(i, j);
    best_col = std::min(best_col, s);
  }
  return std::max(best_row - profile.value, profile.value - best_col);
}

MixedProfile solve_minimax(const PayoffMatrix& a) {
  // With A' = A + shift >= 1 the game value is positive and the column
  // player's problem becomes  max 1^T v  s.t.  A' v <= 1, v >= 0.  Then
  // q = v / 1^T v, the LP duals give p the same way, and value' = 1 / 1^T v.
  const double shift = 1.0 - a.min_entry();
  Grid<double> lp(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) lp(i, j) = a(i, j) + shift;
  }
  const std::vector<double> rhs(a.rows(), 1.0);
  const std::vector<double> obj(a.cols(), 1.0);
  const std::size_t cap = 50 * (a.rows() + a.cols()) + 1000;

  internal::SimplexResult lp_result;
  try {
    lp_result = internal::maximize_with_slack_basis(lp, rhs, obj, cap);
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + " for matrix " + describe(a));
  }
  if (!(lp_result.objective > 0.0)) {
    throw SolverError("minimax: non-positive LP optimum for matrix " + describe(a));
  }

  MixedProfile out;
  out.q = std::move(lp_result.primal);
  out.p = std::move(lp_result.dual);
  clean_distribution(out.q);
  clean_distribution(out.p);
  out.value = 1.0 / lp_result.objective - shift;

  const double scale = std::max(1.0, a.max_abs());
  if (minimax_violation(a, out) > kOptimalityTol * scale) {
    throw SolverError("minimax: solution fails optimality check for matrix " +
                      describe(a));
  }
  return out;
}

bool is_probability_vector(std::span<const double> v, double tol) {
  if (v.empty()) return false;
  double total = 0.0;
  for (double x : v) {
    if (!(x >= -tol)) return false;
    total += x;
  }
  return std::abs(total - 1.0) <= tol;
}

Grid<double> joint_probabilities(std::span<const double> p,
                                 std::span<const double> q) {
  if (!is_probability_vector(p) || !is_probability_vector(q)) {
    throw std::invalid_argument("joint_probabilities needs probability vectors");
  }
  Grid<double> out(p.size(), q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out(i, j) = p[i] * q[j];
  }
  return out;
}

Grid<double> joint_probabilities(const PayoffMatrix& a,
                                 const MixedProfile& profile) {
  if (profile.p.size() != a.rows() || profile.q.size() != a.cols()) {
    throw std::invalid_argument("strategy dimensions do not match the game");
  }
  return joint_probabilities(profile.p, profile.q);
}

}  // namespace zsg
