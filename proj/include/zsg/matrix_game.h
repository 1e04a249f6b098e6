#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "zsg/grid.h"

namespace zsg {

// Absolute tolerances used across the library.
inline constexpr double kEqualityTol = 1e-9;
inline constexpr double kOptimalityTol = 1e-7;

// Payoff matrix of a finite two-player zero-sum game. Entry (i, j) is what
// the row (maximizing) player receives when the pair (i, j) is played; the
// column player receives the negation. Entries are always finite.
class PayoffMatrix {
 public:
  PayoffMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  PayoffMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  std::size_t num_pairs() const { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  double operator[](Pair p) const { return values_[p]; }
  double at(Pair p) const { return values_.at(p.row, p.col); }

  std::span<const double> entries() const { return values_.data(); }
  const Grid<double>& grid() const { return values_; }

  double min_entry() const;
  double max_entry() const;
  double max_abs() const;

  // Same game with `c` added to every payoff.
  PayoffMatrix shifted(double c) const;
  // Sub-game on the listed rows and columns, in the given order.
  PayoffMatrix restricted(std::span<const std::size_t> rows,
                          std::span<const std::size_t> cols) const;

  bool operator==(const PayoffMatrix&) const = default;

 private:
  friend class EmpiricalEstimate;
  PayoffMatrix(std::size_t rows, std::size_t cols, double fill);

  Grid<double> values_;
};

struct PureEquilibrium {
  Pair pair;
  double value = 0.0;
};

struct PureNeSearch {
  std::optional<PureEquilibrium> equilibrium;  // lexicographically smallest
  bool unique = false;
  std::size_t num_saddles = 0;
};

// Saddle point search: (i*, j*) with A(i, j*) <= A(i*, j*) <= A(i*, j) for
// all i, j, compared exactly.
PureNeSearch find_pure_ne(const PayoffMatrix& a);

// Pair with the best pure-strategy security levels:
// (argmax_i min_j A, argmin_j max_i A), ties to the smallest index. Equals the
// saddle point whenever a unique one exists.
Pair maximin_pair(const PayoffMatrix& a);

// Per-pair suboptimality gaps. delta_star needs a pure equilibrium and throws
// NoPureEquilibriumError otherwise.
class GapProfile {
 public:
  const Grid<double>& delta_max() const { return delta_max_; }
  const Grid<double>& delta_min() const { return delta_min_; }
  const Grid<double>& delta() const { return delta_; }
  const Grid<double>& delta_star() const;

  bool has_equilibrium() const { return equilibrium_.has_value(); }
  const std::optional<PureEquilibrium>& equilibrium() const {
    return equilibrium_;
  }
  bool unique_equilibrium() const { return unique_; }

  std::size_t rows() const { return delta_.rows(); }
  std::size_t cols() const { return delta_.cols(); }

 private:
  friend GapProfile compute_gaps(const PayoffMatrix& a);

  Grid<double> delta_max_;
  Grid<double> delta_min_;
  Grid<double> delta_;
  std::optional<Grid<double>> delta_star_;
  std::optional<PureEquilibrium> equilibrium_;
  bool unique_ = false;
};

GapProfile compute_gaps(const PayoffMatrix& a);

// Set S_t of action pairs still under consideration. A row (column) counts as
// surviving while at least one pair in it does.
class ActiveSet {
 public:
  ActiveSet() = default;
  ActiveSet(std::size_t rows, std::size_t cols, bool all_active = true);

  std::size_t rows() const { return mask_.rows(); }
  std::size_t cols() const { return mask_.cols(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(Pair p) const { return mask_[p] != 0; }
  void insert(Pair p);
  void erase(Pair p);

  bool row_active(std::size_t i) const;
  bool col_active(std::size_t j) const;
  std::vector<std::size_t> active_rows() const;
  std::vector<std::size_t> active_cols() const;
  // Members in row-major order.
  std::vector<Pair> pairs() const;

  bool is_subset_of(const ActiveSet& other) const;
  bool operator==(const ActiveSet&) const = default;

 private:
  Grid<char> mask_;
  std::size_t count_ = 0;
};

// True iff M(i', j) - eps <= M(i, j) <= M(i, j') + eps for every surviving row
// i' and column j' of `active`. Throws std::invalid_argument on an empty active
// set or negative eps.
bool eps_ne_satisfied(const PayoffMatrix& m, Pair p, double eps,
                      const ActiveSet& active);
bool eps_ne_satisfied(const PayoffMatrix& m, Pair p, double eps);

// Smallest slack of the saddle inequalities at `p` against the surviving rows
// and columns: min(M(p) - max_i' M(i', j), min_j' M(i, j') - M(p)). The pair
// passes the eps test whenever this is >= -eps (up to rounding).
double ne_margin(const PayoffMatrix& m, Pair p, const ActiveSet& active);

struct MixedProfile {
  std::vector<double> p;  // row strategy
  std::vector<double> q;  // column strategy
  double value = 0.0;
};

// Worst deviation from the minimax property: the larger of
// max_i (A q)_i - value and value - min_j (p^T A)_j.
double minimax_violation(const PayoffMatrix& a, const MixedProfile& profile);

// Optimal mixed strategies via the LP form of the minimax problem, solved with
// an in-repo dense simplex. Throws SolverError if the pivot cap is exceeded.
MixedProfile solve_minimax(const PayoffMatrix& a);

// Product distribution P(i, j) = p_i q_j.
Grid<double> joint_probabilities(std::span<const double> p,
                                 std::span<const double> q);
// Same, checked against the game dimensions.
Grid<double> joint_probabilities(const PayoffMatrix& a,
                                 const MixedProfile& profile);

bool is_probability_vector(std::span<const double> v,
                           double tol = kEqualityTol);

}  // namespace zsg
