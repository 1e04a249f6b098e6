#pragma once

#include <cstddef>
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zsg {

// An action pair (row player action, column player action).
struct Pair {
  std::size_t row = 0;
  std::size_t col = 0;

  auto operator<=>(const Pair&) const = default;
};

inline std::string to_string(Pair p) {
  return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

// Dense row-major rows x cols container.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("grid data has " +
                                  std::to_string(data_.size()) +
                                  " entries, expected " +
                                  std::to_string(rows_ * cols_));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  T& operator[](Pair p) { return (*this)(p.row, p.col); }
  const T& operator[](Pair p) const { return (*this)(p.row, p.col); }

  const T& at(std::size_t i, std::size_t j) const {
    check(i, j);
    return (*this)(i, j);
  }
  T& at(std::size_t i, std::size_t j) {
    check(i, j);
    return (*this)(i, j);
  }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  bool same_shape(const Grid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  template <class U>
  bool same_shape(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Grid&) const = default;

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
      throw std::out_of_range("index (" + std::to_string(i) + "," +
                              std::to_string(j) + ") outside " +
                              std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace zsg
