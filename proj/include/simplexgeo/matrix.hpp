#pragma once

#include <string>
#include <vector>

#include "simplexgeo/error.hpp"
#include "simplexgeo/scalar.hpp"

namespace simplexgeo {

/// Row-major dense matrix. Plain container with 0-based (row, col) access.
template <Scalar T>
class DenseMatrix {
 public:
  DenseMatrix(int rows, int cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    if (rows < 0 || cols < 0) throw GeometryError(ErrorKind::OutOfRange, "negative matrix shape");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& at(int r, int c) { return data_[index(r, c)]; }
  const T& at(int r, int c) const { return data_[index(r, c)]; }

  bool operator==(const DenseMatrix&) const = default;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw GeometryError(ErrorKind::DimensionMismatch, "cannot multiply " + a.shape() + " by " + b.shape());
    }
    DenseMatrix out(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r) {
      for (int k = 0; k < a.cols_; ++k) {
        const T& left = a.at(r, k);
        if (left == 0) continue;
        for (int c = 0; c < b.cols_; ++c) out.at(r, c) += left * b.at(k, c);
      }
    }
    return out;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  std::size_t index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
      throw GeometryError(ErrorKind::IndexOutOfRange, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                                          ") outside " + shape());
    }
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  int rows_;
  int cols_;
  std::vector<T> data_;
};

}  // namespace simplexgeo
