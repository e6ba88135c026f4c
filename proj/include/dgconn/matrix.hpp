#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dgconn/scalar.hpp"

namespace dgc {

/// Small dense row-major matrix over a scalar field.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Field<S>::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (Field<S>::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  std::vector<S> apply(const std::vector<S>& x) const {
    std::vector<S> y(rows_, S(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Matrix scaled(const S& s) const {
    Matrix out = *this;
    for (auto& v : out.data_) v *= s;
    return out;
  }

  bool is_identity(double tol = kDefaultTolerance) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const S expect = i == j ? Field<S>::one() : S(0);
        if constexpr (Field<S>::exact) {
          if ((*this)(i, j) != expect) return false;
        } else {
          if (std::abs((*this)(i, j) - expect) > tol) return false;
        }
      }
    return true;
  }

  /// Entrywise comparison; complex entries use an absolute tolerance scaled by the largest entry.
  bool approx_equal(const Matrix& other, double tol = kDefaultTolerance) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    if constexpr (Field<S>::exact) {
      return data_ == other.data_;
    } else {
      double scale = 1.0;
      for (std::size_t i = 0; i < data_.size(); ++i)
        scale = std::max({scale, std::abs(data_[i]), std::abs(other.data_[i])});
      for (std::size_t i = 0; i < data_.size(); ++i)
        if (std::abs(data_[i] - other.data_[i]) > tol * scale) return false;
      return true;
    }
  }

  /// Determinant by Gaussian elimination (partial pivoting in the complex model).
  S determinant() const {
    Matrix a = *this;
    const std::size_t n = rows_;
    S det = Field<S>::one();
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = n;
      if constexpr (Field<S>::exact) {
        for (std::size_t r = c; r < n; ++r)
          if (!Field<S>::is_zero(a(r, c))) { piv = r; break; }
      } else {
        double best = 0.0;
        for (std::size_t r = c; r < n; ++r)
          if (std::abs(a(r, c)) > best) { best = std::abs(a(r, c)); piv = r; }
      }
      if (piv == n) return S(0);
      if (piv != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
        det = -det;
      }
      det *= a(c, c);
      for (std::size_t r = c + 1; r < n; ++r) {
        if (Field<S>::is_zero(a(r, c))) continue;
        const S f = a(r, c) / a(c, c);
        for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      }
    }
    return det;
  }

  /// Inverse of a diagonal matrix (used for gauge conjugations).
  Matrix diagonal_inverse() const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out(i, i) = Field<S>::inverse((*this)(i, i));
    return out;
  }

  static Matrix diagonal(const std::vector<S>& d) {
    Matrix out(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<S> data_;
};

}  // namespace dgc
