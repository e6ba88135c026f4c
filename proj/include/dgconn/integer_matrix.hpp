#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dgconn/scalar.hpp"

namespace dgc {

/// Dense arbitrary-precision integer matrix.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    IntegerMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  std::vector<Integer> apply(const std::vector<Integer>& x) const {
    std::vector<Integer> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn((*this)(i, j)) != 0) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  std::vector<Integer> column(std::size_t c) const {
    std::vector<Integer> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::vector<Integer> row(std::size_t r) const {
    return std::vector<Integer>(data_.begin() + static_cast<long>(r * cols_),
                                data_.begin() + static_cast<long>((r + 1) * cols_));
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (sgn(v) != 0) return false;
    return true;
  }

  /// Largest absolute entry, as a double (for conditioning checks).
  double max_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v.get_d()));
    return m;
  }

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // elementary operations
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += q * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn((*this)(src, j)) != 0) (*this)(dst, j) += q * (*this)(src, j);
  }
  /// col[dst] += q * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t i = 0; i < rows_; ++i)
      if (sgn((*this)(i, src)) != 0) (*this)(i, dst) += q * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

/// U * M * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}. The inverses are tracked too.
struct SmithForm {
  IntegerMatrix U, D, V;
  IntegerMatrix U_inv, V_inv;
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < rank; ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Nearest-integer quotient keeps remainders small during elimination.
inline Integer round_div(const Integer& a, const Integer& b) {
  Integer q = floor_div(a, b);
  Integer r = a - q * b;
  if (2 * abs(r) > abs(b)) q += 1;
  return q;
}

}  // namespace detail

inline SmithForm smith_normal_form(const IntegerMatrix& M) {
  const std::size_t m = M.rows(), n = M.cols();
  SmithForm s;
  s.D = M;
  s.U = IntegerMatrix::identity(m);
  s.U_inv = IntegerMatrix::identity(m);
  s.V = IntegerMatrix::identity(n);
  s.V_inv = IntegerMatrix::identity(n);
  IntegerMatrix& A = s.D;

  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& q) {
    A.add_row(dst, src, q);
    s.U.add_row(dst, src, q);
    s.U_inv.add_col(src, dst, -q);
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    A.swap_rows(a, b);
    s.U.swap_rows(a, b);
    s.U_inv.swap_cols(a, b);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& q) {
    A.add_col(dst, src, q);
    s.V.add_col(dst, src, q);
    s.V_inv.add_row(src, dst, -q);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    A.swap_cols(a, b);
    s.V.swap_cols(a, b);
    s.V_inv.swap_rows(a, b);
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // pivot: smallest nonzero magnitude
    std::size_t pr = m, pc = n;
    Integer best;
    for (std::size_t i = t; i < m && best != 1; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const Integer& v = A(i, j);
        if (sgn(v) == 0) continue;
        if (pr == m || abs(v) < best) {
          best = abs(v);
          pr = i;
          pc = j;
          if (best == 1) break;
        }
      }
    if (pr == m) break;
    row_swap(t, pr);
    col_swap(t, pc);

    for (;;) {
      // Euclid down column t, always pivoting on the smallest entry
      for (;;) {
        std::size_t best_i = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(A(i, t)) != 0 && (sgn(A(best_i, t)) == 0 || abs(A(i, t)) < abs(A(best_i, t)))) best_i = i;
        if (best_i != t) row_swap(t, best_i);
        bool rest = false;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (sgn(A(i, t)) == 0) continue;
          row_add(i, t, -detail::round_div(A(i, t), A(t, t)));
          rest = rest || sgn(A(i, t)) != 0;
        }
        if (!rest) break;
      }
      for (;;) {
        std::size_t best_j = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(A(t, j)) != 0 && (sgn(A(t, best_j)) == 0 || abs(A(t, j)) < abs(A(t, best_j)))) best_j = j;
        if (best_j != t) col_swap(t, best_j);
        bool rest = false;
        for (std::size_t j = t + 1; j < n; ++j) {
          if (sgn(A(t, j)) == 0) continue;
          col_add(j, t, -detail::round_div(A(t, j), A(t, t)));
          rest = rest || sgn(A(t, j)) != 0;
        }
        if (!rest) break;
      }
      bool column_clean = true;
      for (std::size_t i = t + 1; i < m; ++i) column_clean = column_clean && sgn(A(i, t)) == 0;
      if (!column_clean) continue;
      if (abs(A(t, t)) == 1) break;
      // divisibility of the remaining block
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j) {
          Integer r;
          mpz_tdiv_r(r.get_mpz_t(), A(i, j).get_mpz_t(), A(t, t).get_mpz_t());
          if (sgn(r) != 0) {
            row_add(t, i, 1);
            fixed = true;
            break;
          }
        }
      if (!fixed) break;
    }
    if (sgn(A(t, t)) < 0) {
      A.negate_row(t);
      s.U.negate_row(t);
      for (std::size_t i = 0; i < m; ++i) s.U_inv(i, t) = -s.U_inv(i, t);
    }
  }
  s.rank = t;
  return s;
}

}  // namespace dgc
