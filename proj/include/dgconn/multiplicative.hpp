#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgconn/error.hpp"
#include "dgconn/integer_matrix.hpp"
#include "dgconn/scalar.hpp"

namespace dgc {

/// prod_j x_j^{E_ij} = c_i.
template <class S>
struct MultiplicativeSystem {
  IntegerMatrix E;
  std::vector<S> c;
};

/// Why a system has no solution: the integer row combination `combination` of the equations gives
/// prod_j x_j^{root * w_j} = (target), and `root` does not divide / the target is not a root-th power.
struct UnsolvableCertificate {
  std::vector<Integer> combination;
  Integer root;  // 0 for a left-kernel row (target must be 1)
  std::string what;
};

template <class S>
struct MultiplicativeSolution {
  std::vector<S> x;
  std::optional<UnsolvableCertificate> unsolvable;
  bool solvable() const { return !unsolvable; }

  const std::vector<S>& value() const {
    if (unsolvable) fail(ErrorCode::Unsolvable, unsolvable->what);
    return x;
  }
};

namespace detail {

/// Pairwise coprime, non-perfect-power base generating every input (inputs > 1).
inline std::vector<Integer> coprime_base(std::vector<Integer> nums) {
  std::vector<Integer> base;
  for (auto& v : nums)
    if (v > 1) base.push_back(v);
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (std::size_t a = 0; a < base.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < base.size() && !changed; ++b) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), base[a].get_mpz_t(), base[b].get_mpz_t());
        if (g == 1) continue;
        const Integer x = base[a] / g, y = base[b] / g;
        base.erase(base.begin() + static_cast<long>(b));
        base.erase(base.begin() + static_cast<long>(a));
        for (const auto& v : {g, x, y})
          if (v > 1) base.push_back(v);
        changed = true;
      }
  }
  // strip perfect powers
  for (auto& b : base) {
    for (unsigned long k = static_cast<unsigned long>(mpz_sizeinbase(b.get_mpz_t(), 2)); k >= 2; --k) {
      Integer r;
      if (mpz_root(r.get_mpz_t(), b.get_mpz_t(), k) != 0) {
        b = r;
        break;
      }
    }
  }
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  return base;
}

/// Exponent of base element b in n (n is a product of base powers).
inline long valuation(Integer& n, const Integer& b) {
  long e = 0;
  while (mpz_divisible_p(n.get_mpz_t(), b.get_mpz_t())) {
    n /= b;
    ++e;
  }
  return e;
}

using IntVec = std::vector<Integer>;

inline Rational dot(const IntVec& a, const std::vector<Rational>& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::vector<std::vector<Rational>> gram_schmidt(const std::vector<IntVec>& b) {
  std::vector<std::vector<Rational>> g;
  for (const auto& v : b) {
    std::vector<Rational> w(v.begin(), v.end());
    for (const auto& u : g) {
      Rational uu(0);
      for (const auto& x : u) uu += x * x;
      const Rational c = dot(v, u) / uu;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * u[i];
    }
    g.push_back(std::move(w));
  }
  return g;
}

/// Nearest-plane size reduction of y against the lattice spanned by b.
inline void size_reduce(IntVec& y, const std::vector<IntVec>& b, const std::vector<std::vector<Rational>>& g) {
  for (std::size_t k = b.size(); k-- > 0;) {
    Rational gg(0);
    for (const auto& x : g[k]) gg += x * x;
    const Rational c = dot(y, g[k]) / gg;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), Integer(2 * c.get_num() + c.get_den()).get_mpz_t(), Integer(2 * c.get_den()).get_mpz_t());
    if (sgn(q) != 0)
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= q * b[k][i];
  }
}

/// LLL (delta = 3/4) in exact arithmetic with incremental Gram-Schmidt updates.
inline void lll(std::vector<IntVec>& b) {
  const std::size_t n = b.size();
  if (n < 2) return;
  const auto g = gram_schmidt(b);
  std::vector<Rational> B(n);
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& x : g[i]) B[i] += x * x;
    for (std::size_t j = 0; j < i; ++j) mu[i][j] = dot(b[i], g[j]) / B[j];
  }
  auto reduce = [&](std::size_t k, std::size_t j) {
    const Rational& m = mu[k][j];
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), Integer(2 * m.get_num() + m.get_den()).get_mpz_t(), Integer(2 * m.get_den()).get_mpz_t());
    if (sgn(q) == 0) return;
    for (std::size_t i = 0; i < b[k].size(); ++i) b[k][i] -= q * b[j][i];
    for (std::size_t l = 0; l < j; ++l) mu[k][l] -= q * mu[j][l];
    mu[k][j] -= q;
  };
  std::size_t k = 1;
  while (k < n) {
    reduce(k, k - 1);
    if (B[k] >= (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      for (std::size_t j = k - 1; j-- > 0;) reduce(k, j);
      ++k;
      continue;
    }
    const Rational m = mu[k][k - 1];
    const Rational Bn = B[k] + m * m * B[k - 1];
    mu[k][k - 1] = m * B[k - 1] / Bn;
    B[k] = B[k - 1] * B[k] / Bn;
    B[k - 1] = Bn;
    std::swap(b[k], b[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational t = mu[i][k];
      mu[i][k] = mu[i][k - 1] - m * t;
      mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
    }
    k = std::max<std::size_t>(k - 1, 1);
  }
}

}  // namespace detail

/// Largest relative residual of prod_j x_j^{E_ij} against c_i.
template <class S>
double multiplicative_residual(const IntegerMatrix& E, const std::vector<S>& x, const std::vector<S>& c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < E.rows(); ++i) {
    S p = Field<S>::one();
    for (std::size_t j = 0; j < E.cols(); ++j)
      if (sgn(E(i, j)) != 0) p *= ipow(x[j], E(i, j).get_si());
    worst = std::max(worst, Field<S>::rel_error(p, c[i]));
  }
  return worst;
}

/// Solver for a fixed exponent matrix; the Smith form (and, for complex targets, the least-squares
/// factorization) is computed once and reused across right-hand sides.
class MultiplicativeSolver {
 public:
  explicit MultiplicativeSolver(IntegerMatrix E) : E_(std::move(E)), snf_(smith_normal_form(E_)) {}

  const IntegerMatrix& matrix() const { return E_; }
  const SmithForm& smith() const { return snf_; }

  MultiplicativeSolution<Rational> solve(const std::vector<Rational>& c) const {
    check_size(c.size());
    MultiplicativeSolution<Rational> out;
    const std::size_t m = E_.rows(), n = E_.cols();

    // signs over GF(2)
    std::vector<int> tau(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(c[i]) == 0) fail(ErrorCode::ZeroCoefficient, "zero target");
      tau[i] = sgn(c[i]) < 0;
    }
    auto sigma = solve_mod2(tau);
    if (!sigma) {
      out.unsolvable = UnsolvableCertificate{{}, 2, "sign pattern of the targets is not reachable (mod 2 obstruction)"};
      return out;
    }

    std::vector<Integer> parts;
    for (const auto& v : c) {
      parts.push_back(abs(v.get_num()));
      parts.push_back(v.get_den());
    }
    const auto base = detail::coprime_base(parts);
    std::vector<Rational> x(n, Rational(1));
    for (std::size_t j = 0; j < n; ++j)
      if ((*sigma)[j]) x[j] = -1;
    for (const auto& b : base) {
      std::vector<Integer> e(m);
      for (std::size_t i = 0; i < m; ++i) {
        Integer num = abs(c[i].get_num()), den = c[i].get_den();
        e[i] = detail::valuation(num, b) - detail::valuation(den, b);
      }
      std::vector<Integer> y;
      if (auto cert = integer_solve(e, y)) {
        cert->what += " (base factor " + b.get_str() + ")";
        out.unsolvable = cert;
        return out;
      }
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(y[j]) != 0) {
          Rational p(1);
          mpz_pow_ui(p.get_num_mpz_t(), b.get_mpz_t(), Integer(abs(y[j])).get_ui());
          x[j] *= sgn(y[j]) > 0 ? p : Rational(1 / p);
        }
    }
    out.x = std::move(x);
    return out;
  }

  MultiplicativeSolution<Complex> solve(const std::vector<Complex>& c, double tol = 1e-7) const {
    check_size(c.size());
    MultiplicativeSolution<Complex> out;
    const std::size_t m = E_.rows(), n = E_.cols();
    std::vector<Complex> L(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (c[i] == Complex(0.0, 0.0)) fail(ErrorCode::ZeroCoefficient, "zero target");
      L[i] = std::log(c[i]);
    }
    // Left-kernel rows of U fix the 2 pi i shifts: (U (L + 2 pi i k))_r = 0 for r >= rank.
    std::vector<Integer> kprime(m);
    for (std::size_t r = snf_.rank; r < m; ++r) {
      Complex w(0.0, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        if (sgn(snf_.U(r, i)) != 0) w += snf_.U(r, i).get_d() * L[i];
      const double turns = w.imag() / (2 * std::numbers::pi);
      const double k = std::round(turns);
      if (std::abs(w.real()) > tol * std::max(1.0, std::abs(w)) || std::abs(turns - k) > tol) {
        out.unsolvable = UnsolvableCertificate{snf_.U.row(r), 0,
                                               "row combination " + std::to_string(r) + " of the targets is not 1"};
        return out;
      }
      kprime[r] = Integer(static_cast<long>(-k));
    }
    const auto k = snf_.U_inv.apply(kprime);
    Eigen::VectorXd re(m), im(m);
    for (std::size_t i = 0; i < m; ++i) {
      re(i) = L[i].real();
      im(i) = L[i].imag() + 2 * std::numbers::pi * k[i].get_d();
    }
    const auto& qr = factorization();
    const Eigen::VectorXd a = qr.solve(re), t = qr.solve(im);
    out.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.x[j] = std::exp(Complex(a(j), t(j)));
    if (multiplicative_residual(E_, out.x, c) > std::max(tol, 1e-6))
      fail(ErrorCode::Degenerate, "exponent system too ill-conditioned for floating point");
    return out;
  }

 private:
  void check_size(std::size_t m) const {
    if (m != E_.rows()) fail(ErrorCode::Unsolvable, "target length does not match the system");
  }

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>& factorization() const {
    if (!cod_) {
      Eigen::MatrixXd A(E_.rows(), E_.cols());
      for (std::size_t i = 0; i < E_.rows(); ++i)
        for (std::size_t j = 0; j < E_.cols(); ++j) A(i, j) = E_(i, j).get_d();
      cod_.emplace(A);
    }
    return *cod_;
  }

  /// Integer solution of E y = e via the Smith form, or a certificate.
  std::optional<UnsolvableCertificate> integer_solve(const std::vector<Integer>& e, std::vector<Integer>& y) const {
    const auto w = snf_.U.apply(e);
    std::vector<Integer> z(E_.cols());
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (r < snf_.rank) {
        const Integer& d = snf_.D(r, r);
        if (!mpz_divisible_p(w[r].get_mpz_t(), d.get_mpz_t()))
          return UnsolvableCertificate{snf_.U.row(r), d, "row combination " + std::to_string(r) + " needs a " +
                                                            d.get_str() + "-th root"};
        z[r] = w[r] / d;
      } else if (sgn(w[r]) != 0) {
        return UnsolvableCertificate{snf_.U.row(r), 0, "row combination " + std::to_string(r) + " of the targets is not 1"};
      }
    }
    y = snf_.V.apply(z);
    // the kernel part is free; keep exponents small
    if (snf_.rank < E_.cols() && max_abs(y) > 16) {
      if (!kernel_) {
        kernel_.emplace();
        for (std::size_t j = snf_.rank; j < E_.cols(); ++j) kernel_->push_back(snf_.V.column(j));
        detail::lll(*kernel_);
        kernel_gs_ = detail::gram_schmidt(*kernel_);
      }
      detail::size_reduce(y, *kernel_, kernel_gs_);
    }
    return std::nullopt;
  }

  static Integer max_abs(const std::vector<Integer>& v) {
    Integer m = 0;
    for (const auto& x : v) m = std::max(m, Integer(abs(x)));
    return m;
  }

  /// E sigma = tau over GF(2).
  std::optional<std::vector<int>> solve_mod2(const std::vector<int>& tau) const {
    const std::size_t m = E_.rows(), n = E_.cols();
    std::vector<std::vector<char>> A(m, std::vector<char>(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) A[i][j] = mpz_odd_p(E_(i, j).get_mpz_t()) ? 1 : 0;
      A[i][n] = static_cast<char>(tau[i]);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
      std::size_t p = row;
      while (p < m && !A[p][col]) ++p;
      if (p == m) continue;
      std::swap(A[p], A[row]);
      for (std::size_t i = 0; i < m; ++i)
        if (i != row && A[i][col])
          for (std::size_t j = col; j <= n; ++j) A[i][j] ^= A[row][j];
      pivot_col.push_back(col);
      ++row;
    }
    for (std::size_t i = row; i < m; ++i)
      if (A[i][n]) return std::nullopt;
    std::vector<int> sigma(n, 0);
    for (std::size_t r = 0; r < pivot_col.size(); ++r) sigma[pivot_col[r]] = A[r][n];
    return sigma;
  }

  IntegerMatrix E_;
  SmithForm snf_;
  mutable std::optional<Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>> cod_;
  mutable std::optional<std::vector<detail::IntVec>> kernel_;
  mutable std::vector<std::vector<Rational>> kernel_gs_;
};

template <class S>
MultiplicativeSolution<S> solve_multiplicative_system(const MultiplicativeSystem<S>& sys) {
  return MultiplicativeSolver(sys.E).solve(sys.c);
}

}  // namespace dgc
