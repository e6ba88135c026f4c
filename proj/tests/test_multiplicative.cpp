#include <gtest/gtest.h>

#include <random>

#include "dgconn/multiplicative.hpp"

using namespace dgc;
using R = Rational;

namespace {

IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  IntegerMatrix E(m, n);
  std::uniform_int_distribution<int> d(-3, 3);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) E(i, j) = d(rng);
  return E;
}

R random_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> e(-2, 2);
  R x = (rng() & 1) ? R(-1) : R(1);
  for (int p : {2, 3, 5}) x *= ipow(R(p), e(rng));
  return x;
}

std::vector<R> image(const IntegerMatrix& E, const std::vector<R>& x) {
  std::vector<R> c(E.rows(), R(1));
  for (std::size_t i = 0; i < E.rows(); ++i)
    for (std::size_t j = 0; j < E.cols(); ++j) c[i] *= ipow(x[j], E(i, j).get_si());
  return c;
}

bool is_power(const R& v, const Integer& d) {
  if (sgn(v) < 0 && mpz_even_p(d.get_mpz_t())) return false;
  Integer num = abs(v.get_num()), r;
  const unsigned long k = d.get_ui();
  return mpz_root(r.get_mpz_t(), num.get_mpz_t(), k) != 0 &&
         mpz_root(r.get_mpz_t(), v.get_den_mpz_t(), k) != 0;
}

// The certificate must be a genuine obstruction: w E = 0 mod d while prod c^w is not a d-th power
// (or, for d = 0, w E = 0 while prod c^w != 1).
void check_certificate(const IntegerMatrix& E, const std::vector<R>& c, const UnsolvableCertificate& cert) {
  if (cert.combination.empty()) {
    EXPECT_EQ(cert.root, 2);  // sign obstruction
    return;
  }
  R prod(1);
  for (std::size_t i = 0; i < E.rows(); ++i) prod *= ipow(c[i], cert.combination[i].get_si());
  for (std::size_t j = 0; j < E.cols(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < E.rows(); ++i) s += cert.combination[i] * E(i, j);
    if (cert.root == 0) EXPECT_EQ(s, 0);
    else EXPECT_TRUE(mpz_divisible_p(s.get_mpz_t(), cert.root.get_mpz_t()));
  }
  if (cert.root == 0) EXPECT_NE(prod, R(1));
  else EXPECT_FALSE(is_power(prod, cert.root));
}

}  // namespace

TEST(Multiplicative, Identity) {
  IntegerMatrix E(2, 2);
  E(0, 0) = 1;
  E(1, 1) = 1;
  auto s = MultiplicativeSolver(E).solve(std::vector<R>{make_rational(3, 4), R(-5)});
  ASSERT_TRUE(s.solvable());
  EXPECT_EQ(s.x, (std::vector<R>{make_rational(3, 4), R(-5)}));
}

TEST(Multiplicative, Roots) {
  IntegerMatrix E(1, 1);
  E(0, 0) = 2;
  MultiplicativeSolver sv(E);
  auto a = sv.solve(std::vector<R>{R(4)});
  ASSERT_TRUE(a.solvable());
  EXPECT_EQ(a.x[0] * a.x[0], R(4));
  EXPECT_EQ(sv.solve(std::vector<R>{make_rational(36, 49)}).value()[0] * sv.solve(std::vector<R>{make_rational(36, 49)}).value()[0],
            make_rational(36, 49));
  auto b = sv.solve(std::vector<R>{R(2)});
  ASSERT_FALSE(b.solvable());
  EXPECT_EQ(b.unsolvable->root, 2);
  EXPECT_FALSE(sv.solve(std::vector<R>{R(-1)}).solvable());
  try {
    b.value();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsolvable);
  }
  // over C every nonzero target has a square root
  auto c = sv.solve(std::vector<Complex>{Complex(-1.0, 0.0)});
  ASSERT_TRUE(c.solvable());
  EXPECT_NEAR(std::abs(c.x[0] * c.x[0] + 1.0), 0.0, 1e-12);
}

TEST(Multiplicative, Overdetermined) {
  IntegerMatrix E(2, 1);
  E(0, 0) = 1;
  E(1, 0) = 1;
  MultiplicativeSolver sv(E);
  EXPECT_TRUE(sv.solve(std::vector<R>{R(3), R(3)}).solvable());
  auto s = sv.solve(std::vector<R>{R(3), R(5)});
  ASSERT_FALSE(s.solvable());
  EXPECT_EQ(s.unsolvable->root, 0);
  check_certificate(E, {R(3), R(5)}, *s.unsolvable);
  EXPECT_FALSE(sv.solve(std::vector<Complex>{Complex(3.0), Complex(5.0)}).solvable());
  EXPECT_THROW(sv.solve(std::vector<R>{R(1)}), Error);
  EXPECT_THROW(sv.solve(std::vector<R>{R(0), R(0)}), Error);
}

TEST(Multiplicative, RandomSolvableSystems) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    const std::size_t m = 1 + rng() % 20, n = 1 + rng() % 20;
    auto E = random_matrix(rng, m, n);
    std::vector<R> x0(n);
    for (auto& v : x0) v = random_value(rng);
    const auto c = image(E, x0);
    auto s = solve_multiplicative_system(MultiplicativeSystem<R>{E, c});
    ASSERT_TRUE(s.solvable()) << it << ": " << s.unsolvable->what;
    ASSERT_EQ(image(E, s.x), c) << it;
  }
}

TEST(Multiplicative, RandomTargetsVerdicts) {
  std::mt19937_64 rng(11);
  int unsolvable = 0, solvable = 0;
  for (int it = 0; it < 200; ++it) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    auto E = random_matrix(rng, m, n);
    std::vector<R> c(m);
    for (auto& v : c) v = random_value(rng);
    auto s = MultiplicativeSolver(E).solve(c);
    if (s.solvable()) {
      ++solvable;
      EXPECT_EQ(image(E, s.x), c);
    } else {
      ++unsolvable;
      check_certificate(E, c, *s.unsolvable);
    }
  }
  EXPECT_GT(unsolvable, 20);
  EXPECT_GT(solvable, 5);
}

TEST(Multiplicative, BruteForceAgreement) {
  // 1x1 and 2x2 systems over powers of 2 with signs: search a box of candidate exponents
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-3, 3), t(-4, 4);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 1 + rng() % 2;
    IntegerMatrix E(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) E(i, j) = d(rng);
    std::vector<R> c(n);
    for (auto& v : c) v = ipow(R(2), t(rng)) * ((rng() & 1) ? R(-1) : R(1));
    bool found = false;
    for (int a = -12; a <= 12 && !found; ++a)
      for (int b = (n == 2 ? -12 : 0); b <= (n == 2 ? 12 : 0) && !found; ++b)
        for (int signs = 0; signs < (1 << n) && !found; ++signs) {
          std::vector<R> x{ipow(R(2), a) * ((signs & 1) ? R(-1) : R(1))};
          if (n == 2) x.push_back(ipow(R(2), b) * ((signs & 2) ? R(-1) : R(1)));
          found = image(E, x) == c;
        }
    auto s = MultiplicativeSolver(E).solve(c);
    if (found) {
      EXPECT_TRUE(s.solvable()) << it;
    }
    if (s.solvable()) {
      EXPECT_EQ(image(E, s.x), c);
    } else {
      EXPECT_FALSE(found);
      check_certificate(E, c, *s.unsolvable);
    }
  }
}

TEST(Multiplicative, ComplexRandomSystems) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mod(0.5, 2.0), ph(-3.0, 3.0);
  for (int it = 0; it < 100; ++it) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    auto E = random_matrix(rng, m, n);
    std::vector<Complex> x0(n), c(m, Complex(1.0));
    for (auto& v : x0) v = std::polar(mod(rng), ph(rng));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i] *= ipow(x0[j], E(i, j).get_si());
    auto s = MultiplicativeSolver(E).solve(c);
    ASSERT_TRUE(s.solvable()) << it;
    EXPECT_LT(multiplicative_residual(E, s.x, c), 1e-9);
  }
}

TEST(CoprimeBase, Factorization) {
  auto b = detail::coprime_base({Integer(12), Integer(18), Integer(8)});
  EXPECT_EQ(b, (std::vector<Integer>{2, 3}));
  EXPECT_EQ(detail::coprime_base({Integer(36)}), (std::vector<Integer>{6}));
}
