#include <gtest/gtest.h>

#include <random>

#include "dgconn/curvature.hpp"

using namespace dgc;
using R = Rational;

namespace {

std::vector<VertexFunction<R>> random_solutions(const SimplicialComplex& K, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 9);
  std::vector<VertexFunction<R>> psi(count);
  for (auto& f : psi)
    for (std::size_t v = 0; v < K.num_vertices(); ++v) f.push_back(make_rational(num(rng), den(rng)));
  return psi;
}

// alpha_{q,p} by expanding the product of step matrices
R alpha_direct(const Connection<R>& mu, const EdgeStar& st, long p, int q) {
  const long m = static_cast<long>(st.m());
  R sum = 0;
  for (long k = 0; k < m; ++k) {
    R pr = 1;
    for (long j = 0; j < k; ++j) pr *= mu(st.facet(p - j), st.rim_vertex(p - j - 1), st.rim_vertex(p - j));
    sum += pr * mu(st.facet(p - k), q, st.rim_vertex(p - k));
  }
  return sum;
}

}  // namespace

TEST(Curvature, SolutionConnectionIsFlat) {
  auto T = catalog("torus7");
  std::vector<VertexFunction<R>> psi(2);
  for (int v = 0; v < 7; ++v) {
    psi[0].push_back(R(v + 1));
    psi[1].push_back(R((v + 1) * (v + 1)));
  }
  auto mu = connection_from_solutions(T, psi);
  for (const auto& sigma : T.simplices(0))
    for (long p = 0; p < 3; ++p) {
      auto op = curvature_operator(mu, sigma, p);
      EXPECT_TRUE(op.flat);
      EXPECT_TRUE(op.unimodular);
    }
  auto S = catalog("sphere3");
  auto nu = connection_from_solutions(S, random_solutions(S, 3, 5));
  for (const auto& sigma : S.simplices(1)) EXPECT_TRUE(curvature_operator(nu, sigma, 0).flat);
}

TEST(Curvature, CanonicalCorners) {
  auto K = catalog("sphere3");
  auto mu = canonical_connection<R>(K);
  auto st = star_cycle(K, Vertices{0, 1});
  ASSERT_EQ(st.m(), 3u);
  auto op = curvature_operator(mu, st, 0);
  auto P = op.steps[2] * op.steps[1] * op.steps[0];
  EXPECT_EQ(op.K, P);
  EXPECT_EQ(op.mu_sigma, P.determinant());
  EXPECT_EQ(op.mu_sigma, R(-1));
  EXPECT_FALSE(op.unimodular);
  EXPECT_EQ(corner_product(op), R(1));
  auto cr = curvature_from_rho(rho_minimal(mu), st);
  EXPECT_EQ(cr.mu_sigma, R(-1));
  for (const auto& row : cr.alpha_star)
    for (const auto& v : row) EXPECT_EQ(v, R(1));  // 1 - 1 + 1
  for (const auto& row : rho_from_curvature(cr.alpha_star, cr.mu_sigma, st))
    for (const auto& v : row) EXPECT_EQ(v, R(1));
}

TEST(Curvature, StepMatrixShape) {
  auto K = catalog("sphere3");
  auto mu = random_connection<R>(K, 2);
  auto st = star_cycle(K, K.simplices(1)[0]);
  auto A = step_matrix(mu, st, 0);
  ASSERT_EQ(A.rows(), 3u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(A(i, j), i == j ? R(1) : R(0));
  EXPECT_EQ(A(2, 2), mu(st.facet(1), st.rim_vertex(0), st.rim_vertex(1)));
}

TEST(Curvature, AgreesWithInvariantFormulas) {
  for (auto name : {"torus7", "sphere3", "torus3d"}) {
    auto K = catalog(name);
    for (int seed = 0; seed < 5; ++seed) {
      auto mu = random_connection<R>(K, seed);
      auto rho = rho_minimal(mu);
      for (const auto& sigma : K.simplices(K.dim() - 2)) {
        auto st = star_cycle(K, sigma);
        const long m = static_cast<long>(st.m());
        auto as = alpha_star_all(mu, st);
        auto cr = curvature_from_rho(rho, st);
        auto op0 = curvature_operator(mu, st, 0);
        ASSERT_EQ(cr.mu_sigma, op0.mu_sigma) << name;
        ASSERT_EQ(cr.alpha_star, as) << name;
        EXPECT_EQ(corner_product(op0), (m % 2) ? R(-op0.mu_sigma) : op0.mu_sigma);
        for (long p = 0; p < m; ++p) {
          auto op = curvature_operator(mu, st, p);
          EXPECT_EQ(op.mu_sigma, op0.mu_sigma);
          for (std::size_t q = 0; q < sigma.size(); ++q) {
            EXPECT_EQ(op.alpha[q], alpha_direct(mu, st, p, sigma[q]));
            const R Rp = star_rho(rho, st, p, sigma[q]);
            EXPECT_EQ(as[st.mod(p + 1)][q], R(1) - Rp * as[p][q] - op.mu_sigma);
          }
        }
      }
    }
  }
}

TEST(Curvature, RecoversRho) {
  int recovered = 0;
  for (auto name : {"torus7", "sphere3"}) {
    auto K = catalog(name);
    for (int seed = 0; seed < 5; ++seed) {
      auto mu = random_connection<R>(K, seed);
      auto rho = rho_minimal(mu);
      for (const auto& sigma : K.simplices(K.dim() - 2)) {
        auto st = star_cycle(K, sigma);
        auto rr = rho_from_curvature(alpha_star_all(mu, st), curvature_operator(mu, st, 0).mu_sigma, st);
        for (long p = 0; p < static_cast<long>(st.m()); ++p)
          for (std::size_t q = 0; q < sigma.size(); ++q) {
            EXPECT_EQ(rr[p][q], rho.adjacent(st.facet(p), st.facet(p + 1), st.rim_vertex(p), sigma[q]));
            ++recovered;
          }
      }
    }
  }
  EXPECT_GT(recovered, 0);
}

TEST(Curvature, GaugeConjugates) {
  auto K = catalog("sphere3");
  auto mu = random_connection<R>(K, 6);
  auto h = random_gauge<R>(K, 7);
  auto mg = apply_gauge(mu, h);
  for (const auto& sigma : K.simplices(1)) {
    auto a = curvature_operator(mu, sigma, 1), b = curvature_operator(mg, sigma, 1);
    EXPECT_EQ(a.mu_sigma, b.mu_sigma);
    std::vector<R> d;
    for (int v : sigma) d.push_back(h[v]);
    d.push_back(h[a.star.rim_vertex(1)]);
    auto H = Matrix<R>::diagonal(d);
    EXPECT_EQ(b.K, H.diagonal_inverse() * a.K * H);
  }
}

TEST(Curvature, DegenerateAlphaStar) {
  auto K = catalog("sphere3");
  auto st = star_cycle(K, K.simplices(1)[0]);
  std::vector<std::vector<R>> zero(st.m(), std::vector<R>(2, R(0)));
  try {
    rho_from_curvature(zero, R(1), st);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Degenerate);
  }
}

TEST(Curvature, WrongDimension) {
  auto K = catalog("sphere3");
  auto mu = canonical_connection<R>(K);
  EXPECT_THROW(curvature_operator(mu, Vertices{0}, 0), Error);
}

TEST(Curvature, LineFormat) {
  auto K = catalog("sphere2");
  auto op = curvature_operator(canonical_connection<R>(K), Vertices{0}, 0);
  EXPECT_EQ(curvature_line(op), "sigma 0 m=3 mu=-1/1 flat=0 unimodular=0");
}
