#include <gtest/gtest.h>

#include <random>

#include "dgconn/curvature.hpp"
#include "dgconn/holonomy.hpp"
#include "dgconn/multiplicative.hpp"

using namespace dgc;
using R = Rational;

namespace {

IntegerMatrix coboundary_exponents(const SimplicialComplex& K) {
  auto B = boundary_matrix(K, 2);
  IntegerMatrix E(B.cols(), B.rows());
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) E(j, i) = B(i, j);
  return E;
}

Word random_word(std::mt19937_64& rng, int n, int max_len) {
  Word w;
  const int len = 1 + static_cast<int>(rng() % max_len);
  for (int k = 0; k < len; ++k) w.push(static_cast<int>(rng() % n));
  return w;
}

}  // namespace

TEST(Word, ParseAndPrint) {
  auto w = parse_word("a0^3 a1^2 a1", 3);
  EXPECT_EQ(w.letters, (std::vector<std::pair<int, int>>{{1, 3}, {0, 3}}));
  EXPECT_EQ(w.str(), "a0^3 a1^3");
  EXPECT_EQ(w.length(), 6u);
  EXPECT_EQ(parse_word("a2 a0", 3).expanded(), (std::vector<int>{0, 2}));
  EXPECT_EQ(parse_word("", 2).length(), 0u);
  for (auto bad : {"b0", "a3", "a0^0", "a0^x", "a-1", "a"}) EXPECT_THROW(parse_word(bad, 3), Error) << bad;
}

TEST(Word, Composition) {
  auto a = parse_word("a0^2", 2), b = parse_word("a1 a0", 2);
  EXPECT_EQ((a * b).str(), "a0^2 a1 a0");
  EXPECT_EQ((b * a).str(), "a1 a0^3");
}

TEST(Permutation, Basics) {
  auto t = Permutation::transposition(4, 1, 3);
  EXPECT_TRUE((t * t).is_identity());
  EXPECT_EQ(t.sign(), -1);
  EXPECT_EQ(t.apply(std::vector<int>{10, 11, 12, 13}), (std::vector<int>{10, 13, 12, 11}));
  Permutation c{{1, 2, 0}};
  EXPECT_TRUE((c * c.inverse()).is_identity());
  EXPECT_EQ(c.sign(), 1);
}

TEST(ThickPath, StarWordMatchesCurvature) {
  auto K = catalog("sphere3");
  auto mu = random_connection<R>(K, 11);
  for (const auto& sigma : K.simplices(1)) {
    auto st = star_cycle(K, sigma);
    for (long p = 0; p < static_cast<long>(st.m()); ++p) {
      Vertices slots = sigma;
      slots.push_back(st.rim_vertex(p));
      Word w;
      w.push(2, static_cast<int>(st.m()));
      auto k = thick_path_from_word(K, slots, w);
      ASSERT_TRUE(k.closed());
      auto h = holonomy(mu, k);
      EXPECT_TRUE(h.P->is_identity());
      EXPECT_EQ(h.K, curvature_operator(mu, st, p).K);
    }
  }
}

TEST(ThickPath, WordBuilt) {
  auto K = catalog("sphere3");
  auto k = thick_path_from_word(K, {0, 1, 2}, parse_word("a0^3", 3));
  EXPECT_TRUE(k.closed());
  EXPECT_TRUE(k.composable(K));
  EXPECT_TRUE(check_thick_path(K, k));
  EXPECT_EQ(k.length(), 3u);
  auto e = empty_thick_path(K, {0, 1, 2});
  EXPECT_EQ(e.length(), 0u);
  EXPECT_TRUE(e.closed());
}

TEST(Holonomy, Homomorphism) {
  auto K = catalog("sphere3");
  auto mu = random_connection<R>(K, 11);
  auto pool = composable_paths(K, {0, 1, 2}, 7, 200);
  ASSERT_GE(pool.size(), 20u);
  std::mt19937_64 rng(1);
  for (int it = 0; it < 100; ++it) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    auto ab = concatenate(K, a, b);
    ASSERT_TRUE(ab.composable(K));
    EXPECT_EQ(holonomy(mu, ab).full(), holonomy(mu, b).full() * holonomy(mu, a).full());
  }
}

TEST(Holonomy, DeterminantFormula) {
  for (auto name : {"sphere3", "torus7"}) {
    auto K = catalog(name);
    auto mu = random_connection<R>(K, 4);
    Vertices slots = K.facet(0);
    slots.pop_back();
    for (const auto& k : composable_paths(K, slots, 8, 100)) {
      R prod = 1;
      for (const auto& ap : angle_paths(k))
        for (std::size_t s = 0; s < ap.facets.size(); ++s) prod *= -mu(ap.facets[s], ap.vertices[s], ap.vertices[s + 1]);
      const R sign = (k.length() % 2) ? R(-1) : R(1);
      EXPECT_EQ(holonomy(mu, k).K.determinant(), sign * prod) << name;
    }
  }
}

TEST(Holonomy, GaugeConjugation) {
  auto K = catalog("sphere3");
  auto mu = random_connection<R>(K, 11);
  auto h = random_gauge<R>(K, 3);
  auto mg = apply_gauge(mu, h);
  for (const auto& k : composable_paths(K, {0, 1, 2}, 7, 100)) {
    std::vector<R> d;
    for (int v : k.initial()) d.push_back(h[v]);
    auto H = Matrix<R>::diagonal(d);
    EXPECT_EQ(holonomy(mg, k).K, H.diagonal_inverse() * holonomy(mu, k).K * H);
  }
}

TEST(Holonomy, CocycleTwist) {
  auto K = catalog("torus7");
  auto H1 = homology_basis(K, 1);
  auto E0 = coboundary_exponents(K);
  auto gens = framed_generators(K, H1.free_cycles);
  const std::size_t m0 = E0.rows(), n = E0.cols();
  IntegerMatrix E(m0 + gens.size(), n);
  for (std::size_t i = 0; i < m0; ++i)
    for (std::size_t j = 0; j < n; ++j) E(i, j) = E0(i, j);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const auto& v = gens[g].vertices;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      auto e = oriented_edge(K, v[k], v[k + 1]);
      E(m0 + g, e.index) += e.sign;
    }
  }
  std::vector<Complex> c(m0, Complex(1));
  c.push_back(Complex(2.0, 0.5));
  c.push_back(Complex(0.3, -1.1));
  EdgeCochain<Complex> delta(K);
  delta.values = MultiplicativeSolver(E).solve(c).value();

  auto mu = random_connection<Complex>(K, 7);
  auto tw = twist(mu, delta);
  Vertices slots = K.facet(0);
  slots.pop_back();
  auto paths = composable_paths(K, slots, 9, 400);
  ASSERT_GE(paths.size(), 16u);
  int nontrivial = 0;
  for (const auto& k : paths) {
    auto A = holonomy(mu, k).full(), B = holonomy(tw, k).full();
    auto [C, h0] = twist_factor(k, delta);
    if (std::abs(C - 1.0) > 1e-9) ++nontrivial;
    auto H = Matrix<Complex>::diagonal(h0);
    auto expect = H.diagonal_inverse() * A * H;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) expect(i, j) /= C;
    EXPECT_TRUE(expect.approx_equal(B, 1e-9));
    EXPECT_NEAR(std::abs(B.determinant() / A.determinant() - 1.0 / (C * C)), 0.0, 1e-9);
  }
  EXPECT_GT(nontrivial, 0);
}

TEST(Canonical, PermutationHolonomy) {
  auto K = catalog("sphere3");
  auto can = canonical_connection<R>(K);
  std::mt19937_64 rng(2);
  int closed = 0;
  for (int it = 0; it < 20000 && closed < 100; ++it) {
    auto k = thick_path_from_word(K, {0, 1, 2}, random_word(rng, 3, 10));
    if (!k.closed()) continue;
    ++closed;
    auto h = holonomy(can, k);
    auto cp = canonical_holonomy(k.word(), *h.P);
    for (int s = 0; s < 3; ++s) {
      std::vector<R> x(3, R(0));
      x[s] = 1;
      ASSERT_EQ(sum_zero_embed(h.K.apply(x)), cp.apply(sum_zero_embed(x)));
    }
  }
  EXPECT_EQ(closed, 100);
}

TEST(Canonical, ColoringFollowsHolonomy) {
  auto K = catalog("sphere3");
  auto can = canonical_connection<R>(K);
  for (const auto& k : composable_paths(K, {0, 1, 2}, 8, 200)) {
    auto col = coloring(k);
    auto cp = canonical_holonomy(k.word(), *holonomy(can, k).P);
    auto expect = cp.apply(std::vector<int>{0, 1, 2, 3});
    expect.pop_back();
    EXPECT_EQ(col.closing_colors, expect);
    // every facet along the path carries all four colors
    for (std::size_t s = 0; s < k.length(); ++s) {
      std::vector<int> c = col.of(k.faces[s]);
      c.push_back(col.colors.at(k.added[s]));
      std::sort(c.begin(), c.end());
      if (col.consistent()) {
        EXPECT_EQ(c, (std::vector<int>{0, 1, 2, 3}));
      }
    }
  }
}

TEST(Canonical, TetrahedronColoring) {
  auto K = catalog("sphere3");
  auto k = thick_path_from_word(K, {0, 1, 2}, parse_word("a1", 3));
  auto col = coloring(k);
  ASSERT_TRUE(col.consistent());
  const auto& T = K.facet(k.first_facet);
  std::vector<int> c;
  for (int v : T) c.push_back(col.colors.at(v));
  std::sort(c.begin(), c.end());
  EXPECT_EQ(c, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Canonical, StarColoringIsPathDependent) {
  auto K = catalog("sphere3");
  auto k = thick_path_from_word(K, {0, 1, 2}, parse_word("a0^3", 3));
  auto col = coloring(k);
  EXPECT_FALSE(col.consistent());
  EXPECT_EQ(col.closing_colors, (std::vector<int>{3, 1, 2}));
  auto e = coloring(empty_thick_path(K, {0, 1, 2}));
  EXPECT_EQ(e.colors.size(), 3u);
}

TEST(Canonical, SurfaceTetrahedronNeedsFourColors) {
  auto K = catalog("sphere2");
  auto col = coloring(thick_path_from_word(K, {0, 1}, parse_word("a0^2 a1 a0^3 a1^2", 2)));
  EXPECT_EQ(col.colors.size(), 4u);
  EXPECT_FALSE(col.consistent());
}
