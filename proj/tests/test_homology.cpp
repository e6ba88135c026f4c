#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dgconn/homology.hpp"

using namespace dgc;

namespace {

bool is_zero(const std::vector<Integer>& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return sgn(x) == 0; });
}

IntegerMatrix product(const SmithForm& s, const IntegerMatrix& M) { return s.U * M * s.V; }

}  // namespace

TEST(Smith, Trivial) {
  IntegerMatrix A(1, 1);
  A(0, 0) = 2;
  auto s = smith_normal_form(A);
  EXPECT_EQ(s.D(0, 0), 2);
  EXPECT_EQ(s.rank, 1u);

  IntegerMatrix Z(2, 2);
  auto z = smith_normal_form(Z);
  EXPECT_EQ(z.rank, 0u);
  EXPECT_EQ(z.U, IntegerMatrix::identity(2));
  EXPECT_EQ(z.V, IntegerMatrix::identity(2));
}

TEST(Smith, RandomMatricesFactor) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> u(-3, 3), dim(1, 9);
  for (int it = 0; it < 200; ++it) {
    const int m = dim(rng), n = dim(rng);
    IntegerMatrix A(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = u(rng);
    auto s = smith_normal_form(A);
    ASSERT_EQ(product(s, A), s.D);
    EXPECT_EQ(s.U * s.U_inv, IntegerMatrix::identity(m));
    EXPECT_EQ(s.V * s.V_inv, IntegerMatrix::identity(n));
    for (std::size_t i = 0; i < s.rank; ++i) {
      EXPECT_GT(s.D(i, i), 0);
      if (i + 1 < s.rank) {
        EXPECT_TRUE(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
      }
    }
  }
}

TEST(Smith, TorusBoundaryRank) {
  auto s = smith_normal_form(boundary_matrix(catalog("torus7"), 1));
  EXPECT_EQ(s.rank, 6u);
  for (std::size_t i = 0; i < s.rank; ++i) EXPECT_EQ(s.D(i, i), 1);
}

TEST(Homology, StandardGroups) {
  auto t = homology_basis(catalog("torus7"), 1);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_TRUE(t.torsion_orders.empty());

  auto rp = homology_basis(catalog("rp2_6"), 1);
  EXPECT_EQ(rp.rank(), 0u);
  ASSERT_EQ(rp.torsion_orders.size(), 1u);
  EXPECT_EQ(rp.torsion_orders[0], 2);

  EXPECT_EQ(homology_basis(catalog("sphere3"), 1).rank(), 0u);
  EXPECT_EQ(homology_basis(catalog("torus3d"), 1).rank(), 3u);
  EXPECT_EQ(homology_basis(catalog("genus2"), 1).rank(), 4u);
  EXPECT_EQ(homology_basis(catalog("torus3d"), 2).rank(), 3u);
  EXPECT_EQ(homology_basis(catalog("rp2_6"), 2).rank(), 0u);
  EXPECT_EQ(homology_basis(catalog("torus7"), 2).rank(), 1u);
}

TEST(Homology, CyclesAndTorsionChains) {
  for (auto name : {"torus7", "rp2_6", "genus2", "torus3d"}) {
    auto K = catalog(name);
    auto H = homology_basis(K, 1);
    auto d1 = boundary_matrix(K, 1), d2 = boundary_matrix(K, 2);
    for (const auto& z : H.free_cycles) EXPECT_TRUE(is_zero(d1.apply(z))) << name;
    for (std::size_t s = 0; s < H.torsion_orders.size(); ++s) {
      EXPECT_TRUE(is_zero(d1.apply(H.torsion_cycles[s])));
      auto bd = d2.apply(H.torsion_bounding[s]);
      for (std::size_t e = 0; e < bd.size(); ++e) EXPECT_EQ(bd[e], H.torsion_orders[s] * H.torsion_cycles[s][e]);
    }
  }
}

TEST(Homology, ClassifyGenerators) {
  auto K = catalog("torus3d");
  auto H = homology_basis(K, 1);
  for (std::size_t k = 0; k < H.rank(); ++k) {
    auto c = H.classify(H.free_cycles[k]);
    for (std::size_t j = 0; j < c.size(); ++j) EXPECT_EQ(c[j], j == k ? 1 : 0);
  }
  // a triangle boundary is null-homologous
  auto tri = K.simplices(2)[0];
  auto c = H.classify(path_chain(K, {tri[0], tri[1], tri[2], tri[0]}));
  EXPECT_TRUE(is_zero(c));
}

TEST(Homology, FramedPaths) {
  auto K = catalog("torus7");
  auto H = homology_basis(K, 1);
  for (const auto& z : H.free_cycles) {
    auto v = cycle_to_path(K, z);
    auto p = frame_path(K, v);
    EXPECT_EQ(p.length(), v.size() - 1);
    EXPECT_NO_THROW(check_framing(K, p));
    EXPECT_EQ(path_chain(K, v), z);
  }
  EXPECT_EQ(frame_path(K, {3}).length(), 0u);

  auto S = catalog("sphere2");
  auto tri = frame_path(S, {0, 1, 2, 0});
  EXPECT_EQ(tri.length(), 3u);
  EXPECT_THROW(frame_path(S, {0, 1, 2}), Error);
}

TEST(Homology, FramedChains) {
  auto S = catalog("sphere3");
  // boundary of the tetrahedron [0,1,2,3] as a 2-chain
  auto d3 = boundary_matrix(S, 3);
  const auto t = *S.index_of({0, 1, 2, 3});
  Chain c(S.count(2));
  for (std::size_t f = 0; f < S.count(2); ++f) c[f] = d3(f, t);
  EXPECT_EQ(frame_chain2(S, c).triangles.size(), 4u);
  EXPECT_TRUE(frame_chain2(S, Chain(S.count(2))).triangles.empty());

  auto rp = orient(catalog("rp2_6"));
  const auto& C = *rp.cover->complex;
  auto H2 = homology_basis(C, 2);
  ASSERT_EQ(H2.rank(), 1u);
  EXPECT_EQ(frame_chain2(C, H2.free_cycles[0]).triangles.size(), 20u);
}

TEST(Homology, FramedPathIo) {
  auto K = catalog("torus7");
  auto H = homology_basis(K, 1);
  auto p = frame_path(K, cycle_to_path(K, H.free_cycles[0]));
  std::istringstream in(write_framed_path(p));
  EXPECT_EQ(read_framed_path(in), p);
}
