#include <gtest/gtest.h>

#include <random>

#include "dgconn/reconstruct.hpp"

using namespace dgc;

namespace {

struct RoundTrip {
  int fails = 0;
  double worst = 0.0;
};

RoundTrip round_trip(const std::string& name, int seeds, std::uint64_t base) {
  auto K = catalog(name);
  auto H1 = homology_basis(K, 1), H2 = homology_basis(K, 2);
  RoundTrip out;
  for (int s = 0; s < seeds; ++s) {
    auto mu = random_connection<Complex>(K, base + s);
    ReconstructOptions o;
    o.h2 = &H2;
    auto r = reconstruct(K, invariant_data(mu, H1), o);
    auto g = gauge_equivalent(mu, r.mu, H1, 1e-9);
    if (!g.equivalent || !r.report.all_pass()) ++out.fails;
    out.worst = std::max(out.worst, g.max_rel_error);
  }
  return out;
}

Connection<Complex> flat_connection(const SimplicialComplex& K, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> mod(0.5, 2.0), ph(-3.0, 3.0);
  std::vector<VertexFunction<Complex>> psi(2, VertexFunction<Complex>(K.num_vertices()));
  for (auto& f : psi)
    for (auto& v : f) v = std::polar(mod(rng), ph(rng));
  return connection_from_solutions(K, psi);
}

EdgeCochain<Complex> planted_cocycle(const SimplicialComplex& K, const HomologyBasis& H1, std::vector<Complex> hol) {
  auto gens = framed_generators(K, H1.free_cycles);
  auto E = detail::coboundary_rows(K, gens.size());
  std::vector<Complex> c(K.count(2), Complex(1.0));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    detail::add_path_row(K, E, K.count(2) + g, gens[g].vertices);
    c.push_back(hol[g]);
  }
  EdgeCochain<Complex> d(K);
  d.values = MultiplicativeSolver(E).solve(c).value();
  return d;
}

}  // namespace

TEST(Reconstruct, RoundTripSurfaces) {
  for (auto name : {"sphere2", "torus7", "genus2", "rp2_6"}) {
    auto r = round_trip(name, 20, 1000);
    EXPECT_EQ(r.fails, 0) << name;
    EXPECT_LT(r.worst, 1e-9) << name;
  }
}

TEST(Reconstruct, RoundTripThreeManifolds) {
  for (auto name : {"sphere3", "torus3d"}) {
    auto r = round_trip(name, 5, 2000);
    EXPECT_EQ(r.fails, 0) << name;
    EXPECT_LT(r.worst, 1e-9) << name;
  }
}

TEST(Reconstruct, Canonical) {
  for (auto name : {"sphere2", "torus7", "sphere3"}) {
    auto K = catalog(name);
    auto H1 = homology_basis(K, 1);
    auto can = canonical_connection<Complex>(K);
    auto r = reconstruct(K, invariant_data(can, H1));
    EXPECT_TRUE(gauge_equivalent(can, r.mu, H1, 1e-9).equivalent) << name;
  }
}

TEST(Reconstruct, ReportSteps) {
  auto K = catalog("torus7");
  auto H1 = homology_basis(K, 1);
  auto r = reconstruct_2d(K, invariant_data(random_connection<Complex>(K, 3), H1));
  std::vector<std::string> names;
  for (const auto& s : r.report.steps) names.push_back(s.step);
  for (auto want : {"relations", "sqrt", "cocycle", "exactness", "solve", "validate", "forward"})
    EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
  std::istringstream lines(r.report.jsonl());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("step"));
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_LT(j["residual"].get<double>(), 1e-9);
    ++count;
  }
  EXPECT_EQ(count, r.report.steps.size());

  auto K3 = catalog("sphere3");
  auto r3 = reconstruct_nd(K3, invariant_data(random_connection<Complex>(K3, 3), homology_basis(K3, 1)));
  EXPECT_EQ(r3.report.steps[1].step, "propagate");
}

TEST(Reconstruct, InconsistentInvariants) {
  auto K = catalog("torus7");
  auto H1 = homology_basis(K, 1);
  auto inv = invariant_data(random_connection<Complex>(K, 5), H1);
  inv.rho.values[3][0] *= 2.0;
  try {
    reconstruct(K, inv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentInvariants);
  }
  ReconstructOptions o;
  o.check_relations = false;
  try {
    reconstruct(K, inv, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CocycleNotExact);
  }
}

TEST(Reconstruct, RejectsRationalLikeMismatch) {
  auto K = catalog("sphere3");
  auto inv = invariant_data(random_connection<Complex>(K, 5), homology_basis(K, 1));
  inv.rho.values[0][1] *= Complex(0.0, 1.0);
  EXPECT_THROW(reconstruct(K, inv), Error);
}

TEST(Reconstruct, TwistLoopGivesTwistFactor) {
  auto K = catalog("torus7");
  auto H1 = homology_basis(K, 1);
  auto d = planted_cocycle(K, H1, {Complex(1.3, -0.2), Complex(0.4, 0.9)});
  Vertices slots = K.facet(0);
  slots.pop_back();
  int nontrivial = 0;
  for (const auto& k : composable_paths(K, slots, 9, 100)) {
    auto loop = twist_loop(k);
    EXPECT_EQ(loop.front(), slots[0]);
    EXPECT_EQ(loop.back(), slots[0]);
    Complex along(1.0);
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) along *= d(loop[i], loop[i + 1]);
    const Complex C = twist_factor(k, d).first;
    EXPECT_NEAR(std::abs(C * along - 1.0), 0.0, 1e-9);
    if (std::abs(C - 1.0) > 1e-6) ++nontrivial;
  }
  EXPECT_GT(nontrivial, 0);
}

TEST(NormalizeSl, UnitDeterminants) {
  auto K = catalog("torus7");
  auto H1 = homology_basis(K, 1);
  auto mu = twist(flat_connection(K, 3), planted_cocycle(K, H1, {Complex(1.7, 0.4), Complex(0.6, 0.0)}));
  auto r = normalize_sl(mu, H1);
  EXPECT_EQ(r.paths.size(), 2u);
  for (const auto& d : r.det_after) EXPECT_NEAR(std::abs(d - 1.0), 0.0, 1e-9);
  Vertices slots = K.facet(0);
  slots.pop_back();
  double worst = 0.0, worst_before = 0.0;
  for (const auto& k : composable_paths(K, slots, 10, 500)) {
    worst = std::max(worst, std::abs(holonomy(r.mu, k).full().determinant() - 1.0));
    worst_before = std::max(worst_before, std::abs(holonomy(mu, k).full().determinant() - 1.0));
  }
  EXPECT_LT(worst, 1e-9);
  EXPECT_GT(worst_before, 1e-3);
  EXPECT_LT(max_rel_error(normalize_sl(r.mu, H1).mu, r.mu), 1e-9);

  // the cocycle changes holonomy only by the scalar C and conjugation, so the SL representatives agree
  // up to sign in the trace
  auto base = normalize_sl(flat_connection(K, 3), H1);
  for (const auto& k : composable_paths(K, slots, 8, 100)) {
    const auto a = holonomy(base.mu, k).full(), b = holonomy(r.mu, k).full();
    const Complex ta = a(0, 0) + a(1, 1), tb = b(0, 0) + b(1, 1);
    EXPECT_NEAR(std::abs(ta * ta - tb * tb), 0.0, 1e-8 * std::max(1.0, std::abs(ta * ta)));
  }
}

TEST(NormalizeSl, Preconditions) {
  auto K = catalog("torus7");
  auto H1 = homology_basis(K, 1);
  try {
    normalize_sl(random_connection<Complex>(K, 1), H1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotLocallyFlat);
  }
  auto K3 = catalog("sphere3");
  EXPECT_THROW(normalize_sl(canonical_connection<Complex>(K3), homology_basis(K3, 1)), Error);
}

TEST(TwoCochainValues, Orientation) {
  auto K = catalog("sphere2");
  TwoCochain<Complex> w(K);
  w.values[0] = Complex(2.0, 0.0);
  const auto& t = K.simplices(2)[0];
  EXPECT_EQ(w(t[0], t[1], t[2]), Complex(2.0, 0.0));
  EXPECT_EQ(w(t[1], t[0], t[2]), Complex(0.5, 0.0));
  EXPECT_EQ(w(t[1], t[2], t[0]), Complex(2.0, 0.0));
}
