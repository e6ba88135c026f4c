#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dgconn/complex.hpp"
#include "dgconn/connection.hpp"
#include "dgconn/error.hpp"
#include "dgconn/homology.hpp"
#include "dgconn/scalar.hpp"

namespace dgc {

/// Index of the local pair a < b among k face vertices, lexicographic.
inline std::size_t pair_index(std::size_t k, std::size_t a, std::size_t b) { return a * k - a * (a + 1) / 2 + (b - a - 1); }

/// Minimal rho data: for each (n-1)-face with cofacets (T0, T1) and each vertex pair a < b of the face,
/// rho_ab^{T0 T1} = mu_ab^{T0} mu_ba^{T1}. On an oriented complex T0 induces the positive orientation
/// on the sorted face; otherwise T0 is the lower facet id.
template <class S>
struct RhoData {
  const SimplicialComplex* complex = nullptr;
  std::vector<std::array<std::size_t, 2>> cofacets;  // (T0, T1) per face
  std::vector<std::vector<S>> values;

  RhoData() = default;
  explicit RhoData(const SimplicialComplex& K) : complex(&K) {
    const auto& faces = K.simplices(K.dim() - 1);
    const std::size_t k = K.dim();
    cofacets.resize(faces.size());
    values.assign(faces.size(), std::vector<S>(k * (k - 1) / 2, Field<S>::one()));
    for (std::size_t f = 0; f < faces.size(); ++f) cofacets[f] = ordered_cofacets(K, f);
  }

  static std::array<std::size_t, 2> ordered_cofacets(const SimplicialComplex& K, std::size_t f) {
    auto c = K.cofacets(f);
    if (K.oriented()) {
      if (K.induced_sign_on(c[0], K.simplices(K.dim() - 1)[f]) != 1) std::swap(c[0], c[1]);
    } else if (c[0] > c[1]) {
      std::swap(c[0], c[1]);
    }
    return c;
  }

  const Vertices& face(std::size_t f) const { return complex->simplices(complex->dim() - 1)[f]; }

  /// rho_ij^{T0 T1} on face f (vertex ids, either order).
  S value(std::size_t f, int i, int j) const {
    const auto& v = face(f);
    const std::size_t a = position_of(v, i), b = position_of(v, j);
    if (a == b) return Field<S>::one();
    const S& r = values[f][pair_index(v.size(), std::min(a, b), std::max(a, b))];
    return a < b ? r : Field<S>::inverse(r);
  }

  /// rho_ij^{T T'} for the two cofacets of face f in either order (or T = T').
  S get(std::size_t f, std::size_t T, std::size_t Tp, int i, int j) const {
    if (T == Tp) return Field<S>::one();
    const S r = value(f, i, j);
    if (T == cofacets[f][0] && Tp == cofacets[f][1]) return r;
    if (T == cofacets[f][1] && Tp == cofacets[f][0]) return Field<S>::inverse(r);
    fail(ErrorCode::NoPath, "facets are not the cofacets of face " + std::to_string(f));
  }

  /// rho across the face shared by adjacent facets T, T'.
  S adjacent(std::size_t T, std::size_t Tp, int i, int j) const {
    if (T == Tp) return Field<S>::one();
    return get(shared_face(T, Tp), T, Tp, i, j);
  }

  std::size_t shared_face(std::size_t T, std::size_t Tp) const {
    const auto& K = *complex;
    for (std::size_t pos = 0; pos <= static_cast<std::size_t>(K.dim()); ++pos)
      if (K.neighbor(T, pos) == Tp) return K.face_of_facet(T, pos);
    fail(ErrorCode::NoPath, "facets " + std::to_string(T) + " and " + std::to_string(Tp) + " are not adjacent");
  }
};

template <class S>
RhoData<S> rho_minimal(const Connection<S>& mu) {
  const auto& K = mu.complex();
  RhoData<S> rho(K);
  for (std::size_t f = 0; f < rho.values.size(); ++f) {
    const auto& v = rho.face(f);
    const auto [T0, T1] = rho.cofacets[f];
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b)
        rho.values[f][pair_index(v.size(), a, b)] = mu(T0, v[a], v[b]) * mu(T1, v[b], v[a]);
  }
  return rho;
}

template <class S>
double max_rel_error(const RhoData<S>& a, const RhoData<S>& b) {
  double worst = 0.0;
  for (std::size_t f = 0; f < a.values.size(); ++f)
    for (std::size_t k = 0; k < a.values[f].size(); ++k)
      worst = std::max(worst, Field<S>::rel_error(a.values[f][k], b.values[f][k]));
  return worst;
}

/// rho_ij^{T T'} as a product of minimal values along a facet path inside the star of [ij].
template <class S>
S rho_path(const RhoData<S>& rho, std::size_t T, std::size_t Tp, int i, int j) {
  const auto& K = *rho.complex;
  const Vertices edge{std::min(i, j), std::max(i, j)};
  if (i == j || !contains_all(K.facet(T), edge) || !contains_all(K.facet(Tp), edge))
    fail(ErrorCode::NoPath, "edge not contained in both facets");
  if (T == Tp) return Field<S>::one();
  std::map<std::size_t, std::size_t> parent{{T, T}};
  std::queue<std::size_t> q;
  q.push(T);
  while (!q.empty() && !parent.count(Tp)) {
    const std::size_t t = q.front();
    q.pop();
    const auto& f = K.facet(t);
    for (std::size_t pos = 0; pos < f.size(); ++pos) {
      if (f[pos] == i || f[pos] == j) continue;
      const std::size_t u = K.neighbor(t, pos);
      if (parent.emplace(u, t).second) q.push(u);
    }
  }
  if (!parent.count(Tp)) fail(ErrorCode::NoPath, "facets not joined inside the star of the edge");
  std::vector<std::size_t> chain{Tp};
  while (chain.back() != T) chain.push_back(parent[chain.back()]);
  std::reverse(chain.begin(), chain.end());
  S p = Field<S>::one();
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) p *= rho.adjacent(chain[k], chain[k + 1], i, j);
  return p;
}

/// mu(gamma) = prod over the path of (-mu_{i_k i_{k+1}}^{T_k}).
template <class S>
S framed_holonomy(const Connection<S>& mu, const FramedPath& gamma) {
  check_framing(mu.complex(), gamma);
  S p = Field<S>::one();
  for (std::size_t k = 0; k < gamma.facets.size(); ++k) p *= -mu(gamma.facets[k], gamma.vertices[k], gamma.vertices[k + 1]);
  return p;
}

// ---------------------------------------------------------------------------------------------
// Invariant data

template <class S>
struct InvariantData {
  RhoData<S> rho;
  std::vector<FramedPath> free_paths;
  std::vector<S> free_values;
  std::vector<FramedPath> torsion_paths;
  std::vector<Integer> torsion_orders;
  std::vector<S> torsion_values;
};

/// Framed representatives of a degree-1 homology basis.
inline std::vector<FramedPath> framed_generators(const SimplicialComplex& K, const std::vector<Chain>& cycles) {
  std::vector<FramedPath> out;
  for (const auto& c : cycles) out.push_back(frame_path(K, cycle_to_path(K, c)));
  return out;
}

template <class S>
InvariantData<S> invariant_data(const Connection<S>& mu, const HomologyBasis& H1) {
  if (H1.degree != 1) fail(ErrorCode::MissingHomologyData, "invariant data needs a degree-1 basis");
  const auto& K = mu.complex();
  InvariantData<S> inv;
  inv.rho = rho_minimal(mu);
  inv.free_paths = framed_generators(K, H1.free_cycles);
  inv.torsion_paths = framed_generators(K, H1.torsion_cycles);
  inv.torsion_orders = H1.torsion_orders;
  for (const auto& p : inv.free_paths) inv.free_values.push_back(framed_holonomy(mu, p));
  for (const auto& p : inv.torsion_paths) inv.torsion_values.push_back(framed_holonomy(mu, p));
  return inv;
}

template <class S>
double max_rel_error(const InvariantData<S>& a, const InvariantData<S>& b) {
  double worst = max_rel_error(a.rho, b.rho);
  if (a.free_values.size() != b.free_values.size() || a.torsion_values.size() != b.torsion_values.size())
    return std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.free_values.size(); ++k)
    worst = std::max(worst, Field<S>::rel_error(a.free_values[k], b.free_values[k]));
  for (std::size_t k = 0; k < a.torsion_values.size(); ++k)
    worst = std::max(worst, Field<S>::rel_error(a.torsion_values[k], b.torsion_values[k]));
  return worst;
}

// ---------------------------------------------------------------------------------------------
// Framed 2-chains: pairing of interior edge occurrences

struct EdgeOccurrence {
  int from, to;
  std::size_t facet;
};

struct ChainPairing {
  std::vector<std::pair<EdgeOccurrence, EdgeOccurrence>> interior;  // first runs i->j, second j->i
  std::vector<EdgeOccurrence> boundary;
};

/// Pairs opposite occurrences of each edge in order of appearance; the rest form the boundary.
inline ChainPairing pair_occurrences(const std::vector<EdgeOccurrence>& occ) {
  std::map<std::pair<int, int>, std::vector<EdgeOccurrence>> fwd, bwd;
  for (const auto& o : occ) {
    const auto key = std::minmax(o.from, o.to);
    (o.from < o.to ? fwd : bwd)[{key.first, key.second}].push_back(o);
  }
  ChainPairing p;
  auto keys = fwd;
  for (const auto& [k, v] : bwd) keys[k];
  for (const auto& [k, unused] : keys) {
    (void)unused;
    const auto& f = fwd[k];
    const auto& b = bwd[k];
    const std::size_t n = std::min(f.size(), b.size());
    for (std::size_t s = 0; s < n; ++s) p.interior.push_back({f[s], b[s]});
    for (std::size_t s = n; s < f.size(); ++s) p.boundary.push_back(f[s]);
    for (std::size_t s = n; s < b.size(); ++s) p.boundary.push_back(b[s]);
  }
  return p;
}

inline ChainPairing pair_chain(const SimplicialComplex& K, const FramedTwoChain& w) {
  std::vector<EdgeOccurrence> occ;
  for (const auto& tri : w.triangles) {
    if (tri.facet >= K.num_facets() || !contains_all(K.facet(tri.facet), std::vector<int>(tri.vertices.begin(), tri.vertices.end())))
      fail(ErrorCode::InvalidFraming, "triangle not contained in its framing facet");
    for (int e = 0; e < 3; ++e) occ.push_back({tri.vertices[e], tri.vertices[(e + 1) % 3], tri.facet});
  }
  for (const auto& o : occ)
    if (o.from == o.to) fail(ErrorCode::UnpairedInteriorEdge, "degenerate triangle in chain");
  return pair_occurrences(occ);
}

/// Edge occurrences of a framed path.
inline std::vector<EdgeOccurrence> path_occurrences(const FramedPath& p) {
  std::vector<EdgeOccurrence> occ;
  for (std::size_t k = 0; k < p.facets.size(); ++k) occ.push_back({p.vertices[k], p.vertices[k + 1], p.facets[k]});
  return occ;
}

template <class S>
struct IntegralFormula {
  S lhs, rhs;
};

/// lhs = product over paired interior occurrences of rho_ij^{T_k T_k'} (from rho data alone);
/// rhs = product over the leftover boundary occurrences i->j of (-mu_ji^{T_k}).
template <class S>
IntegralFormula<S> integral_formula(const Connection<S>& mu, const RhoData<S>& rho, const FramedTwoChain& w) {
  const auto pairing = pair_chain(mu.complex(), w);
  IntegralFormula<S> out{Field<S>::one(), Field<S>::one()};
  for (const auto& [a, b] : pairing.interior) out.lhs *= rho_path(rho, a.facet, b.facet, a.from, a.to);
  for (const auto& o : pairing.boundary) out.rhs *= -mu(o.facet, o.to, o.from);
  return out;
}

template <class S>
IntegralFormula<S> integral_formula(const Connection<S>& mu, const FramedTwoChain& w) {
  return integral_formula(mu, rho_minimal(mu), w);
}

/// Product of paired-interior rho over a framed chain; the chain's boundary occurrences are returned.
template <class S>
S chain_rho_product(const RhoData<S>& rho, const FramedTwoChain& w, std::vector<EdgeOccurrence>* boundary = nullptr) {
  const auto pairing = pair_chain(*rho.complex, w);
  S p = Field<S>::one();
  for (const auto& [a, b] : pairing.interior) p *= rho_path(rho, a.facet, b.facet, a.from, a.to);
  if (boundary) *boundary = pairing.boundary;
  return p;
}

/// Factors of the torsion relation for a chain u with boundary order * a. The identity reads
/// lhs * matched * mu(a)^order / cancelled^order = 1: lhs pairs the interior of u, matched joins u's
/// boundary facets to the framing of a, cancelled pairs opposite occurrences inside the path a.
template <class S>
struct TorsionFactors {
  std::vector<S> lhs, matched, cancelled;  // individual rho factors
  S holonomy;
  long order = 1;
  bool boundary_matches = true;

  S value() const {
    S v = ipow(holonomy, order);
    for (const auto& x : lhs) v *= x;
    for (const auto& x : matched) v *= x;
    S y = Field<S>::one();
    for (const auto& x : cancelled) y *= x;
    return v / ipow(y, order);
  }
};

template <class S>
TorsionFactors<S> torsion_factors(const RhoData<S>& rho, const FramedTwoChain& u, const FramedPath& a,
                                  const S& mu_a, long order) {
  TorsionFactors<S> tf;
  tf.holonomy = mu_a;
  tf.order = order;
  const auto up = pair_chain(*rho.complex, u);
  for (const auto& [x, z] : up.interior) tf.lhs.push_back(rho_path(rho, x.facet, z.facet, x.from, x.to));
  const auto ap = pair_occurrences(path_occurrences(a));
  for (const auto& [x, z] : ap.interior) tf.cancelled.push_back(rho_path(rho, x.facet, z.facet, x.from, x.to));

  std::map<std::pair<int, int>, std::vector<std::size_t>> pool;
  for (long r = 0; r < order; ++r)
    for (const auto& o : ap.boundary) pool[{o.from, o.to}].push_back(o.facet);
  for (const auto& o : up.boundary) {
    auto& v = pool[{o.from, o.to}];
    if (v.empty()) {
      tf.boundary_matches = false;
      continue;
    }
    tf.matched.push_back(rho_path(rho, o.facet, v.back(), o.from, o.to));
    v.pop_back();
  }
  for (const auto& [k, v] : pool)
    if (!v.empty()) tf.boundary_matches = false;
  return tf;
}

// ---------------------------------------------------------------------------------------------
// Relation report

struct RelationCheck {
  std::string relation;
  std::string location;
  bool pass = true;
  double residual = 0.0;
};

struct RelationReport {
  std::vector<RelationCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.pass; });
  }
  std::size_t count(const std::string& relation) const {
    return std::count_if(checks.begin(), checks.end(), [&](const RelationCheck& c) { return c.relation == relation; });
  }
  std::vector<RelationCheck> failures() const {
    std::vector<RelationCheck> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c);
    return out;
  }
};

namespace detail {

template <class S>
double unit_residual(const S& v) {
  if constexpr (Field<S>::exact) {
    return v == 1 ? 0.0 : std::abs(Rational(v - 1).get_d()) + 1e-300;
  } else {
    return std::abs(v - 1.0);
  }
}

inline std::string vertex_list(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s + "]";
}

}  // namespace detail

struct RelationOptions {
  bool local = true;               // relations A and B
  bool global = true;              // oriented n = 2 / n = 3 edge products
  const HomologyBasis* h1 = nullptr;  // torsion relation
  const HomologyBasis* h2 = nullptr;  // cycle relation
  double tol = kDefaultTolerance;
};

template <class S>
RelationReport verify_relations(const RhoData<S>& rho, const RelationOptions& opt = {},
                                const InvariantData<S>* inv = nullptr) {
  const auto& K = *rho.complex;
  const int n = K.dim();
  RelationReport rep;
  auto record = [&](std::string rel, std::string loc, const S& v) {
    const bool ok = Field<S>::equal(v, Field<S>::one(), opt.tol);
    rep.checks.push_back({std::move(rel), std::move(loc), ok, detail::unit_residual(v)});
  };

  if (opt.local) {
    // A: every vertex triple of every (n-1)-face
    for (std::size_t f = 0; f < rho.values.size(); ++f) {
      const auto& v = rho.face(f);
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
          for (std::size_t c = b + 1; c < v.size(); ++c)
            record("A", "face " + std::to_string(f) + " " + detail::vertex_list({v[a], v[b], v[c]}),
                   rho.value(f, v[a], v[b]) * rho.value(f, v[b], v[c]) * rho.value(f, v[c], v[a]));
    }
    // B: around the star of each (n-2)-simplex, for each edge inside it
    if (n >= 3)
      for (const auto& sigma : K.simplices(n - 2)) {
        const auto st = star_cycle(K, sigma);
        for (std::size_t a = 0; a < sigma.size(); ++a)
          for (std::size_t b = a + 1; b < sigma.size(); ++b) {
            S p = Field<S>::one();
            for (std::size_t k = 0; k < st.m(); ++k) p *= rho.adjacent(st.facet(k), st.facet(k + 1), sigma[a], sigma[b]);
            record("B", "star " + detail::vertex_list(sigma) + " edge " + detail::vertex_list({sigma[a], sigma[b]}), p);
          }
      }
  }

  if (opt.global && K.oriented()) {
    if (n == 2) {
      S p = Field<S>::one();
      for (const auto& vals : rho.values) p *= vals[0];
      record("global", "surface edge product", p);
    } else if (n == 3) {
      S p = Field<S>::one();
      for (std::size_t f = 0; f < rho.values.size(); ++f) {
        const auto& v = rho.face(f);
        p *= rho.value(f, v[0], v[1]) * rho.value(f, v[1], v[2]) * rho.value(f, v[2], v[0]);
      }
      record("global", "3-manifold edge product", p);
    }
  }

  if (opt.h2) {
    for (std::size_t j = 0; j < opt.h2->free_cycles.size(); ++j) {
      std::vector<EdgeOccurrence> bd;
      const S p = chain_rho_product(rho, frame_chain2(K, opt.h2->free_cycles[j]), &bd);
      record("cycle", "z" + std::to_string(j), bd.empty() ? p : S(0));
    }
  }

  if (opt.h1 && !opt.h1->torsion_orders.empty()) {
    if (!inv) fail(ErrorCode::MissingHomologyData, "torsion relation needs holonomy values");
    for (std::size_t s = 0; s < opt.h1->torsion_orders.size(); ++s) {
      const long m = opt.h1->torsion_orders[s].get_si();
      const auto tf = torsion_factors(rho, frame_chain2(K, opt.h1->torsion_bounding[s]), inv->torsion_paths[s],
                                      inv->torsion_values[s], m);
      record("torsion", "u" + std::to_string(s), tf.boundary_matches ? tf.value() : S(0));
    }
  }
  return rep;
}

template <class S>
RelationReport verify_relations(const InvariantData<S>& inv, const RelationOptions& opt = {}) {
  return verify_relations(inv.rho, opt, &inv);
}

// ---------------------------------------------------------------------------------------------
// Chern numbers

struct ChernData {
  std::vector<double> per_facet;  // n = 2: -(1/4 pi) sum of arg rho over the facet's edges
  long total = 0;                  // n = 2: r
  std::vector<long> cycle_pairings;             // n >= 3: (c_1, z_j)
  std::vector<std::pair<long, long>> torsion;   // n >= 3: ((c_1, u_s) mod m_s, m_s)
};

namespace detail {

inline long integral_turns(double angle_sum, const std::string& what) {
  const double turns = angle_sum / (2 * std::numbers::pi);
  const double r = std::round(turns);
  if (std::abs(angle_sum - 2 * std::numbers::pi * r) > 1e-6)
    fail(ErrorCode::NonIntegerTotal, what + " is not an integer (" + std::to_string(turns) + ")");
  return static_cast<long>(r);
}

}  // namespace detail

/// n = 2 (oriented): per-edge arguments must satisfy |arg rho_e| < pi/2. n >= 3: pairings with the H_2
/// generators and residues on the torsion chains (the latter need `inv`).
inline ChernData chern(const RhoData<Complex>& rho, const HomologyBasis* h1 = nullptr, const HomologyBasis* h2 = nullptr,
                       const InvariantData<Complex>* inv = nullptr) {
  const auto& K = *rho.complex;
  ChernData out;
  if (K.dim() == 2) {
    if (!K.oriented()) fail(ErrorCode::NotOrientable, "surface Chern number needs an orientation");
    std::vector<double> arg(rho.values.size());
    double sum = 0;
    for (std::size_t e = 0; e < arg.size(); ++e) {
      arg[e] = std::arg(rho.values[e][0]);
      if (std::abs(arg[e]) >= std::numbers::pi / 2)
        fail(ErrorCode::BranchViolation, "edge " + detail::vertex_list(rho.face(e)) + " has |arg rho| >= pi/2");
      sum += arg[e];
    }
    out.per_facet.assign(K.num_facets(), 0.0);
    for (std::size_t t = 0; t < K.num_facets(); ++t)
      for (int pos = 0; pos < 3; ++pos) out.per_facet[t] -= arg[K.face_of_facet(t, pos)] / (4 * std::numbers::pi);
    out.total = -detail::integral_turns(sum, "surface Chern number");
    return out;
  }
  if (h2)
    for (std::size_t j = 0; j < h2->free_cycles.size(); ++j) {
      const auto pairing = pair_chain(K, frame_chain2(K, h2->free_cycles[j]));
      double sum = 0;
      for (const auto& [a, b] : pairing.interior) sum += std::arg(rho_path(rho, a.facet, b.facet, a.from, a.to));
      out.cycle_pairings.push_back(detail::integral_turns(sum, "pairing with z" + std::to_string(j)));
    }
  if (h1 && !h1->torsion_orders.empty()) {
    if (!inv) fail(ErrorCode::MissingHomologyData, "torsion pairings need holonomy values");
    for (std::size_t s = 0; s < h1->torsion_orders.size(); ++s) {
      const long m = h1->torsion_orders[s].get_si();
      const auto tf = torsion_factors(rho, frame_chain2(K, h1->torsion_bounding[s]), inv->torsion_paths[s],
                                      inv->torsion_values[s], m);
      double sum = m * std::arg(tf.holonomy);
      for (const auto& x : tf.lhs) sum += std::arg(x);
      for (const auto& x : tf.matched) sum += std::arg(x);
      for (const auto& x : tf.cancelled) sum -= m * std::arg(x);
      long r = detail::integral_turns(sum, "torsion pairing u" + std::to_string(s)) % m;
      if (r < 0) r += m;
      out.torsion.push_back({r, m});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Invariants file: "rho <face> <T> <T'> <i> <j> <value>", "hol free <k> <value>",
// "hol tor <s> <order> <value>".

template <class S>
std::string write_invariants(const InvariantData<S>& inv) {
  std::ostringstream os;
  os << "field " << to_string(Field<S>::kind) << "\n";
  for (std::size_t f = 0; f < inv.rho.values.size(); ++f) {
    const auto& v = inv.rho.face(f);
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b)
        os << "rho " << f << ' ' << inv.rho.cofacets[f][0] << ' ' << inv.rho.cofacets[f][1] << ' ' << v[a] << ' ' << v[b]
           << ' ' << Field<S>::format(inv.rho.values[f][pair_index(v.size(), a, b)]) << "\n";
  }
  for (std::size_t k = 0; k < inv.free_values.size(); ++k)
    os << "hol free " << k << ' ' << Field<S>::format(inv.free_values[k]) << "\n";
  for (std::size_t s = 0; s < inv.torsion_values.size(); ++s)
    os << "hol tor " << s << ' ' << inv.torsion_orders[s] << ' ' << Field<S>::format(inv.torsion_values[s]) << "\n";
  return os.str();
}

/// Reads invariant values; the framed basis paths are regenerated from `H1`.
template <class S>
InvariantData<S> read_invariants(const SimplicialComplex& K, const HomologyBasis& H1, const std::string& text) {
  InvariantData<S> inv;
  inv.rho = RhoData<S>(K);
  inv.free_paths = framed_generators(K, H1.free_cycles);
  inv.torsion_paths = framed_generators(K, H1.torsion_cycles);
  inv.torsion_orders = H1.torsion_orders;
  std::vector<std::optional<S>> free(H1.free_cycles.size()), tor(H1.torsion_cycles.size());
  std::vector<std::vector<char>> have(inv.rho.values.size());
  for (std::size_t f = 0; f < have.size(); ++f) have[f].assign(inv.rho.values[f].size(), 0);

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    try {
      if (kw == "field") {
        std::string kind;
        if (!(ls >> kind) || header) fail(ErrorCode::ParseError, "bad header");
        if (parse_field(kind) != Field<S>::kind) fail(ErrorCode::MixedField, "field mismatch");
        header = true;
      } else if (kw == "rho") {
        long f, T, Tp;
        int i, j;
        std::string val, extra;
        if (!(ls >> f >> T >> Tp >> i >> j >> val) || (ls >> extra)) fail(ErrorCode::ParseError, "malformed rho line");
        if (f < 0 || static_cast<std::size_t>(f) >= inv.rho.values.size()) fail(ErrorCode::ParseError, "face out of range");
        const auto& v = inv.rho.face(f);
        if (i == j || !std::binary_search(v.begin(), v.end(), i) || !std::binary_search(v.begin(), v.end(), j))
          fail(ErrorCode::ParseError, "vertices not on face");
        const auto c = inv.rho.cofacets[f];
        S r = Field<S>::parse(val);
        if (static_cast<std::size_t>(T) == c[1] && static_cast<std::size_t>(Tp) == c[0]) r = Field<S>::inverse(r);
        else if (static_cast<std::size_t>(T) != c[0] || static_cast<std::size_t>(Tp) != c[1])
          fail(ErrorCode::ParseError, "facets are not the cofacets of the face");
        std::size_t a = position_of(v, i), b = position_of(v, j);
        if (a > b) {
          std::swap(a, b);
          r = Field<S>::inverse(r);
        }
        inv.rho.values[f][pair_index(v.size(), a, b)] = r;
        have[f][pair_index(v.size(), a, b)] = 1;
      } else if (kw == "hol") {
        std::string kind, val, extra;
        long k;
        if (!(ls >> kind >> k) || k < 0) fail(ErrorCode::ParseError, "malformed hol line");
        if (kind == "free") {
          if (!(ls >> val) || (ls >> extra) || static_cast<std::size_t>(k) >= free.size())
            fail(ErrorCode::ParseError, "malformed hol free line");
          free[k] = Field<S>::parse(val);
        } else if (kind == "tor") {
          std::string order;
          if (!(ls >> order >> val) || (ls >> extra) || static_cast<std::size_t>(k) >= tor.size() ||
              Integer(order) != H1.torsion_orders[k])
            fail(ErrorCode::ParseError, "malformed hol tor line");
          tor[k] = Field<S>::parse(val);
        } else {
          fail(ErrorCode::ParseError, "unknown hol kind");
        }
      } else {
        fail(ErrorCode::ParseError, "unknown record '" + kw + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MixedField) throw;
      fail(ErrorCode::ParseError, where + e.what());
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::ParseError, where + "bad integer");
    }
  }
  if (!header) fail(ErrorCode::ParseError, "missing field header");
  for (const auto& row : have)
    for (char c : row)
      if (!c) fail(ErrorCode::ParseError, "missing rho value");
  for (const auto& v : free) {
    if (!v) fail(ErrorCode::ParseError, "missing free holonomy value");
    inv.free_values.push_back(*v);
  }
  for (const auto& v : tor) {
    if (!v) fail(ErrorCode::ParseError, "missing torsion holonomy value");
    inv.torsion_values.push_back(*v);
  }
  return inv;
}

}  // namespace dgc
