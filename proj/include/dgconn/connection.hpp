#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dgconn/complex.hpp"
#include "dgconn/error.hpp"
#include "dgconn/homology.hpp"
#include "dgconn/matrix.hpp"
#include "dgconn/scalar.hpp"

namespace dgc {

template <class S>
using VertexFunction = std::vector<S>;

template <class S>
using Gauge = std::vector<S>;

/// b_{T:P} per facet, indexed by the local (sorted) position of P in T.
template <class S>
using BCoefficients = std::vector<std::vector<S>>;

/// Per-facet coefficients mu_ij^T. Only mu_{v0,vk} is stored (v0 the smallest vertex of T); the rest
/// follows from mu_ij mu_ji = 1 and mu_ij mu_jl mu_li = -1. The complex must outlive the connection.
template <class S>
class Connection {
 public:
  using scalar_type = S;

  Connection() = default;
  Connection(const SimplicialComplex& K, std::vector<std::vector<S>> stored) : K_(&K), stored_(std::move(stored)) {
    if (stored_.size() != K.num_facets()) fail(ErrorCode::MissingCoefficient, "wrong number of facets");
    for (std::size_t t = 0; t < stored_.size(); ++t) {
      if (stored_[t].size() != static_cast<std::size_t>(K.dim()))
        fail(ErrorCode::MissingCoefficient, "facet " + std::to_string(t) + " needs " + std::to_string(K.dim()) + " values");
      for (const auto& v : stored_[t])
        if (Field<S>::is_zero(v)) fail(ErrorCode::ZeroCoefficient, "zero coefficient on facet " + std::to_string(t));
    }
  }

  const SimplicialComplex& complex() const { return *K_; }
  int dim() const { return K_->dim(); }
  std::size_t num_facets() const { return stored_.size(); }

  const std::vector<S>& stored(std::size_t t) const { return stored_[t]; }
  const std::vector<std::vector<S>>& stored() const { return stored_; }

  /// mu_{ab}^T with a, b local positions in the sorted facet.
  S local(std::size_t t, std::size_t a, std::size_t b) const {
    if (a == b) return Field<S>::one();
    const auto& s = stored_[t];
    if (a == 0) return s[b - 1];
    if (b == 0) return Field<S>::inverse(s[a - 1]);
    return -s[b - 1] / s[a - 1];
  }

  /// mu_{ij}^T with vertex ids.
  S operator()(std::size_t t, int i, int j) const {
    const auto& f = K_->facet(t);
    return local(t, position_of(f, i), position_of(f, j));
  }

  friend bool operator==(const Connection& a, const Connection& b) { return a.K_ == b.K_ && a.stored_ == b.stored_; }

 private:
  const SimplicialComplex* K_ = nullptr;
  std::vector<std::vector<S>> stored_;
};

/// Largest relative difference between stored coefficients (0 or infinity in the exact model).
template <class S>
double max_rel_error(const Connection<S>& a, const Connection<S>& b) {
  double worst = 0.0;
  for (std::size_t t = 0; t < a.num_facets(); ++t)
    for (std::size_t k = 0; k < a.stored(t).size(); ++k)
      worst = std::max(worst, Field<S>::rel_error(a.stored(t)[k], b.stored(t)[k]));
  return worst;
}

template <class S>
bool approx_equal(const Connection<S>& a, const Connection<S>& b, double tol = kDefaultTolerance) {
  return max_rel_error(a, b) <= tol;
}

// ---------------------------------------------------------------------------------------------
// Constructors

template <class S>
Connection<S> build_connection(const SimplicialComplex& K, const BCoefficients<S>& b) {
  if (b.size() != K.num_facets()) fail(ErrorCode::MissingCoefficient, "b-coefficients missing for some facets");
  std::vector<std::vector<S>> stored(K.num_facets());
  for (std::size_t t = 0; t < K.num_facets(); ++t) {
    if (b[t].size() != K.facet(t).size()) fail(ErrorCode::MissingCoefficient, "facet " + std::to_string(t));
    for (const auto& v : b[t])
      if (Field<S>::is_zero(v)) fail(ErrorCode::ZeroCoefficient, "facet " + std::to_string(t));
    for (std::size_t k = 1; k < b[t].size(); ++k) stored[t].push_back(-b[t][0] / b[t][k]);
  }
  return Connection<S>(K, std::move(stored));
}

/// b-coefficients reproducing mu: b_{v0} = 1, b_{vk} = -1/mu_{v0 vk}.
template <class S>
BCoefficients<S> b_coefficients(const Connection<S>& mu) {
  BCoefficients<S> b(mu.num_facets());
  for (std::size_t t = 0; t < mu.num_facets(); ++t) {
    b[t].push_back(Field<S>::one());
    for (const auto& v : mu.stored(t)) b[t].push_back(-Field<S>::inverse(v));
  }
  return b;
}

template <class S>
Connection<S> canonical_connection(const SimplicialComplex& K) {
  return Connection<S>(K, std::vector<std::vector<S>>(K.num_facets(), std::vector<S>(K.dim(), S(-1))));
}

namespace detail {

template <class S>
S random_scalar(std::mt19937_64& rng, std::optional<double> max_phase) {
  if constexpr (Field<S>::exact) {
    std::uniform_int_distribution<int> d(1, 100);
    const int num = d(rng);
    const Rational r = make_rational(num, d(rng));
    return (rng() & 1) ? Rational(-r) : r;
  } else {
    std::uniform_real_distribution<double> mod(0.5, 2.0);
    const double lim = max_phase.value_or(std::numbers::pi);
    std::uniform_real_distribution<double> ph(-lim, lim);
    const double r = mod(rng);
    const Complex z = std::polar(r, ph(rng));
    return max_phase ? -z : z;
  }
}

}  // namespace detail

/// Deterministic in the seed. In the complex model `max_phase` bounds the phase of -mu_{v0,vk}, so the
/// result stays near the canonical connection in phase (every rho then has |arg| <= 4 max_phase).
template <class S>
Connection<S> random_connection(const SimplicialComplex& K, std::uint64_t seed, std::optional<double> max_phase = {}) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<S>> stored(K.num_facets());
  for (auto& row : stored)
    for (int k = 0; k < K.dim(); ++k) row.push_back(detail::random_scalar<S>(rng, max_phase));
  return Connection<S>(K, std::move(stored));
}

template <class S>
Gauge<S> random_gauge(const SimplicialComplex& K, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Gauge<S> h;
  for (std::size_t v = 0; v < K.num_vertices(); ++v) h.push_back(detail::random_scalar<S>(rng, {}));
  return h;
}

// ---------------------------------------------------------------------------------------------
// Gauge action and the triangle operator

template <class S>
Connection<S> apply_gauge(const Connection<S>& mu, const Gauge<S>& h) {
  const auto& K = mu.complex();
  if (h.size() != K.num_vertices()) fail(ErrorCode::MissingGaugeValue, "gauge must cover every vertex");
  for (const auto& v : h)
    if (Field<S>::is_zero(v)) fail(ErrorCode::ZeroCoefficient, "zero gauge value");
  auto stored = mu.stored();
  for (std::size_t t = 0; t < stored.size(); ++t) {
    const auto& f = K.facet(t);
    for (std::size_t k = 1; k < f.size(); ++k) stored[t][k - 1] *= h[f[0]] / h[f[k]];
  }
  return Connection<S>(K, std::move(stored));
}

template <class S>
Gauge<S> inverse_gauge(const Gauge<S>& h) {
  Gauge<S> out;
  for (const auto& v : h) out.push_back(Field<S>::inverse(v));
  return out;
}

/// (Q psi)_T = sum over P in T of b_{T:P} psi_P.
template <class S>
std::vector<S> triangle_apply(const SimplicialComplex& K, const BCoefficients<S>& b, const VertexFunction<S>& psi) {
  if (psi.size() != K.num_vertices()) fail(ErrorCode::MissingCoefficient, "vertex function must be total");
  std::vector<S> out(K.num_facets(), S(0));
  for (std::size_t t = 0; t < K.num_facets(); ++t) {
    const auto& f = K.facet(t);
    for (std::size_t a = 0; a < f.size(); ++a) out[t] += b[t][a] * psi[f[a]];
  }
  return out;
}

/// Per facet, b spans the kernel of the n x (n+1) matrix of solution values (signed maximal minors).
template <class S>
Connection<S> connection_from_solutions(const SimplicialComplex& K, const std::vector<VertexFunction<S>>& psi) {
  const std::size_t n = K.dim();
  if (psi.size() != n) fail(ErrorCode::DegenerateSolutions, "need exactly n solutions");
  for (const auto& p : psi)
    if (p.size() != K.num_vertices()) fail(ErrorCode::MissingCoefficient, "solution must be total");
  BCoefficients<S> b(K.num_facets());
  for (std::size_t t = 0; t < K.num_facets(); ++t) {
    const auto& f = K.facet(t);
    for (std::size_t k = 0; k <= n; ++k) {
      Matrix<S> M(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0, col = 0; c <= n; ++c)
          if (c != k) M(r, col++) = psi[r][f[c]];
      S minor = M.determinant();
      if (k % 2) minor = -minor;
      b[t].push_back(minor);
    }
    for (const auto& v : b[t])
      if (Field<S>::is_zero(v) || (!Field<S>::exact && std::abs(Field<S>::to_complex(v)) < 1e-12))
        fail(ErrorCode::DegenerateSolutions, "solutions not in general position on facet " + std::to_string(t));
  }
  return build_connection(K, b);
}

/// Propagates n local solutions of Q psi = 0 from facet `start` over the whole complex. The start facet's
/// first n vertices get the unit vectors; each new vertex x gets psi_x = sum over the shared face of
/// mu_{P,x} psi_P. Fails with NotLocallyFlat when a revisited vertex disagrees.
template <class S>
std::vector<VertexFunction<S>> propagate_solutions(const Connection<S>& mu, std::size_t start = 0,
                                                   double tol = kDefaultTolerance) {
  const auto& K = mu.complex();
  const std::size_t n = K.dim(), nv = K.num_vertices();
  std::vector<VertexFunction<S>> psi(n, VertexFunction<S>(nv, S(0)));
  std::vector<char> known(nv, 0);

  auto solve_vertex = [&](std::size_t t, std::size_t xpos) {
    const auto& f = K.facet(t);
    const int x = f[xpos];
    std::vector<S> val(n, S(0));
    for (std::size_t a = 0; a < f.size(); ++a) {
      if (a == xpos) continue;
      const S c = mu.local(t, a, xpos);
      for (std::size_t r = 0; r < n; ++r) val[r] += c * psi[r][f[a]];
    }
    if (known[x]) {
      for (std::size_t r = 0; r < n; ++r) {
        bool same;
        if constexpr (Field<S>::exact) {
          same = val[r] == psi[r][x];
        } else {
          double scale = 1.0;
          for (std::size_t q = 0; q < n; ++q) scale = std::max(scale, std::abs(psi[q][x]));
          same = std::abs(val[r] - psi[r][x]) <= tol * scale;
        }
        if (!same) fail(ErrorCode::NotLocallyFlat, "solutions do not close up at vertex " + std::to_string(x));
      }
      return;
    }
    for (std::size_t r = 0; r < n; ++r) psi[r][x] = val[r];
    known[x] = 1;
  };

  const auto& f0 = K.facet(start);
  for (std::size_t r = 0; r < n; ++r) {
    psi[r][f0[r]] = Field<S>::one();
    known[f0[r]] = 1;
  }
  solve_vertex(start, n);

  std::vector<char> seen(K.num_facets(), 0);
  std::queue<std::size_t> q;
  q.push(start);
  seen[start] = 1;
  while (!q.empty()) {
    const std::size_t t = q.front();
    q.pop();
    for (std::size_t pos = 0; pos <= n; ++pos) {
      const std::size_t u = K.neighbor(t, pos);
      // the vertex of u not in t
      const auto& fu = K.facet(u);
      std::size_t xpos = 0;
      for (; xpos < fu.size(); ++xpos)
        if (!std::binary_search(K.facet(t).begin(), K.facet(t).end(), fu[xpos])) break;
      solve_vertex(u, xpos);
      if (!seen[u]) {
        seen[u] = 1;
        q.push(u);
      }
    }
  }
  return psi;
}

// ---------------------------------------------------------------------------------------------
// Edge cochains and gauge equivalence

/// Multiplicative 1-cochain on the edges: value(i,j) for i < j is stored, value(j,i) is its inverse.
template <class S>
struct EdgeCochain {
  const SimplicialComplex* complex = nullptr;
  std::vector<S> values;  // indexed like K.simplices(1)

  EdgeCochain() = default;
  explicit EdgeCochain(const SimplicialComplex& K) : complex(&K), values(K.count(1), Field<S>::one()) {}

  S operator()(int i, int j) const {
    const auto e = oriented_edge(*complex, i, j);
    return e.sign > 0 ? values[e.index] : Field<S>::inverse(values[e.index]);
  }

  /// Product over the edges of a vertex path.
  S along(const std::vector<int>& path) const {
    S p = Field<S>::one();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) p *= (*this)(path[k], path[k + 1]);
    return p;
  }
};

/// Coboundary of a vertex function: (dh)_ij = h_i / h_j.
template <class S>
EdgeCochain<S> coboundary(const SimplicialComplex& K, const Gauge<S>& h) {
  EdgeCochain<S> d(K);
  const auto& edges = K.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) d.values[e] = h[edges[e][0]] / h[edges[e][1]];
  return d;
}

/// mu'_ij^T = delta_ij mu_ij^T. A connection results only when delta is a cocycle.
template <class S>
Connection<S> twist(const Connection<S>& mu, const EdgeCochain<S>& delta, double tol = kDefaultTolerance) {
  const auto& K = mu.complex();
  auto stored = mu.stored();
  for (std::size_t t = 0; t < stored.size(); ++t) {
    const auto& f = K.facet(t);
    for (std::size_t k = 1; k < f.size(); ++k) stored[t][k - 1] *= delta(f[0], f[k]);
    for (std::size_t a = 1; a < f.size(); ++a)
      for (std::size_t b = a + 1; b < f.size(); ++b)
        if (!Field<S>::equal(delta(f[0], f[a]) * delta(f[a], f[b]) * delta(f[b], f[0]), Field<S>::one(), tol))
          fail(ErrorCode::InconsistentInvariants, "twisting cochain is not a cocycle");
  }
  return Connection<S>(K, std::move(stored));
}

template <class S>
struct GaugeMatch {
  bool equivalent = false;
  Gauge<S> h;  // apply_gauge(mu, h) = mu' when equivalent
  double max_rel_error = 0.0;
  std::string reason;
};

/// Decides whether mu' = apply_gauge(mu, h) for some h. The edge ratios mu'/mu must agree across facets,
/// close up on triangles and be trivial on every H_1 generator; h is then read off a spanning forest.
template <class S>
GaugeMatch<S> gauge_equivalent(const Connection<S>& mu, const Connection<S>& mu2, const HomologyBasis& H1,
                               double tol = kDefaultTolerance) {
  const auto& K = mu.complex();
  if (!(K == mu2.complex())) fail(ErrorCode::DifferentComplex, "connections live on different complexes");
  GaugeMatch<S> out;

  // edge ratio from the lowest facet containing each edge, checked on all others
  EdgeCochain<S> delta(K);
  const auto& edges = K.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e][0], j = edges[e][1];
    const auto star = K.facets_containing(edges[e]);
    delta.values[e] = mu2(star.front(), i, j) / mu(star.front(), i, j);
    for (std::size_t t : star) {
      const S r = mu2(t, i, j) / mu(t, i, j);
      if (!Field<S>::equal(r, delta.values[e], tol)) {
        out.reason = "edge ratio differs between facets on [" + std::to_string(i) + "," + std::to_string(j) + "]";
        return out;
      }
    }
  }
  for (std::size_t g = 0; g < H1.free_cycles.size() + H1.torsion_cycles.size(); ++g) {
    const bool tor = g >= H1.free_cycles.size();
    const auto& c = tor ? H1.torsion_cycles[g - H1.free_cycles.size()] : H1.free_cycles[g];
    const S v = delta.along(cycle_to_path(K, c));
    if (!Field<S>::equal(v, Field<S>::one(), tol)) {
      out.reason = std::string("nontrivial ratio on ") + (tor ? "torsion" : "free") + " generator " +
                   std::to_string(tor ? g - H1.free_cycles.size() : g);
      return out;
    }
  }

  // h_j = h_i / delta_ij along a spanning forest
  Gauge<S> h(K.num_vertices(), Field<S>::one());
  std::vector<char> seen(K.num_vertices(), 0);
  std::vector<std::vector<int>> adj(K.num_vertices());
  for (const auto& e : edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (std::size_t root = 0; root < K.num_vertices(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(root));
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (int j : adj[i])
        if (!seen[j]) {
          seen[j] = 1;
          h[j] = h[i] / delta(i, j);
          q.push(j);
        }
    }
  }
  out.h = h;
  out.max_rel_error = max_rel_error(apply_gauge(mu, h), mu2);
  out.equivalent = out.max_rel_error <= tol;
  if (!out.equivalent) out.reason = "edge ratios are not a coboundary";
  return out;
}

// ---------------------------------------------------------------------------------------------
// Validation of the connection axioms

struct Violation {
  std::size_t facet;
  std::vector<int> vertices;
  std::string what;
};

template <class S>
std::vector<Violation> validate(const Connection<S>& mu, double tol = kDefaultTolerance) {
  std::vector<Violation> bad;
  const auto& K = mu.complex();
  const S one = Field<S>::one();
  for (std::size_t t = 0; t < K.num_facets(); ++t) {
    const auto& f = K.facet(t);
    const std::size_t k = f.size();
    for (std::size_t a = 0; a < k; ++a) {
      if (!Field<S>::equal(mu.local(t, a, a), one, tol)) bad.push_back({t, {f[a]}, "mu_ii != 1"});
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b) continue;
        if (!Field<S>::equal(mu.local(t, a, b) * mu.local(t, b, a), one, tol))
          bad.push_back({t, {f[a], f[b]}, "mu_ij mu_ji != 1"});
        for (std::size_t c = 0; c < k; ++c) {
          if (c == a || c == b) continue;
          if (!Field<S>::equal(mu.local(t, a, b) * mu.local(t, b, c) * mu.local(t, c, a), S(-1), tol))
            bad.push_back({t, {f[a], f[b], f[c]}, "mu_ij mu_jl mu_li != -1"});
        }
      }
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------------------------
// Connection file: "field <kind>" then "f <facet> <mu_{v0,v1}> ... <mu_{v0,vn}>".

template <class S>
std::string write_connection(const Connection<S>& mu) {
  std::ostringstream os;
  os << "field " << to_string(Field<S>::kind) << "\n";
  for (std::size_t t = 0; t < mu.num_facets(); ++t) {
    os << "f " << t;
    for (const auto& v : mu.stored(t)) os << ' ' << Field<S>::format(v);
    os << "\n";
  }
  return os.str();
}

/// Field named by the header of a connection file (first non-comment line).
inline FieldKind peek_field(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw, kind;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (kw != "field" || !(ls >> kind)) fail(ErrorCode::ParseError, "line 1: expected 'field <kind>'");
    return parse_field(kind);
  }
  fail(ErrorCode::ParseError, "empty connection file");
}

template <class S>
Connection<S> read_connection(const SimplicialComplex& K, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<std::vector<S>> stored(K.num_facets());
  std::vector<char> have(K.num_facets(), 0);
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!header) {
      std::string kind;
      if (kw != "field" || !(ls >> kind)) fail(ErrorCode::ParseError, where + "expected 'field <kind>'");
      if (parse_field(kind) != Field<S>::kind) fail(ErrorCode::MixedField, where + "field mismatch");
      header = true;
      continue;
    }
    long t;
    if (kw != "f" || !(ls >> t) || t < 0 || static_cast<std::size_t>(t) >= K.num_facets())
      fail(ErrorCode::ParseError, where + "expected 'f <facet> <values>'");
    std::string tok;
    try {
      while (ls >> tok) stored[t].push_back(Field<S>::parse(tok));
    } catch (const Error& e) {
      fail(ErrorCode::ParseError, where + e.what());
    }
    if (stored[t].size() != static_cast<std::size_t>(K.dim()) || have[t])
      fail(ErrorCode::ParseError, where + "wrong value count or repeated facet");
    have[t] = 1;
  }
  if (!header) fail(ErrorCode::ParseError, "missing field header");
  for (std::size_t t = 0; t < K.num_facets(); ++t)
    if (!have[t]) fail(ErrorCode::MissingCoefficient, "no coefficients for facet " + std::to_string(t));
  return Connection<S>(K, std::move(stored));
}

}  // namespace dgc
