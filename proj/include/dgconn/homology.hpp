#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "dgconn/complex.hpp"
#include "dgconn/error.hpp"
#include "dgconn/integer_matrix.hpp"

namespace dgc {

using Chain = std::vector<Integer>;

/// Boundary operator C_k -> C_{k-1} in the sorted simplex bases (k >= 1).
inline IntegerMatrix boundary_matrix(const SimplicialComplex& K, int k) {
  const auto& hi = K.simplices(k);
  IntegerMatrix B(K.count(k - 1), hi.size());
  for (std::size_t c = 0; c < hi.size(); ++c)
    for (std::size_t pos = 0; pos < hi[c].size(); ++pos)
      B(*K.index_of(without(hi[c], pos)), c) = (pos % 2) ? -1 : 1;
  return B;
}

/// Oriented edge lookup: index of [min,max] and +1 when a < b.
struct OrientedEdge {
  std::size_t index;
  int sign;
};

inline OrientedEdge oriented_edge(const SimplicialComplex& K, int a, int b) {
  if (a == b) fail(ErrorCode::NotAPath, "degenerate edge");
  auto idx = K.index_of(a < b ? Vertices{a, b} : Vertices{b, a});
  if (!idx) fail(ErrorCode::EdgeNotInComplex, "edge [" + std::to_string(a) + "," + std::to_string(b) + "] not in complex");
  return {*idx, a < b ? 1 : -1};
}

struct HomologyBasis {
  int degree = 0;
  std::vector<Chain> free_cycles;
  std::vector<Integer> torsion_orders;
  std::vector<Chain> torsion_cycles;
  std::vector<Chain> torsion_bounding;  // in C_{k+1}, boundary = order * cycle

  std::size_t rank() const { return free_cycles.size(); }

  // Coordinates of a cycle: rows for torsion classes first (residues mod order), then free classes.
  IntegerMatrix class_map;

  /// Homology class of a k-cycle: torsion residues then free coordinates.
  std::vector<Integer> classify(const Chain& cycle) const {
    auto y = class_map.apply(cycle);
    for (std::size_t s = 0; s < torsion_orders.size(); ++s) {
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), y[s].get_mpz_t(), torsion_orders[s].get_mpz_t());
      y[s] = r;
    }
    return y;
  }
};

inline HomologyBasis homology_basis(const SimplicialComplex& K, int k) {
  if (k < 0 || k > K.dim()) fail(ErrorCode::WrongDimension, "homology degree out of range");
  const std::size_t sk = K.count(k);
  HomologyBasis H;
  H.degree = k;

  // Z_k basis and the coordinate projection onto it.
  IntegerMatrix Z, Zproj;
  if (k == 0) {
    Z = IntegerMatrix::identity(sk);
    Zproj = Z;
  } else {
    const auto snf = smith_normal_form(boundary_matrix(K, k));
    const std::size_t zdim = sk - snf.rank;
    Z = IntegerMatrix(sk, zdim);
    Zproj = IntegerMatrix(zdim, sk);
    for (std::size_t i = 0; i < sk; ++i)
      for (std::size_t j = 0; j < zdim; ++j) {
        Z(i, j) = snf.V(i, snf.rank + j);
        Zproj(j, i) = snf.V_inv(snf.rank + j, i);
      }
  }
  const std::size_t zdim = Z.cols();
  IntegerMatrix X = k < K.dim() ? Zproj * boundary_matrix(K, k + 1) : IntegerMatrix(zdim, 0);
  const auto sx = smith_normal_form(X);
  const IntegerMatrix gens = Z * sx.U_inv;

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < zdim; ++i) {
    if (i < sx.rank) {
      const Integer& d = sx.D(i, i);
      if (d == 1) continue;
      H.torsion_orders.push_back(d);
      H.torsion_cycles.push_back(gens.column(i));
      H.torsion_bounding.push_back(sx.V.column(i));
      rows.push_back(i);
    }
  }
  for (std::size_t i = sx.rank; i < zdim; ++i) {
    H.free_cycles.push_back(gens.column(i));
    rows.push_back(i);
  }
  const IntegerMatrix full = sx.U * Zproj;
  H.class_map = IntegerMatrix(rows.size(), sk);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < sk; ++c) H.class_map(r, c) = full(rows[r], c);
  return H;
}

/// Edge path with a framing facet per edge. vertices has one more entry than facets.
struct FramedPath {
  std::vector<int> vertices;
  std::vector<std::size_t> facets;

  std::size_t length() const { return facets.size(); }
  bool closed() const { return vertices.empty() || vertices.front() == vertices.back(); }

  FramedPath inverse() const {
    FramedPath p;
    p.vertices.assign(vertices.rbegin(), vertices.rend());
    p.facets.assign(facets.rbegin(), facets.rend());
    return p;
  }

  friend bool operator==(const FramedPath& a, const FramedPath& b) {
    return a.vertices == b.vertices && a.facets == b.facets;
  }
};

/// Frames every edge of a vertex path by the lowest-id facet containing it.
inline FramedPath frame_path(const SimplicialComplex& K, const std::vector<int>& vertices, bool require_closed = true) {
  FramedPath p;
  p.vertices = vertices;
  if (vertices.size() <= 1) return p;
  if (require_closed && vertices.front() != vertices.back()) fail(ErrorCode::NotAPath, "path is not closed");
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const int a = vertices[i], b = vertices[i + 1];
    if (a == b) fail(ErrorCode::NotAPath, "repeated vertex in path");
    if (a < 0 || b < 0 || static_cast<std::size_t>(std::max(a, b)) >= K.num_vertices())
      fail(ErrorCode::EdgeNotInComplex, "vertex out of range");
    oriented_edge(K, a, b);
    const Vertices e{a, b};
    p.facets.push_back(K.facets_containing(e).front());
  }
  return p;
}

inline void check_framing(const SimplicialComplex& K, const FramedPath& p) {
  if (p.vertices.size() != p.facets.size() + 1 && !(p.vertices.empty() && p.facets.empty()))
    fail(ErrorCode::InvalidFraming, "vertex/facet count mismatch");
  for (std::size_t i = 0; i < p.facets.size(); ++i) {
    if (p.facets[i] >= K.num_facets()) fail(ErrorCode::InvalidFraming, "facet index out of range");
    const auto& T = K.facet(p.facets[i]);
    const int a = p.vertices[i], b = p.vertices[i + 1];
    if (a == b || !std::binary_search(T.begin(), T.end(), a) || !std::binary_search(T.begin(), T.end(), b))
      fail(ErrorCode::InvalidFraming, "edge " + std::to_string(i) + " not contained in its framing facet");
  }
}

/// Integer 1-chain carried by a vertex path.
inline Chain path_chain(const SimplicialComplex& K, const std::vector<int>& vertices) {
  Chain c(K.count(1));
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto e = oriented_edge(K, vertices[i], vertices[i + 1]);
    c[e.index] += e.sign;
  }
  return c;
}

/// Turns an integer 1-cycle into one closed vertex path carrying the same chain: an Euler circuit per
/// support component, joined to the lowest support vertex by out-and-back connecting paths.
inline std::vector<int> cycle_to_path(const SimplicialComplex& K, const Chain& cycle) {
  const auto& edges = K.simplices(1);
  const std::size_t nv = K.num_vertices();
  std::vector<std::vector<int>> out(nv);
  std::size_t total = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Integer& c = cycle[e];
    if (sgn(c) == 0) continue;
    const int a = edges[e][0], b = edges[e][1];
    const long times = Integer(abs(c)).get_si();
    for (long t = 0; t < times; ++t) {
      if (sgn(c) > 0) out[a].push_back(b);
      else out[b].push_back(a);
    }
    total += static_cast<std::size_t>(times);
  }
  if (total == 0) return {};
  for (auto& o : out) std::sort(o.begin(), o.end(), std::greater<>());
  {
    std::vector<long> bal(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) {
      bal[v] += static_cast<long>(out[v].size());
      for (int w : out[v]) bal[w] -= 1;
    }
    for (long b : bal)
      if (b != 0) fail(ErrorCode::NotAPath, "chain is not a cycle");
  }

  auto euler = [&](int start) {
    std::vector<int> stack{start}, circuit;
    while (!stack.empty()) {
      const int v = stack.back();
      if (!out[v].empty()) {
        const int w = out[v].back();
        out[v].pop_back();
        stack.push_back(w);
      } else {
        circuit.push_back(v);
        stack.pop_back();
      }
    }
    std::reverse(circuit.begin(), circuit.end());
    return circuit;
  };
  auto skeleton_path = [&](int from, int to) {
    std::vector<int> prev(nv, -1);
    std::queue<int> q;
    q.push(from);
    prev[from] = from;
    std::vector<std::vector<int>> adj(nv);
    for (const auto& e : edges) {
      adj[e[0]].push_back(e[1]);
      adj[e[1]].push_back(e[0]);
    }
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (prev[w] < 0) {
          prev[w] = v;
          q.push(w);
        }
    }
    std::vector<int> p{to};
    while (p.back() != from) p.push_back(prev[p.back()]);
    std::reverse(p.begin(), p.end());
    return p;
  };

  int base = -1;
  for (std::size_t v = 0; v < nv && base < 0; ++v)
    if (!out[v].empty()) base = static_cast<int>(v);
  std::vector<int> path = euler(base);
  for (std::size_t v = 0; v < nv; ++v) {
    if (out[v].empty()) continue;
    auto loop = euler(static_cast<int>(v));
    auto conn = skeleton_path(base, static_cast<int>(v));
    std::vector<int> detour(conn.begin(), conn.end());
    detour.insert(detour.end(), loop.begin() + 1, loop.end());
    detour.insert(detour.end(), conn.rbegin() + 1, conn.rend());
    path.insert(path.end(), detour.begin() + 1, detour.end());
  }
  return path;
}

/// One oriented 2-simplex (ordered vertices) with the facet framing it.
struct FramedTriangle {
  std::array<int, 3> vertices;
  std::size_t facet;
};

struct FramedTwoChain {
  std::vector<FramedTriangle> triangles;
};

/// Frames an integer 2-chain: copies expanded by multiplicity, negative coefficients reversed. For n = 3 on
/// an oriented complex the framing facet induces the triangle's orientation; otherwise the lowest-id facet.
inline FramedTwoChain frame_chain2(const SimplicialComplex& K, const Chain& chain) {
  FramedTwoChain out;
  const auto& tris = K.simplices(2);
  if (chain.size() != tris.size()) fail(ErrorCode::SimplexNotInComplex, "chain length does not match 2-simplices");
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (sgn(chain[i]) == 0) continue;
    std::array<int, 3> v{tris[i][0], tris[i][1], tris[i][2]};
    if (sgn(chain[i]) < 0) std::swap(v[0], v[1]);
    const auto star = K.facets_containing(tris[i]);
    std::size_t facet = star.front();
    if (K.dim() == 3 && K.oriented())
      for (std::size_t t : star)
        if (K.induced_sign_on(t, Vertices(v.begin(), v.end())) == 1) facet = t;
    const long times = Integer(abs(chain[i])).get_si();
    for (long c = 0; c < times; ++c) out.triangles.push_back({v, facet});
  }
  return out;
}

/// Frames an explicit list of oriented triangles (each must be a 2-simplex of K).
inline FramedTwoChain frame_triangles(const SimplicialComplex& K, const std::vector<std::array<int, 3>>& oriented) {
  Chain chain(K.count(2));
  for (const auto& t : oriented) {
    const auto s = Simplex::from_ordered(Vertices(t.begin(), t.end()));
    auto idx = K.index_of(s.vertices);
    if (!idx) fail(ErrorCode::SimplexNotInComplex, "triangle not in complex");
    chain[*idx] += s.sign;
  }
  return frame_chain2(K, chain);
}

// ---------------------------------------------------------------------------------------------
// Text formats. Framed path: "v <i>" lines alternating with "f <facet>". Framed 2-chain:
// "t <v0> <v1> <v2> f <facet> m <multiplicity>".

inline std::string write_framed_path(const FramedPath& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    os << "v " << p.vertices[i] << "\n";
    if (i < p.facets.size()) os << "f " << p.facets[i] << "\n";
  }
  return os.str();
}

inline FramedPath read_framed_path(std::istream& in) {
  FramedPath p;
  std::string line;
  int lineno = 0;
  bool expect_vertex = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    long value = -1;
    std::string extra;
    if (!(ls >> value) || value < 0 || (ls >> extra) || (tag != "v" && tag != "f") ||
        (tag == "v") != expect_vertex)
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": malformed framed path line");
    if (tag == "v") p.vertices.push_back(static_cast<int>(value));
    else p.facets.push_back(static_cast<std::size_t>(value));
    expect_vertex = !expect_vertex;
  }
  if (!p.vertices.empty() && expect_vertex) fail(ErrorCode::ParseError, "framed path ends with a facet line");
  return p;
}

inline std::string write_framed_chain(const FramedTwoChain& c) {
  std::ostringstream os;
  for (const auto& t : c.triangles)
    os << "t " << t.vertices[0] << " " << t.vertices[1] << " " << t.vertices[2] << " f " << t.facet << " m 1\n";
  return os.str();
}

inline FramedTwoChain read_framed_chain(std::istream& in) {
  FramedTwoChain c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag, ftag, mtag, extra;
    if (!(ls >> tag) || tag[0] == '#') continue;
    std::array<int, 3> v{};
    long facet = -1, mult = 0;
    if (tag != "t" || !(ls >> v[0] >> v[1] >> v[2] >> ftag >> facet >> mtag >> mult) || ftag != "f" ||
        mtag != "m" || facet < 0 || mult < 1 || (ls >> extra))
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": malformed framed chain line");
    for (long i = 0; i < mult; ++i) c.triangles.push_back({v, static_cast<std::size_t>(facet)});
  }
  return c;
}

}  // namespace dgc
