#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dgconn/error.hpp"
#include "dgconn/scalar.hpp"

namespace dgc {

using Vertices = std::vector<int>;

/// Parity of the permutation sorting `v` (+1 even, -1 odd). Vertices must be distinct.
inline int sorting_sign(std::span<const int> v) {
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) sign = -sign;
  return sign;
}

/// An oriented simplex in canonical form: strictly increasing vertices plus a sign.
struct Simplex {
  Vertices vertices;
  int sign = 1;

  static Simplex from_ordered(Vertices v) {
    Simplex s;
    s.sign = sorting_sign(v);
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      fail(ErrorCode::NotASimplex, "repeated vertex in simplex");
    s.vertices = std::move(v);
    return s;
  }

  int dim() const { return static_cast<int>(vertices.size()) - 1; }

  friend bool operator==(const Simplex& a, const Simplex& b) {
    return a.vertices == b.vertices && a.sign == b.sign;
  }
};

/// Removes position `pos` from a sorted vertex list.
inline Vertices without(const Vertices& v, std::size_t pos) {
  Vertices out;
  out.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != pos) out.push_back(v[i]);
  return out;
}

inline std::size_t position_of(const Vertices& sorted, int vertex) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), vertex);
  if (it == sorted.end() || *it != vertex) return sorted.size();
  return static_cast<std::size_t>(it - sorted.begin());
}

inline bool contains_all(const Vertices& sorted, std::span<const int> sub) {
  return std::all_of(sub.begin(), sub.end(), [&](int v) { return std::binary_search(sorted.begin(), sorted.end(), v); });
}

/// A triangulated closed pseudomanifold (every codimension-one face has two cofacets,
/// every codimension-two star is a single cycle). Immutable once built.
class SimplicialComplex {
 public:
  int dim() const { return n_; }
  std::size_t num_vertices() const { return skeleta_[0].size(); }
  std::size_t num_facets() const { return facets_.size(); }
  std::size_t count(int k) const { return skeleta_.at(k).size(); }

  const std::vector<Vertices>& facets() const { return facets_; }
  const Vertices& facet(std::size_t t) const { return facets_[t]; }
  const std::vector<Vertices>& simplices(int k) const { return skeleta_.at(k); }

  std::optional<std::size_t> index_of(const Vertices& sorted) const {
    const int k = static_cast<int>(sorted.size()) - 1;
    if (k < 0 || k > n_) return std::nullopt;
    auto it = lookup_[k].find(sorted);
    if (it == lookup_[k].end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(const Vertices& sorted) const {
    auto idx = index_of(sorted);
    if (!idx) fail(ErrorCode::NotASimplex, "simplex not in complex");
    return *idx;
  }

  /// Index of the codimension-one face of facet `t` that omits local vertex `pos`.
  std::size_t face_of_facet(std::size_t t, std::size_t pos) const { return facet_faces_[t][pos]; }
  const std::array<std::size_t, 2>& cofacets(std::size_t face) const { return cofacets_[face]; }

  /// Facet on the other side of face `pos` of facet `t`.
  std::size_t neighbor(std::size_t t, std::size_t pos) const {
    const auto& c = cofacets_[facet_faces_[t][pos]];
    return c[0] == t ? c[1] : c[0];
  }

  std::size_t other_cofacet(std::size_t face, std::size_t t) const {
    const auto& c = cofacets_[face];
    return c[0] == t ? c[1] : c[0];
  }

  const std::vector<std::size_t>& facets_of_vertex(int v) const { return vertex_facets_[v]; }

  /// Facets containing every vertex of `simplex`, in increasing facet order.
  std::vector<std::size_t> facets_containing(std::span<const int> simplex) const {
    std::vector<std::size_t> out;
    if (simplex.empty()) {
      out.resize(facets_.size());
      std::iota(out.begin(), out.end(), 0);
      return out;
    }
    for (std::size_t t : vertex_facets_.at(simplex[0]))
      if (contains_all(facets_[t], simplex)) out.push_back(t);
    return out;
  }

  int num_components() const { return components_; }
  bool connected() const { return components_ == 1; }

  bool oriented() const { return orientation_.has_value(); }
  /// +1/-1 relative to the sorted vertex order; +1 everywhere when no orientation exists.
  int orientation(std::size_t t) const { return orientation_ ? (*orientation_)[t] : 1; }
  const std::optional<std::vector<int>>& orientation_assignment() const { return orientation_; }

  /// Sign of the orientation facet `t` induces on its sorted face at `pos`.
  int induced_sign(std::size_t t, std::size_t pos) const { return orientation(t) * ((pos % 2) ? -1 : 1); }

  /// Sign facet `t` induces on the ordered sub-simplex `face` (any vertex order).
  int induced_sign_on(std::size_t t, const Vertices& ordered_face) const {
    const auto& f = facets_[t];
    Vertices missing;
    for (int v : f)
      if (std::find(ordered_face.begin(), ordered_face.end(), v) == ordered_face.end()) missing.push_back(v);
    if (missing.size() != 1) fail(ErrorCode::NotASimplex, "not a codimension-one face");
    return induced_sign(t, position_of(f, missing[0])) * sorting_sign(ordered_face);
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.n_ == b.n_ && a.facets_ == b.facets_;
  }

  friend SimplicialComplex build_complex(std::vector<Vertices> facets);

 private:
  int n_ = 0;
  std::vector<Vertices> facets_;
  std::vector<std::vector<Vertices>> skeleta_;
  std::vector<std::map<Vertices, std::size_t>> lookup_;
  std::vector<std::vector<std::size_t>> facet_faces_;
  std::vector<std::array<std::size_t, 2>> cofacets_;
  std::vector<std::vector<std::size_t>> vertex_facets_;
  std::optional<std::vector<int>> orientation_;
  int components_ = 0;
};

namespace detail {

inline void subsets_of(const Vertices& v, std::size_t size, std::size_t start, Vertices& cur,
                       std::vector<Vertices>& out) {
  if (cur.size() == size) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + (size - cur.size()) <= v.size(); ++i) {
    cur.push_back(v[i]);
    subsets_of(v, size, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Orientation by propagation; per component. Returns nullopt when some component is not orientable.
inline std::optional<std::vector<int>> propagate_orientation(const SimplicialComplex& K,
                                                              std::vector<int>* component = nullptr) {
  const std::size_t nf = K.num_facets();
  std::vector<int> sign(nf, 0), comp(nf, -1);
  bool ok = true;
  int c = 0;
  for (std::size_t root = 0; root < nf; ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    comp[root] = c;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t t = q.front();
      q.pop();
      for (std::size_t pos = 0; pos <= static_cast<std::size_t>(K.dim()); ++pos) {
        const std::size_t face = K.face_of_facet(t, pos);
        const std::size_t u = K.other_cofacet(face, t);
        const std::size_t upos = position_of(K.facet(u), [&] {
          for (int v : K.facet(u))
            if (!std::binary_search(K.facet(t).begin(), K.facet(t).end(), v)) return v;
          return -1;
        }());
        // induced(t) = -induced(u) on the shared face.
        const int tsign = sign[t] * ((pos % 2) ? -1 : 1);
        const int want = -tsign * ((upos % 2) ? -1 : 1);
        if (sign[u] == 0) {
          sign[u] = want;
          comp[u] = c;
          q.push(u);
        } else if (sign[u] != want) {
          ok = false;
        }
      }
    }
    ++c;
  }
  if (component) *component = comp;
  if (!ok) return std::nullopt;
  return sign;
}

}  // namespace detail

/// Validates a facet list and derives skeleta, face adjacency, components and orientation.
inline SimplicialComplex build_complex(std::vector<Vertices> facets) {
  if (facets.empty()) fail(ErrorCode::NotPure, "empty facet list");
  const std::size_t width = facets[0].size();
  if (width < 3) fail(ErrorCode::WrongDimension, "dimension must be at least 2");
  int max_vertex = -1;
  for (auto& f : facets) {
    if (f.size() != width) fail(ErrorCode::MixedDimension, "facets of different dimensions");
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end())
      fail(ErrorCode::NotASimplex, "facet with repeated vertex");
    if (f.front() < 0) fail(ErrorCode::NotASimplex, "negative vertex id");
    max_vertex = std::max(max_vertex, f.back());
  }
  {
    auto sorted = facets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCode::NonPseudomanifold, "duplicate facet");
  }

  SimplicialComplex K;
  K.n_ = static_cast<int>(width) - 1;
  K.facets_ = std::move(facets);
  const int n = K.n_;

  K.vertex_facets_.assign(max_vertex + 1, {});
  for (std::size_t t = 0; t < K.facets_.size(); ++t)
    for (int v : K.facets_[t]) K.vertex_facets_[v].push_back(t);
  for (int v = 0; v <= max_vertex; ++v)
    if (K.vertex_facets_[v].empty())
      fail(ErrorCode::NotPure, "vertex " + std::to_string(v) + " lies in no facet (ids must be dense)");

  K.skeleta_.assign(n + 1, {});
  K.lookup_.assign(n + 1, {});
  for (int k = 0; k <= n; ++k) {
    std::vector<Vertices> all;
    for (const auto& f : K.facets_) {
      Vertices cur;
      detail::subsets_of(f, static_cast<std::size_t>(k + 1), 0, cur, all);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    K.skeleta_[k] = std::move(all);
    for (std::size_t i = 0; i < K.skeleta_[k].size(); ++i) K.lookup_[k].emplace(K.skeleta_[k][i], i);
  }

  const std::size_t nfaces = K.skeleta_[n - 1].size();
  std::vector<std::vector<std::size_t>> cof(nfaces);
  K.facet_faces_.assign(K.facets_.size(), std::vector<std::size_t>(n + 1));
  for (std::size_t t = 0; t < K.facets_.size(); ++t)
    for (int pos = 0; pos <= n; ++pos) {
      const std::size_t face = K.lookup_[n - 1].at(without(K.facets_[t], pos));
      K.facet_faces_[t][pos] = face;
      cof[face].push_back(t);
    }
  K.cofacets_.resize(nfaces);
  for (std::size_t f = 0; f < nfaces; ++f) {
    if (cof[f].size() != 2)
      fail(ErrorCode::NonPseudomanifold, "face " + std::to_string(f) + " lies in " + std::to_string(cof[f].size()) +
                                             " facets");
    K.cofacets_[f] = {cof[f][0], cof[f][1]};
  }

  // Link condition: the star of every (n-2)-simplex is one cycle through the faces containing it.
  for (const auto& sigma : K.skeleta_[n - 2]) {
    const auto star = K.facets_containing(sigma);
    std::vector<char> seen(K.facets_.size(), 0);
    std::size_t visited = 0;
    std::queue<std::size_t> q;
    q.push(star[0]);
    seen[star[0]] = 1;
    while (!q.empty()) {
      const std::size_t t = q.front();
      q.pop();
      ++visited;
      for (int pos = 0; pos <= n; ++pos) {
        const int v = K.facets_[t][pos];
        if (std::binary_search(sigma.begin(), sigma.end(), v)) continue;
        const std::size_t u = K.neighbor(t, pos);
        if (!seen[u]) {
          seen[u] = 1;
          q.push(u);
        }
      }
    }
    if (visited != star.size()) fail(ErrorCode::BadLink, "star of an (n-2)-simplex is not a single cycle");
  }

  std::vector<int> comp;
  K.orientation_ = detail::propagate_orientation(K, &comp);
  K.components_ = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
  return K;
}

/// Cyclically ordered star of an (n-2)-simplex: facet k is sigma + {rim[k-1], rim[k]} (indices mod m).
struct EdgeStar {
  Vertices sigma;
  std::vector<std::size_t> facets;
  std::vector<int> rim;

  std::size_t m() const { return facets.size(); }
  std::size_t facet(long k) const { return facets[mod(k)]; }
  int rim_vertex(long k) const { return rim[mod(k)]; }
  std::size_t mod(long k) const {
    const long mm = static_cast<long>(facets.size());
    return static_cast<std::size_t>(((k % mm) + mm) % mm);
  }
};

namespace detail {
inline int other_vertex(const Vertices& facet, const Vertices& sigma, int exclude) {
  for (int v : facet)
    if (v != exclude && !std::binary_search(sigma.begin(), sigma.end(), v)) return v;
  return -1;
}
}  // namespace detail

/// Walks the star of sigma starting at its lowest facet. With an orientation, facet k induces the
/// orientation opposite to the ordered face (sigma, rim[k-1]); otherwise the lower-id neighbour comes first.
inline EdgeStar star_cycle(const SimplicialComplex& K, const Vertices& sigma_in) {
  Vertices sigma = sigma_in;
  std::sort(sigma.begin(), sigma.end());
  if (static_cast<int>(sigma.size()) != K.dim() - 1) fail(ErrorCode::WrongDimension, "star_cycle needs an (n-2)-simplex");
  if (!K.index_of(sigma)) fail(ErrorCode::NotASimplex, "simplex not in complex");
  const auto star = K.facets_containing(sigma);
  const std::size_t f0 = star.front();
  const auto& F0 = K.facet(f0);
  std::vector<int> free;
  for (int v : F0)
    if (!std::binary_search(sigma.begin(), sigma.end(), v)) free.push_back(v);
  const int a = free[0], b = free[1];

  auto across = [&](std::size_t t, int keep) {
    // facet across the face sigma + {keep} of t
    return K.neighbor(t, position_of(K.facet(t), detail::other_vertex(K.facet(t), sigma, keep)));
  };

  int in_vertex;  // rim[m-1]
  if (K.oriented()) {
    Vertices ordered = sigma;
    ordered.push_back(a);
    in_vertex = K.induced_sign_on(f0, ordered) == -1 ? a : b;
  } else {
    in_vertex = across(f0, a) < across(f0, b) ? b : a;
  }

  EdgeStar st;
  st.sigma = sigma;
  std::size_t t = f0;
  int prev = in_vertex;
  do {
    const int out = detail::other_vertex(K.facet(t), sigma, prev);
    st.facets.push_back(t);
    st.rim.push_back(out);
    t = across(t, out);
    prev = out;
  } while (t != f0 && st.facets.size() <= star.size());
  if (st.facets.size() != star.size() || st.rim.back() != in_vertex)
    fail(ErrorCode::BadLink, "star walk did not close");
  return st;
}

struct DoubleCover {
  std::shared_ptr<const SimplicialComplex> complex;
  std::vector<std::size_t> facet_projection;
  std::vector<int> vertex_projection;
};

struct OrientationResult {
  bool orientable = false;
  std::vector<int> signs;
  std::optional<DoubleCover> cover;
};

/// Orientation of a connected complex, or its connected orientable double cover.
inline OrientationResult orient(const SimplicialComplex& K) {
  if (!K.connected()) fail(ErrorCode::Disconnected, "orient requires a connected complex");
  OrientationResult res;
  if (K.oriented()) {
    res.orientable = true;
    res.signs = *K.orientation_assignment();
    return res;
  }
  // Cover facets (t, o) with o in {0:+1, 1:-1}; adjacent across a face iff induced orientations are opposite.
  const std::size_t nf = K.num_facets();
  const int n = K.dim();
  auto cover_id = [nf](std::size_t t, int o) { return t + nf * static_cast<std::size_t>(o); };
  // union-find over (cover facet, local vertex position)
  std::vector<std::size_t> parent(2 * nf * (n + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto slot = [&](std::size_t cf, std::size_t pos) { return cf * (n + 1) + pos; };
  for (std::size_t t = 0; t < nf; ++t)
    for (int o = 0; o < 2; ++o)
      for (int pos = 0; pos <= n; ++pos) {
        const std::size_t u = K.neighbor(t, pos);
        const auto& T = K.facet(t);
        const auto& U = K.facet(u);
        const int missing = detail::other_vertex(U, without(T, pos), -1);
        const std::size_t upos = position_of(U, missing);
        const int tsign = (o ? -1 : 1) * ((pos % 2) ? -1 : 1);
        const int usign_plus = (upos % 2) ? -1 : 1;
        const int ou = (tsign == -usign_plus) ? 0 : 1;
        const std::size_t a = cover_id(t, o), b = cover_id(u, ou);
        for (int v : without(T, pos)) parent[find(slot(a, position_of(T, v)))] = find(slot(b, position_of(U, v)));
      }
  std::map<std::size_t, int> relabel;
  std::vector<Vertices> cover_facets;
  DoubleCover dc;
  for (int o = 0; o < 2; ++o)
    for (std::size_t t = 0; t < nf; ++t) {
      Vertices f;
      for (int pos = 0; pos <= n; ++pos) {
        const std::size_t root = find(slot(cover_id(t, o), pos));
        auto [it, inserted] = relabel.emplace(root, static_cast<int>(relabel.size()));
        if (inserted) dc.vertex_projection.push_back(K.facet(t)[pos]);
        f.push_back(it->second);
      }
      cover_facets.push_back(f);
      dc.facet_projection.push_back(t);
    }
  dc.complex = std::make_shared<const SimplicialComplex>(build_complex(cover_facets));
  res.cover = std::move(dc);
  return res;
}

struct ComplexStats {
  int n = 0;
  std::vector<std::size_t> f_vector;
  long euler = 0;
  std::vector<Rational> mean_incidence;  // m_k
  long parameter_count = 0;              // n s_n - s_0 + 1
  std::optional<long> b;                 // rank of the topological part of the holonomy data
  std::optional<long> remaining;         // R in (rho) = (n-1)s_{n-1} - (n-2)s_{n-2} + b + R, with (rho) = (mu)
};

inline Integer binomial(long n, long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline ComplexStats stats(const SimplicialComplex& K, std::optional<long> b = std::nullopt) {
  ComplexStats s;
  s.n = K.dim();
  const int n = s.n;
  for (int k = 0; k <= n; ++k) s.f_vector.push_back(K.count(k));
  for (int k = 0; k <= n; ++k) s.euler += (k % 2 ? -1L : 1L) * static_cast<long>(s.f_vector[k]);
  for (int k = 0; k <= n; ++k) {
    Rational m(binomial(n + 1, k + 1) * static_cast<unsigned long>(s.f_vector[n]),
               Integer(static_cast<unsigned long>(s.f_vector[k])));
    m.canonicalize();
    s.mean_incidence.push_back(m);
  }
  s.parameter_count = n * static_cast<long>(s.f_vector[n]) - static_cast<long>(s.f_vector[0]) + 1;
  if (b) {
    s.b = b;
    const long local = (n - 1) * static_cast<long>(s.f_vector[n - 1]) - (n - 2) * static_cast<long>(s.f_vector[n - 2]);
    s.remaining = s.parameter_count - local - *b;
  }
  return s;
}

// ---------------------------------------------------------------------------------------------
// Catalog

namespace detail {

inline std::vector<Vertices> sphere_facets(int n) {
  Vertices all(n + 2);
  std::iota(all.begin(), all.end(), 0);
  std::vector<Vertices> out;
  for (int skip = n + 1; skip >= 0; --skip) out.push_back(without(all, skip));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Vertices> torus7_facets() {
  std::vector<Vertices> out;
  for (int i = 0; i < 7; ++i) {
    out.push_back({i, (i + 1) % 7, (i + 3) % 7});
    out.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return out;
}

inline std::vector<Vertices> rp2_6_facets() {
  return {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
          {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
}

/// Connected sum of two 7-vertex tori: drop one triangle from each and identify the boundaries.
inline std::vector<Vertices> genus2_facets() {
  auto a = torus7_facets();
  const Vertices removed = {0, 1, 3};
  std::vector<Vertices> out;
  for (auto f : a) {
    std::sort(f.begin(), f.end());
    if (f != removed) out.push_back(f);
  }
  // second copy: vertex v -> 7 + v, except the removed triangle's vertices glue onto 0, 1, 3
  std::map<int, int> second{{0, 0}, {1, 1}, {3, 3}};
  int next = 7;
  for (int v = 0; v < 7; ++v)
    if (!second.count(v)) second[v] = next++;
  for (auto f : a) {
    std::sort(f.begin(), f.end());
    if (f == removed) continue;
    Vertices g;
    for (int v : f) g.push_back(second[v]);
    out.push_back(g);
  }
  return out;
}

/// 3x3x3 periodic cube grid, each cube split into the six monotone-path tetrahedra.
inline std::vector<Vertices> torus3d_facets() {
  const int L = 3;
  auto id = [L](int x, int y, int z) { return ((x % L) * L + (y % L)) * L + (z % L); };
  std::vector<Vertices> out;
  std::array<int, 3> perm{0, 1, 2};
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y)
      for (int z = 0; z < L; ++z) {
        std::array<int, 3> p{0, 1, 2};
        do {
          std::array<int, 3> c{x, y, z};
          Vertices tet{id(c[0], c[1], c[2])};
          for (int axis : p) {
            c[axis] += 1;
            tet.push_back(id(c[0], c[1], c[2]));
          }
          out.push_back(tet);
        } while (std::next_permutation(p.begin(), p.end()));
      }
  (void)perm;
  return out;
}

}  // namespace detail

/// Named triangulations: sphereN (or sphere(N)), torus7, rp2_6, genus2, torus3d.
inline SimplicialComplex catalog(const std::string& name) {
  std::string key = name;
  key.erase(std::remove_if(key.begin(), key.end(), [](char c) { return c == '(' || c == ')'; }), key.end());
  if (key.rfind("sphere", 0) == 0 && key.size() > 6) {
    const std::string num = key.substr(6);
    if (std::all_of(num.begin(), num.end(), ::isdigit)) {
      const int n = std::stoi(num);
      if (n >= 2 && n <= 12) return build_complex(detail::sphere_facets(n));
    }
  }
  if (key == "torus7") return build_complex(detail::torus7_facets());
  if (key == "rp2_6") return build_complex(detail::rp2_6_facets());
  if (key == "genus2") return build_complex(detail::genus2_facets());
  if (key == "torus3d") return build_complex(detail::torus3d_facets());
  fail(ErrorCode::UnknownName, "no catalog entry '" + name + "'");
}

// ---------------------------------------------------------------------------------------------
// Complex file format: "dim <n>" then one facet per line; '#' starts a comment line.

inline std::string write_complex(const SimplicialComplex& K) {
  std::ostringstream os;
  os << "dim " << K.dim() << "\n";
  for (const auto& f : K.facets()) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
    os << "\n";
  }
  return os.str();
}

inline SimplicialComplex read_complex(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::optional<int> dim;
  std::vector<Vertices> facets;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (!dim) {
      std::string kw;
      int n = 0;
      if (!(ls >> kw >> n) || kw != "dim" || n < 2)
        fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 'dim <n>'");
      dim = n;
      continue;
    }
    Vertices f;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
        f.push_back(v);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad vertex id '" + tok + "'");
      }
    }
    if (static_cast<int>(f.size()) != *dim + 1)
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": facet needs " + std::to_string(*dim + 1) +
                                      " vertices");
    facets.push_back(f);
  }
  if (!dim) fail(ErrorCode::ParseError, "missing 'dim' header");
  return build_complex(facets);
}

inline SimplicialComplex read_complex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  return read_complex(in);
}

}  // namespace dgc
