#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dgconn/complex.hpp"
#include "dgconn/connection.hpp"
#include "dgconn/error.hpp"
#include "dgconn/homology.hpp"
#include "dgconn/matrix.hpp"

namespace dgc {

// ---------------------------------------------------------------------------------------------
// Words

/// Letters in application order: (slot, exponent). Written a_{i_q}^{r_q} ... a_{i_0}^{r_0}, the last
/// applied letter leftmost.
struct Word {
  std::vector<std::pair<int, int>> letters;

  /// Appends `count` applications of a_slot, merging with the previous letter when equal.
  void push(int slot, int count = 1) {
    if (count <= 0) return;
    if (!letters.empty() && letters.back().first == slot) letters.back().second += count;
    else letters.push_back({slot, count});
  }

  std::size_t length() const {
    std::size_t n = 0;
    for (const auto& l : letters) n += l.second;
    return n;
  }

  /// One slot per step, in application order.
  std::vector<int> expanded() const {
    std::vector<int> out;
    for (const auto& [s, r] : letters) out.insert(out.end(), r, s);
    return out;
  }

  static Word from_slots(const std::vector<int>& slots) {
    Word w;
    for (int s : slots) w.push(s);
    return w;
  }

  /// `second` applied after `first`.
  friend Word operator*(const Word& second, const Word& first) {
    Word w = first;
    for (const auto& [s, r] : second.letters) w.push(s, r);
    return w;
  }

  friend bool operator==(const Word&, const Word&) = default;

  std::string str() const {
    std::string s;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      if (!s.empty()) s += ' ';
      s += "a" + std::to_string(it->first);
      if (it->second != 1) s += "^" + std::to_string(it->second);
    }
    return s;
  }
};

/// Parses "a0^3 a1^2" (rightmost letter applied first).
inline Word parse_word(const std::string& text, int n) {
  std::istringstream in(text);
  std::vector<std::pair<int, int>> written;
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 'a') fail(ErrorCode::ParseError, "bad letter '" + tok + "'");
    const auto caret = tok.find('^');
    int slot = 0, exp = 1;
    try {
      std::size_t used = 0;
      const std::string idx = tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
      slot = std::stoi(idx, &used);
      if (used != idx.size()) throw std::invalid_argument(idx);
      if (caret != std::string::npos) {
        const std::string e = tok.substr(caret + 1);
        exp = std::stoi(e, &used);
        if (used != e.size()) throw std::invalid_argument(e);
      }
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad letter '" + tok + "'");
    }
    if (slot < 0 || slot >= n) fail(ErrorCode::ParseError, "generator index out of range in '" + tok + "'");
    if (exp < 1) fail(ErrorCode::ParseError, "exponent must be positive in '" + tok + "'");
    written.push_back({slot, exp});
  }
  Word w;
  for (auto it = written.rbegin(); it != written.rend(); ++it) w.push(it->first, it->second);
  return w;
}

// ---------------------------------------------------------------------------------------------
// Permutations: y[p[a]] = x[a]

struct Permutation {
  std::vector<int> map;

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.map.resize(n);
    std::iota(p.map.begin(), p.map.end(), 0);
    return p;
  }

  static Permutation transposition(std::size_t n, int a, int b) {
    auto p = identity(n);
    std::swap(p.map[a], p.map[b]);
    return p;
  }

  std::size_t size() const { return map.size(); }
  int operator[](std::size_t a) const { return map[a]; }

  /// (p * q)(a) = p(q(a)): q acts first.
  friend Permutation operator*(const Permutation& p, const Permutation& q) {
    Permutation r;
    for (int a : q.map) r.map.push_back(p.map[a]);
    return r;
  }

  Permutation inverse() const {
    Permutation r;
    r.map.resize(map.size());
    for (std::size_t a = 0; a < map.size(); ++a) r.map[map[a]] = static_cast<int>(a);
    return r;
  }

  Permutation extended(std::size_t n) const {
    auto p = *this;
    for (std::size_t a = map.size(); a < n; ++a) p.map.push_back(static_cast<int>(a));
    return p;
  }

  int sign() const {
    std::vector<char> seen(map.size(), 0);
    int s = 1;
    for (std::size_t a = 0; a < map.size(); ++a) {
      if (seen[a]) continue;
      std::size_t len = 0;
      for (std::size_t b = a; !seen[b]; b = map[b]) {
        seen[b] = 1;
        ++len;
      }
      if (len % 2 == 0) s = -s;
    }
    return s;
  }

  bool is_identity() const {
    for (std::size_t a = 0; a < map.size(); ++a)
      if (map[a] != static_cast<int>(a)) return false;
    return true;
  }

  template <class T>
  std::vector<T> apply(const std::vector<T>& x) const {
    std::vector<T> y(x.size());
    for (std::size_t a = 0; a < map.size(); ++a) y[map[a]] = x[a];
    return y;
  }

  template <class S>
  Matrix<S> matrix() const {
    Matrix<S> m(map.size(), map.size());
    for (std::size_t a = 0; a < map.size(); ++a) m(map[a], a) = Field<S>::one();
    return m;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

// ---------------------------------------------------------------------------------------------
// Thick paths

/// Facets T_1..T_N glued along faces Delta_k = T_k cap T_{k+1}. Step k happens inside T_k: the vertex in
/// slot `slots[k]` of Delta_{k-1} is dropped and the remaining vertex of T_k takes its slot.
struct ThickPath {
  std::vector<Vertices> faces;        // Delta_0 .. Delta_N in slot order
  std::vector<std::size_t> facets;    // T_1 .. T_N
  std::size_t first_facet = 0;        // T_1 (also for the empty path)
  std::vector<int> slots, dropped, added;

  std::size_t length() const { return facets.size(); }
  const Vertices& initial() const { return faces.front(); }
  const Vertices& final() const { return faces.back(); }

  bool closed() const {
    auto a = initial(), b = final();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  /// Facet the path would enter next (the other cofacet of the final face).
  std::size_t next_facet(const SimplicialComplex& K) const {
    if (facets.empty()) return first_facet;
    auto f = final();
    std::sort(f.begin(), f.end());
    return K.other_cofacet(K.require_index(f), facets.back());
  }

  /// Closed and leaving through the facet it started in, so it can be followed by another path from Delta_0.
  bool composable(const SimplicialComplex& K) const { return closed() && next_facet(K) == first_facet; }

  Word word() const { return Word::from_slots(slots); }
};

/// T_1 for an initial face: the cofacet inducing the orientation opposite to the slot order on an oriented
/// complex, otherwise the lower facet id.
inline std::size_t initial_facet(const SimplicialComplex& K, const Vertices& slots) {
  Vertices sorted = slots;
  std::sort(sorted.begin(), sorted.end());
  if (static_cast<int>(slots.size()) != K.dim() || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorCode::BadLabeling, "initial face needs n distinct labeled vertices");
  const auto idx = K.index_of(sorted);
  if (!idx) fail(ErrorCode::BadLabeling, "initial face is not a simplex of the complex");
  const auto c = K.cofacets(*idx);
  if (K.oriented()) return K.induced_sign_on(c[0], slots) == -1 ? c[0] : c[1];
  return std::min(c[0], c[1]);
}

inline ThickPath empty_thick_path(const SimplicialComplex& K, const Vertices& slots,
                                  std::optional<std::size_t> first = {}) {
  ThickPath p;
  p.first_facet = initial_facet(K, slots);
  if (first) {
    Vertices sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    if (!contains_all(K.facet(*first), sorted)) fail(ErrorCode::BadLabeling, "first facet does not contain the face");
    p.first_facet = *first;
  }
  p.faces.push_back(slots);
  return p;
}

/// Appends one step replacing `slot`.
inline void extend(const SimplicialComplex& K, ThickPath& p, int slot) {
  if (slot < 0 || slot >= K.dim()) fail(ErrorCode::BadLabeling, "slot out of range");
  const std::size_t T = p.next_facet(K);
  const auto& cur = p.final();
  int x = -1;
  for (int v : K.facet(T))
    if (std::find(cur.begin(), cur.end(), v) == cur.end()) x = v;
  Vertices next = cur;
  p.dropped.push_back(next[slot]);
  p.added.push_back(x);
  next[slot] = x;
  p.slots.push_back(slot);
  p.facets.push_back(T);
  p.faces.push_back(std::move(next));
}

inline ThickPath thick_path_from_word(const SimplicialComplex& K, const Vertices& slots, const Word& w,
                                      std::optional<std::size_t> first = {}) {
  auto p = empty_thick_path(K, slots, first);
  for (int s : w.expanded()) extend(K, p, s);
  return p;
}

/// Follows `second` after `first`; requires second to start from first's final face (as a set) and to
/// enter the facet first would enter next.
inline ThickPath concatenate(const SimplicialComplex& K, const ThickPath& first, const ThickPath& second) {
  auto a = first.final(), b = second.initial();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || first.next_facet(K) != second.first_facet)
    fail(ErrorCode::NotClosed, "paths do not compose");
  ThickPath p = first;
  for (std::size_t k = 0; k < second.length(); ++k) {
    const auto& cur = p.final();
    const int slot = static_cast<int>(std::find(cur.begin(), cur.end(), second.dropped[k]) - cur.begin());
    extend(K, p, slot);
    if (p.added.back() != second.added[k]) fail(ErrorCode::BadLabeling, "inconsistent step during concatenation");
  }
  return p;
}

/// Checks that consecutive facets share the stated face and induce opposite orientations on it.
inline bool check_thick_path(const SimplicialComplex& K, const ThickPath& p) {
  for (std::size_t k = 0; k + 1 < p.facets.size(); ++k) {
    const auto& face = p.faces[k + 1];
    Vertices sorted = face;
    std::sort(sorted.begin(), sorted.end());
    if (!contains_all(K.facet(p.facets[k]), sorted) || !contains_all(K.facet(p.facets[k + 1]), sorted)) return false;
    if (p.facets[k] == p.facets[k + 1]) return false;
    if (K.oriented() && K.induced_sign_on(p.facets[k], face) != -K.induced_sign_on(p.facets[k + 1], face)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------------------------
// Holonomy

template <class S>
struct HolonomyResult {
  std::optional<Permutation> P;  // slots of Delta_N -> slots of Delta_0 (closed paths)
  Matrix<S> transport;           // K~ : coordinates on Delta_0 slots -> Delta_N slots
  Matrix<S> K;                   // P K~ for closed paths, K~ otherwise

  const Matrix<S>& full() const {
    if (!P) fail(ErrorCode::NotClosed, "holonomy of an open thick path");
    return K;
  }
};

/// One-step map inside T: identity except row `slot`, which is (mu_{w_s, x}^T)_s.
template <class S>
Matrix<S> one_step(const Connection<S>& mu, std::size_t T, const Vertices& face, int slot, int x) {
  const std::size_t n = face.size();
  auto A = Matrix<S>::identity(n);
  for (std::size_t s = 0; s < n; ++s) A(slot, s) = mu(T, face[s], x);
  return A;
}

/// Slot relabeling of a closed path: p[t] = s when slot t of Delta_N holds the vertex of slot s of Delta_0.
inline Permutation closing_permutation(const ThickPath& k) {
  Permutation p;
  for (int v : k.final())
    p.map.push_back(static_cast<int>(std::find(k.initial().begin(), k.initial().end(), v) - k.initial().begin()));
  return p;
}

template <class S>
HolonomyResult<S> holonomy(const Connection<S>& mu, const ThickPath& k) {
  const std::size_t n = mu.dim();
  HolonomyResult<S> r;
  r.transport = Matrix<S>::identity(n);
  for (std::size_t s = 0; s < k.length(); ++s)
    r.transport = one_step(mu, k.facets[s], k.faces[s], k.slots[s], k.added[s]) * r.transport;
  if (k.closed()) {
    r.P = closing_permutation(k);
    r.K = r.P->template matrix<S>() * r.transport;
  } else {
    r.K = r.transport;
  }
  return r;
}

/// For each slot, the framed path of the vertices that successively occupy it.
inline std::vector<FramedPath> angle_paths(const ThickPath& k) {
  const std::size_t n = k.initial().size();
  std::vector<FramedPath> out(n);
  for (std::size_t s = 0; s < n; ++s) out[s].vertices.push_back(k.initial()[s]);
  for (std::size_t step = 0; step < k.length(); ++step) {
    if (k.slots[step] < 0 || static_cast<std::size_t>(k.slots[step]) >= n)
      fail(ErrorCode::NotWordBuilt, "step without a slot");
    auto& path = out[k.slots[step]];
    path.vertices.push_back(k.added[step]);
    path.facets.push_back(k.facets[step]);
  }
  return out;
}

/// P tau_{i_q,n}^{r_q} ... tau_{i_0,n}^{r_0}, acting on {0..n} with n the extra color.
inline Permutation canonical_holonomy(const Word& w, const Permutation& P) {
  const std::size_t n = P.size();
  auto acc = Permutation::identity(n + 1);
  for (const auto& [slot, r] : w.letters)
    if (r % 2) acc = Permutation::transposition(n + 1, slot, static_cast<int>(n)) * acc;
  return P.extended(n + 1) * acc;
}

/// Embedding R^n -> R^{n+1}, x -> (x, -sum x).
template <class S>
std::vector<S> sum_zero_embed(const std::vector<S>& x) {
  std::vector<S> y = x;
  S s(0);
  for (const auto& v : x) s += v;
  y.push_back(-s);
  return y;
}

struct Coloring {
  std::map<int, int> colors;
  std::vector<int> conflicts;  // vertices that were reached with two different colors
  std::vector<int> final_colors;    // colors of the out-face, slot order
  std::vector<int> closing_colors;  // closed paths: out-face color of each Delta_0 vertex, Delta_0 slot order
  bool consistent() const { return conflicts.empty(); }
  /// Colors of a face in slot order.
  std::vector<int> of(const Vertices& face) const {
    std::vector<int> out;
    for (int v : face) out.push_back(colors.at(v));
    return out;
  }
};

/// Initial slots get colors 0..n-1; each new vertex takes the color missing from the face it extends.
inline Coloring coloring(const ThickPath& k) {
  Coloring c;
  const std::size_t n = k.initial().size();
  for (std::size_t s = 0; s < n; ++s) c.colors[k.initial()[s]] = static_cast<int>(s);
  std::vector<int> face_colors(n);
  for (std::size_t s = 0; s < n; ++s) face_colors[s] = static_cast<int>(s);
  for (std::size_t step = 0; step < k.length(); ++step) {
    std::vector<char> used(n + 1, 0);
    for (int col : face_colors) used[col] = 1;
    const int missing = static_cast<int>(std::find(used.begin(), used.end(), 0) - used.begin());
    const int x = k.added[step];
    auto [it, fresh] = c.colors.emplace(x, missing);
    if (!fresh && it->second != missing &&
        std::find(c.conflicts.begin(), c.conflicts.end(), x) == c.conflicts.end())
      c.conflicts.push_back(x);
    face_colors[k.slots[step]] = missing;
  }
  c.final_colors = face_colors;
  if (k.closed())
    for (int v : k.initial())
      c.closing_colors.push_back(face_colors[std::find(k.final().begin(), k.final().end(), v) - k.final().begin()]);
  return c;
}

// ---------------------------------------------------------------------------------------------
// Cocycle twists along a thick path

/// Potential of a cocycle delta along the path: h on Delta_0 with h_i / h_j = delta_ij, extended step by
/// step. Returns C = h_final(v) / h_initial(v) for any vertex v of Delta_0; twisting mu by delta turns
/// K into C^{-1} H^{-1} K H with H = diag(h on Delta_0).
template <class S>
std::pair<S, std::vector<S>> twist_factor(const ThickPath& k, const EdgeCochain<S>& delta) {
  const auto& u = k.initial();
  std::map<int, S> h;
  h[u[0]] = Field<S>::one();
  for (std::size_t s = 1; s < u.size(); ++s) h[u[s]] = h[u[0]] / delta(u[0], u[s]);
  std::vector<S> h0;
  for (int v : u) h0.push_back(h[v]);
  for (std::size_t step = 0; step < k.length(); ++step) {
    const auto& face = k.faces[step + 1];
    const int x = k.added[step];
    const int w = face[k.slots[step] == 0 ? 1 : 0];
    h[x] = h.at(w) / delta(w, x);
  }
  return {h.at(u[0]) / h0[0], h0};
}

// ---------------------------------------------------------------------------------------------
// Search for closed composable paths

/// Breadth-first enumeration of words up to `max_length` from Delta_0, collecting the composable ones
/// (excluding the empty word).
inline std::vector<ThickPath> composable_paths(const SimplicialComplex& K, const Vertices& slots, std::size_t max_length,
                                               std::size_t limit = 1000) {
  std::vector<ThickPath> out;
  std::vector<ThickPath> frontier{empty_thick_path(K, slots)};
  for (std::size_t len = 1; len <= max_length && out.size() < limit; ++len) {
    std::vector<ThickPath> next;
    for (const auto& p : frontier)
      for (int s = 0; s < K.dim(); ++s) {
        ThickPath q = p;
        extend(K, q, s);
        if (q.composable(K)) out.push_back(q);
        next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  if (out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace dgc
