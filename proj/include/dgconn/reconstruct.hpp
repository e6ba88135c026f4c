#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dgconn/complex.hpp"
#include "dgconn/connection.hpp"
#include "dgconn/curvature.hpp"
#include "dgconn/error.hpp"
#include "dgconn/holonomy.hpp"
#include "dgconn/homology.hpp"
#include "dgconn/invariants.hpp"
#include "dgconn/multiplicative.hpp"

namespace dgc {

/// Values on oriented 2-simplices; value[jil] = value[ijl]^{-1}.
template <class S>
struct TwoCochain {
  const SimplicialComplex* complex = nullptr;
  std::vector<S> values;  // indexed like K.simplices(2), sorted orientation

  TwoCochain() = default;
  explicit TwoCochain(const SimplicialComplex& K) : complex(&K), values(K.count(2), Field<S>::one()) {}

  S operator()(int i, int j, int l) const {
    const auto s = Simplex::from_ordered({i, j, l});
    const S& v = values[complex->require_index(s.vertices)];
    return s.sign > 0 ? v : Field<S>::inverse(v);
  }

  /// prod over a 2-chain (coefficients on sorted triangles).
  S on(const Chain& c) const {
    S p = Field<S>::one();
    for (std::size_t t = 0; t < c.size(); ++t)
      if (sgn(c[t]) != 0) p *= ipow(values[t], c[t].get_si());
    return p;
  }
};

// ---------------------------------------------------------------------------------------------
// Step report

struct StepRecord {
  std::string step;
  bool pass = true;
  double residual = 0.0;
  std::string detail;
};

struct ReconstructReport {
  std::vector<StepRecord> steps;

  void add(std::string step, bool pass, double residual, std::string detail = {}) {
    steps.push_back({std::move(step), pass, residual, std::move(detail)});
  }
  bool all_pass() const {
    return std::all_of(steps.begin(), steps.end(), [](const StepRecord& s) { return s.pass; });
  }

  /// One JSON object per line.
  std::string jsonl() const {
    std::ostringstream os;
    for (const auto& s : steps) {
      nlohmann::json j{{"step", s.step}, {"pass", s.pass}, {"residual", s.residual}};
      if (!s.detail.empty()) j["detail"] = s.detail;
      os << j.dump() << "\n";
    }
    return os.str();
  }
};

struct Reconstruction {
  Connection<Complex> mu;
  ReconstructReport report;
};

struct ReconstructOptions {
  double tol = kDefaultTolerance;
  bool check_relations = true;
  const HomologyBasis* h2 = nullptr;  // computed when absent
};

namespace detail {

/// Facet-local trial coefficients mu~^T_ab over local positions, full (n+1) x (n+1) table per facet.
struct TrialCoefficients {
  std::size_t k = 0;
  std::vector<std::vector<Complex>> table;

  TrialCoefficients(std::size_t facets, std::size_t k_) : k(k_), table(facets, std::vector<Complex>(k_ * k_, {1.0, 0.0})) {}

  Complex get(const SimplicialComplex& K, std::size_t T, int i, int j) const {
    const auto& f = K.facet(T);
    return table[T][position_of(f, i) * k + position_of(f, j)];
  }
  void set(const SimplicialComplex& K, std::size_t T, int i, int j, Complex v) {
    const auto& f = K.facet(T);
    const std::size_t a = position_of(f, i), b = position_of(f, j);
    table[T][a * k + b] = v;
    table[T][b * k + a] = 1.0 / v;
  }
};

inline void require_complex_invariants(const InvariantData<Complex>& inv, const SimplicialComplex& K) {
  if (inv.rho.complex != &K) fail(ErrorCode::DifferentComplex, "invariants belong to another complex");
}

inline void check_relations(const InvariantData<Complex>& inv, const ReconstructOptions& opt, ReconstructReport& rep) {
  if (!opt.check_relations) return;
  RelationOptions ro;
  ro.tol = opt.tol;
  const auto r = verify_relations(inv, ro);
  double worst = 0.0;
  std::string first;
  for (const auto& c : r.checks) {
    worst = std::max(worst, c.residual);
    if (!c.pass && first.empty()) first = c.relation + " at " + c.location;
  }
  rep.add("relations", r.all_pass(), worst, first);
  if (!r.all_pass()) fail(ErrorCode::InconsistentInvariants, "invariant relations fail: " + first);
}

inline IntegerMatrix coboundary_rows(const SimplicialComplex& K, std::size_t extra_rows) {
  const auto B = boundary_matrix(K, 2);
  IntegerMatrix E(B.cols() + extra_rows, B.rows());
  for (std::size_t e = 0; e < B.rows(); ++e)
    for (std::size_t t = 0; t < B.cols(); ++t) E(t, e) = B(e, t);
  return E;
}

inline void add_path_row(const SimplicialComplex& K, IntegerMatrix& E, std::size_t row, const std::vector<int>& v,
                         long weight = 1) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const auto e = oriented_edge(K, v[k], v[k + 1]);
    E(row, e.index) += e.sign * weight;
  }
}

/// mu^T_ij = x_ij mu~^T_ij with the edge cochain x solving the triangle relations and matching the
/// framed holonomy of `inv`.
inline Reconstruction assemble(const SimplicialComplex& K, const InvariantData<Complex>& inv, const TrialCoefficients& tr,
                               const ReconstructOptions& opt, ReconstructReport rep) {
  const auto& tris = K.simplices(2);

  // target: x_ab x_bc / x_ac = -mu~_ac / (mu~_ab mu~_bc), the same in every facet containing [abc]
  TwoCochain<Complex> g(K);
  double spread = 0.0;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const int a = tris[t][0], b = tris[t][1], c = tris[t][2];
    const auto cof = K.facets_containing(tris[t]);
    for (std::size_t q = 0; q < cof.size(); ++q) {
      const auto T = cof[q];
      const Complex v = -tr.get(K, T, a, c) / (tr.get(K, T, a, b) * tr.get(K, T, b, c));
      if (q == 0) g.values[t] = v;
      else spread = std::max(spread, Field<Complex>::rel_error(v, g.values[t]));
    }
  }
  rep.add("cocycle", spread <= opt.tol, spread, "triangle targets agree across cofacets");
  if (spread > opt.tol) fail(ErrorCode::InconsistentInvariants, "triangle products depend on the facet");

  // exactness on H_2
  HomologyBasis h2_local;
  const HomologyBasis* h2 = opt.h2;
  if (!h2) {
    h2_local = homology_basis(K, 2);
    h2 = &h2_local;
  }
  double exact_res = 0.0;
  for (std::size_t z = 0; z < h2->free_cycles.size(); ++z) {
    const double r = std::abs(g.on(h2->free_cycles[z]) - 1.0);
    exact_res = std::max(exact_res, r);
    if (r > opt.tol) {
      rep.add("exactness", false, r, "H_2 generator " + std::to_string(z));
      fail(ErrorCode::CocycleNotExact, "target 2-cochain is not exact on H_2 generator " + std::to_string(z));
    }
  }
  rep.add("exactness", true, exact_res);

  // solve
  std::vector<const FramedPath*> paths;
  std::vector<Complex> values;
  for (std::size_t k = 0; k < inv.free_paths.size(); ++k) {
    paths.push_back(&inv.free_paths[k]);
    values.push_back(inv.free_values[k]);
  }
  for (std::size_t k = 0; k < inv.torsion_paths.size(); ++k) {
    paths.push_back(&inv.torsion_paths[k]);
    values.push_back(inv.torsion_values[k]);
  }
  auto E = coboundary_rows(K, paths.size());
  std::vector<Complex> c = g.values;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const auto& p = *paths[k];
    check_framing(K, p);
    add_path_row(K, E, tris.size() + k, p.vertices);
    Complex base(1.0, 0.0);
    for (std::size_t s = 0; s < p.facets.size(); ++s) base *= -tr.get(K, p.facets[s], p.vertices[s], p.vertices[s + 1]);
    c.push_back(values[k] / base);
  }
  const auto sol = MultiplicativeSolver(E).solve(c, std::max(opt.tol, 1e-9) * 100);
  if (!sol.solvable()) {
    rep.add("solve", false, 1.0, sol.unsolvable->what);
    fail(ErrorCode::InconsistentInvariants, "holonomy data incompatible with the relations: " + sol.unsolvable->what);
  }
  rep.add("solve", true, multiplicative_residual(E, sol.x, c));

  EdgeCochain<Complex> x(K);
  x.values = sol.x;
  std::vector<std::vector<Complex>> stored(K.num_facets());
  for (std::size_t T = 0; T < K.num_facets(); ++T) {
    const auto& f = K.facet(T);
    for (std::size_t b = 1; b < f.size(); ++b) stored[T].push_back(x(f[0], f[b]) * tr.get(K, T, f[0], f[b]));
  }
  Reconstruction out{Connection<Complex>(K, std::move(stored)), std::move(rep)};

  const auto bad = validate(out.mu, opt.tol * 100);
  out.report.add("validate", bad.empty(), static_cast<double>(bad.size()));

  // forward consistency
  double fwd = max_rel_error(rho_minimal(out.mu), inv.rho);
  for (std::size_t k = 0; k < paths.size(); ++k)
    fwd = std::max(fwd, Field<Complex>::rel_error(framed_holonomy(out.mu, *paths[k]), values[k]));
  out.report.add("forward", fwd <= opt.tol * 100, fwd, "invariants of the output against the input");
  return out;
}

}  // namespace detail

/// n = 2: mu_ij = -lambda_ij sqrt(rho_ij) with the principal root, lambda from d lambda = rho^{-1/2}.
inline Reconstruction reconstruct_2d(const SimplicialComplex& K, const InvariantData<Complex>& inv,
                                     const ReconstructOptions& opt = {}) {
  if (K.dim() != 2) fail(ErrorCode::WrongDimension, "reconstruct_2d needs a surface");
  detail::require_complex_invariants(inv, K);
  ReconstructReport rep;
  detail::check_relations(inv, opt, rep);

  detail::TrialCoefficients tr(K.num_facets(), 3);
  for (std::size_t f = 0; f < inv.rho.values.size(); ++f) {
    const auto& e = inv.rho.face(f);
    const auto [T0, T1] = inv.rho.cofacets[f];
    const Complex s = std::sqrt(inv.rho.values[f][0]);
    tr.set(K, T0, e[0], e[1], -s);
    tr.set(K, T1, e[0], e[1], -1.0 / s);
  }
  rep.add("sqrt", true, 0.0, "principal branch");
  return detail::assemble(K, inv, tr, opt, std::move(rep));
}

/// n >= 3: mu~ along the facets around every edge from rho, then d delta = -mu~[Delta] and holonomy.
inline Reconstruction reconstruct_nd(const SimplicialComplex& K, const InvariantData<Complex>& inv,
                                     const ReconstructOptions& opt = {}) {
  if (K.dim() < 3) fail(ErrorCode::WrongDimension, "reconstruct_nd needs n >= 3");
  detail::require_complex_invariants(inv, K);
  ReconstructReport rep;
  detail::check_relations(inv, opt, rep);

  const std::size_t n = static_cast<std::size_t>(K.dim());
  detail::TrialCoefficients tr(K.num_facets(), n + 1);
  double loop = 0.0;
  for (const auto& e : K.simplices(1)) {
    const int a = e[0], b = e[1];
    const auto around = K.facets_containing(e);
    std::map<std::size_t, Complex> val;
    std::queue<std::size_t> q;
    val[around.front()] = {1.0, 0.0};
    q.push(around.front());
    while (!q.empty()) {
      const auto T = q.front();
      q.pop();
      const auto& f = K.facet(T);
      for (std::size_t pos = 0; pos < f.size(); ++pos) {
        if (f[pos] == a || f[pos] == b) continue;
        const auto Tp = K.neighbor(T, pos);
        const Complex next = val[T] / inv.rho.adjacent(T, Tp, a, b);
        auto it = val.find(Tp);
        if (it == val.end()) {
          val[Tp] = next;
          q.push(Tp);
        } else {
          loop = std::max(loop, Field<Complex>::rel_error(it->second, next));
        }
      }
    }
    for (const auto& [T, v] : val) tr.set(K, T, a, b, v);
  }
  rep.add("propagate", loop <= opt.tol, loop, "edge-star propagation closes up");
  if (loop > opt.tol) fail(ErrorCode::InconsistentInvariants, "rho propagation around an edge does not close");
  return detail::assemble(K, inv, tr, opt, std::move(rep));
}

inline Reconstruction reconstruct(const SimplicialComplex& K, const InvariantData<Complex>& inv,
                                  const ReconstructOptions& opt = {}) {
  return K.dim() == 2 ? reconstruct_2d(K, inv, opt) : reconstruct_nd(K, inv, opt);
}

// ---------------------------------------------------------------------------------------------
// SL_2 normalization of a locally flat connection

/// Vertex loop y_0 = u_0, ..., y_L = u_0 traced by the twist potential of a closed path; the twist factor
/// is C = 1 / delta(loop).
inline std::vector<int> twist_loop(const ThickPath& k) {
  const auto& u = k.initial();
  std::map<int, int> parent;
  for (std::size_t s = 1; s < u.size(); ++s) parent[u[s]] = u[0];
  std::map<int, std::vector<int>> chain;  // vertex -> path from u_0
  chain[u[0]] = {u[0]};
  for (std::size_t s = 1; s < u.size(); ++s) chain[u[s]] = {u[0], u[s]};
  for (std::size_t step = 0; step < k.length(); ++step) {
    const auto& face = k.faces[step + 1];
    const int x = k.added[step];
    const int w = face[k.slots[step] == 0 ? 1 : 0];
    auto c = chain.at(w);
    c.push_back(x);
    chain[x] = std::move(c);
  }
  return chain.at(u[0]);
}

struct SlNormalization {
  Connection<Complex> mu;
  EdgeCochain<Complex> delta;
  std::vector<ThickPath> paths;       // closed composable paths whose twist loops span H_1 (free part)
  std::vector<Complex> det_before, det_after;
};

inline SlNormalization normalize_sl(const Connection<Complex>& mu, const HomologyBasis& H1, double tol = 1e-9,
                                    std::size_t max_length = 12) {
  const auto& K = mu.complex();
  if (K.dim() != 2) fail(ErrorCode::WrongDimension, "SL normalization is implemented for n = 2");
  for (const auto& sigma : K.simplices(0)) {
    const auto op = curvature_operator(mu, star_cycle(K, sigma), 0, tol);
    if (!op.flat) fail(ErrorCode::NotLocallyFlat, "curvature at vertex " + std::to_string(sigma[0]) + " is not the identity");
  }

  Vertices slots = K.facet(0);
  slots.pop_back();
  const std::size_t r = H1.rank();
  const std::size_t off = H1.torsion_orders.size();
  SlNormalization out{mu, EdgeCochain<Complex>(K), {}, {}, {}};
  std::vector<std::vector<int>> loops;
  Eigen::MatrixXd span(0, static_cast<long>(r));
  long rank = 0;
  if (r > 0) {
    for (const auto& p : composable_paths(K, slots, max_length, 5000)) {
      auto loop = twist_loop(p);
      const auto cls = H1.classify(path_chain(K, loop));
      Eigen::MatrixXd next(span.rows() + 1, static_cast<long>(r));
      next.topRows(span.rows()) = span;
      for (std::size_t j = 0; j < r; ++j) next(span.rows(), static_cast<long>(j)) = cls[off + j].get_d();
      const long nr = Eigen::FullPivLU<Eigen::MatrixXd>(next).rank();
      if (nr > rank) {
        span = next;
        rank = nr;
        out.paths.push_back(p);
        loops.push_back(std::move(loop));
        if (static_cast<std::size_t>(rank) == r) break;
      }
    }
    if (static_cast<std::size_t>(rank) < r) fail(ErrorCode::NoPath, "no composable paths spanning H_1 within the length bound");
  }

  // d delta = 1, delta(loop_i)^2 = 1 / det K_i
  auto E = detail::coboundary_rows(K, out.paths.size());
  std::vector<Complex> c(K.count(2), Complex(1.0, 0.0));
  for (std::size_t i = 0; i < out.paths.size(); ++i) {
    const Complex d = holonomy(mu, out.paths[i]).full().determinant();
    out.det_before.push_back(d);
    detail::add_path_row(K, E, K.count(2) + i, loops[i], 2);
    c.push_back(1.0 / d);
  }
  out.delta.values = MultiplicativeSolver(E).solve(c).value();
  out.mu = twist(mu, out.delta, tol);
  for (const auto& p : out.paths) out.det_after.push_back(holonomy(out.mu, p).full().determinant());
  return out;
}

}  // namespace dgc
