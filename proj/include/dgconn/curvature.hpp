#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "dgconn/complex.hpp"
#include "dgconn/connection.hpp"
#include "dgconn/error.hpp"
#include "dgconn/invariants.hpp"
#include "dgconn/matrix.hpp"

namespace dgc {

/// Transport around the star of an (n-2)-simplex sigma. Coordinates at rim index p are
/// (psi_q for q in sigma, sorted; psi_{rim p}). Step A_p crosses into facet F_{p+1} = sigma + {rim p, rim p+1}.
template <class S>
struct CurvatureOperator {
  EdgeStar star;
  long p = 0;
  std::vector<Matrix<S>> steps;  // A_p, A_{p+1}, ..., A_{p+m-1}
  Matrix<S> K;                   // A_{p+m-1} ... A_p
  std::vector<S> alpha;          // last row of K without the corner
  S mu_sigma;                    // det K
  bool flat = false;
  bool unimodular = false;
};

/// A_p: identity except the last row (mu_{q, r_{p+1}}, ..., mu_{r_p, r_{p+1}}) in F_{p+1}.
template <class S>
Matrix<S> step_matrix(const Connection<S>& mu, const EdgeStar& st, long p) {
  const std::size_t n = st.sigma.size() + 1;
  const std::size_t T = st.facet(p + 1);
  const int from = st.rim_vertex(p), to = st.rim_vertex(p + 1);
  auto A = Matrix<S>::identity(n);
  for (std::size_t q = 0; q + 1 < n; ++q) A(n - 1, q) = mu(T, st.sigma[q], to);
  A(n - 1, n - 1) = mu(T, from, to);
  return A;
}

template <class S>
CurvatureOperator<S> curvature_operator(const Connection<S>& mu, const EdgeStar& st, long p,
                                        double tol = kDefaultTolerance) {
  CurvatureOperator<S> op;
  op.star = st;
  op.p = static_cast<long>(st.mod(p));
  const std::size_t n = st.sigma.size() + 1;
  op.K = Matrix<S>::identity(n);
  for (std::size_t k = 0; k < st.m(); ++k) {
    op.steps.push_back(step_matrix(mu, st, op.p + static_cast<long>(k)));
    op.K = op.steps.back() * op.K;
  }
  for (std::size_t q = 0; q + 1 < n; ++q) op.alpha.push_back(op.K(n - 1, q));
  op.mu_sigma = op.K.determinant();
  op.flat = op.K.is_identity(tol);
  op.unimodular = Field<S>::equal(op.mu_sigma, Field<S>::one(), tol);
  return op;
}

template <class S>
CurvatureOperator<S> curvature_operator(const Connection<S>& mu, const Vertices& sigma, long p,
                                        double tol = kDefaultTolerance) {
  if (static_cast<int>(sigma.size()) != mu.dim() - 1) fail(ErrorCode::WrongDimension, "curvature needs an (n-2)-simplex");
  return curvature_operator(mu, star_cycle(mu.complex(), sigma), p, tol);
}

/// Product of the diagonal corners, prod (-mu_{r_s r_{s+1}}^{F_{s+1}}). Measured: equals (-1)^m det K.
template <class S>
S corner_product(const CurvatureOperator<S>& op) {
  S p = Field<S>::one();
  for (const auto& A : op.steps) p *= -A(A.rows() - 1, A.cols() - 1);
  return p;
}

/// alpha*_{q,p} = alpha_{q,p} mu_{r_p q}^{F_p}, one value per q in sigma.
template <class S>
std::vector<S> alpha_star(const CurvatureOperator<S>& op, const Connection<S>& mu) {
  std::vector<S> out;
  const std::size_t T = op.star.facet(op.p);
  const int r = op.star.rim_vertex(op.p);
  for (std::size_t q = 0; q < op.alpha.size(); ++q) out.push_back(op.alpha[q] * mu(T, r, op.star.sigma[q]));
  return out;
}

/// alpha* for every start index: result[p][q].
template <class S>
std::vector<std::vector<S>> alpha_star_all(const Connection<S>& mu, const EdgeStar& st) {
  std::vector<std::vector<S>> out;
  for (std::size_t p = 0; p < st.m(); ++p) out.push_back(alpha_star(curvature_operator(mu, st, static_cast<long>(p)), mu));
  return out;
}

template <class S>
struct CurvatureFromRho {
  std::vector<std::vector<S>> alpha_star;  // [p][q]
  S mu_sigma;
  std::vector<S> mu_sigma_by_q;            // one expression per vertex of sigma
};

/// R_s = rho_{r_s, q}^{F_{s+1} F_s}.
template <class S>
S star_rho(const RhoData<S>& rho, const EdgeStar& st, long s, int q) {
  return rho.adjacent(st.facet(s + 1), st.facet(s), st.rim_vertex(s), q);
}

/// alpha*_{q,p} = sum_{k=0}^{m-1} (-1)^k prod_{j=1}^{k} R_{p-j}; mu_sigma = (-1)^m prod_p rho_{q r_p}^{F_p F_{p+1}}.
template <class S>
CurvatureFromRho<S> curvature_from_rho(const RhoData<S>& rho, const EdgeStar& st, double tol = kDefaultTolerance) {
  CurvatureFromRho<S> out;
  const long m = static_cast<long>(st.m());
  const S sign = (m % 2) ? S(-1) : Field<S>::one();
  for (int q : st.sigma) {
    S prod = Field<S>::one();
    for (long p = 0; p < m; ++p) prod *= rho.adjacent(st.facet(p), st.facet(p + 1), q, st.rim_vertex(p));
    out.mu_sigma_by_q.push_back(sign * prod);
  }
  out.mu_sigma = out.mu_sigma_by_q.front();
  for (const auto& v : out.mu_sigma_by_q)
    if (!Field<S>::equal(v, out.mu_sigma, tol))
      fail(ErrorCode::InconsistentMu, "mu_sigma expressions disagree on star " + detail::vertex_list(st.sigma));
  for (long p = 0; p < m; ++p) {
    std::vector<S> row;
    for (int q : st.sigma) {
      S sum(0), term = Field<S>::one();
      for (long k = 0; k < m; ++k) {
        if (k > 0) term *= -star_rho(rho, st, p - k, q);
        sum += term;
      }
      row.push_back(sum);
    }
    out.alpha_star.push_back(std::move(row));
  }
  return out;
}

/// rho_{r_p, q}^{F_p F_{p+1}} = -alpha*_{q,p} / (alpha*_{q,p+1} - 1 + mu_sigma); result[p][q].
template <class S>
std::vector<std::vector<S>> rho_from_curvature(const std::vector<std::vector<S>>& astar, const S& mu_sigma,
                                               const EdgeStar& st, double tol = kDefaultTolerance) {
  const long m = static_cast<long>(st.m());
  std::vector<std::vector<S>> out;
  auto vanishes = [&](const S& v) {
    if constexpr (Field<S>::exact) return Field<S>::is_zero(v);
    else return std::abs(v) <= tol;
  };
  for (long p = 0; p < m; ++p) {
    std::vector<S> row;
    for (std::size_t q = 0; q < st.sigma.size(); ++q) {
      const S num = astar[p][q];
      const S den = astar[st.mod(p + 1)][q] - Field<S>::one() + mu_sigma;
      if (vanishes(num) || vanishes(den))
        fail(ErrorCode::Degenerate, "alpha* degenerate at q=" + std::to_string(st.sigma[q]) + " p=" + std::to_string(p));
      row.push_back(-num / den);
    }
    out.push_back(std::move(row));
  }
  return out;
}

/// "sigma <vertices> m=<m> mu=<value> flat=<0|1> unimodular=<0|1>"
template <class S>
std::string curvature_line(const CurvatureOperator<S>& op) {
  std::ostringstream os;
  os << "sigma";
  for (int v : op.star.sigma) os << ' ' << v;
  os << " m=" << op.star.m() << " mu=" << Field<S>::format(op.mu_sigma) << " flat=" << op.flat
     << " unimodular=" << op.unimodular;
  return os.str();
}

}  // namespace dgc
