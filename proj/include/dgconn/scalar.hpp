#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "dgconn/error.hpp"

namespace dgc {

using Rational = mpq_class;
using Complex = std::complex<double>;
using Integer = mpz_class;

/// Canonical p/q (mpq_class(p, q) alone is not reduced, and GMP arithmetic assumes reduced operands).
inline Rational make_rational(long p, long q = 1) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

enum class FieldKind { rational, complex };

inline constexpr double kDefaultTolerance = 1e-9;

inline std::string_view to_string(FieldKind k) { return k == FieldKind::rational ? "rational" : "complex"; }

inline FieldKind parse_field(std::string_view s) {
  if (s == "rational") return FieldKind::rational;
  if (s == "complex") return FieldKind::complex;
  fail(ErrorCode::ParseError, "unknown field '" + std::string(s) + "'");
}

template <class S>
struct Field;

template <>
struct Field<Rational> {
  static constexpr FieldKind kind = FieldKind::rational;
  static constexpr bool exact = true;

  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool equal(const Rational& a, const Rational& b, double = kDefaultTolerance) { return a == b; }
  static double rel_error(const Rational& a, const Rational& b) {
    return a == b ? 0.0 : std::numeric_limits<double>::infinity();
  }
  static Rational inverse(const Rational& x) { return Rational(1) / x; }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }

  /// Always written as p/q, including integers.
  static std::string format(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
  }

  static Rational parse(std::string_view s) {
    Rational r;
    if (s.empty() || r.set_str(std::string(s), 10) != 0 || r.get_den() == 0)
      fail(ErrorCode::ParseError, "bad rational '" + std::string(s) + "'");
    r.canonicalize();
    return r;
  }
};

template <>
struct Field<Complex> {
  static constexpr FieldKind kind = FieldKind::complex;
  static constexpr bool exact = false;

  static Complex one() { return {1.0, 0.0}; }
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }

  static double rel_error(const Complex& a, const Complex& b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
  }
  static bool equal(const Complex& a, const Complex& b, double tol = kDefaultTolerance) {
    return rel_error(a, b) <= tol;
  }
  static Complex inverse(const Complex& x) { return 1.0 / x; }
  static Complex to_complex(const Complex& x) { return x; }

  static std::string format(const Complex& x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", x.real(), x.imag());
    return buf;
  }

  static Complex parse(std::string_view s) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) fail(ErrorCode::ParseError, "bad complex '" + std::string(s) + "'");
    try {
      std::size_t used = 0;
      const std::string re(s.substr(0, comma)), im(s.substr(comma + 1));
      const double r = std::stod(re, &used);
      if (used != re.size()) throw std::invalid_argument(re);
      const double i = std::stod(im, &used);
      if (used != im.size()) throw std::invalid_argument(im);
      return {r, i};
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad complex '" + std::string(s) + "'");
    }
  }
};

template <class S>
S ipow(S base, long e) {
  if (e < 0) {
    base = Field<S>::inverse(base);
    e = -e;
  }
  S result = Field<S>::one();
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

}  // namespace dgc
