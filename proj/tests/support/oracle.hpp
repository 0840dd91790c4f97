#pragma once

// Test-side oracles that share no arithmetic with the library: polynomials
// are checked by evaluating term by term at random Gaussian-rational points.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "ck/poly.hpp"

namespace ck::testing {

struct GaussQ {
  Rational re = 0;
  Rational im = 0;

  friend GaussQ operator+(const GaussQ& a, const GaussQ& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussQ operator*(const GaussQ& a, const GaussQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }
};

inline GaussQ inverse(const GaussQ& z) {
  const Rational n = z.re * z.re + z.im * z.im;
  return {z.re / n, -z.im / n};
}

inline GaussQ power(const GaussQ& z, int e) {
  GaussQ base = e < 0 ? inverse(z) : z, out{1, 0};
  for (int k = 0; k < (e < 0 ? -e : e); ++k) out = out * base;
  return out;
}

using Point = std::map<std::string, GaussQ>;

inline GaussQ evaluate(const Poly& p, const Point& at) {
  GaussQ sum;
  for (const auto& [m, c] : p.terms()) {
    GaussQ t{c.re(), c.im()};
    for (const auto& [v, e] : m.factors()) t = t * power(at.at(v.name), e);
    sum = sum + t;
  }
  return sum;
}

class Random {
 public:
  explicit Random(unsigned seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(int span = 9) {
    const int den = integer(1, span);
    return Rational(integer(-span, span)) / den;
  }

  Scalar scalar(bool complex = true) {
    if (complex && integer(0, 3) == 0) return Scalar(rational(), rational());
    return Scalar(rational());
  }

  GaussQ nonzero_point() {
    GaussQ z;
    while (z.re == 0 && z.im == 0) z = {rational(), integer(0, 2) == 0 ? rational() : Rational(0)};
    return z;
  }

  /// Random polynomial over `vars`; invertible variables may get negative exponents.
  Poly poly(const std::vector<Var>& vars, int max_terms = 4, int max_deg = 3) {
    Poly out;
    const int n = integer(0, max_terms);
    for (int t = 0; t < n; ++t) {
      Monomial m;
      for (const auto& v : vars) {
        const int e = integer(v.invertible ? -max_deg : 0, max_deg);
        if (e != 0) m = m * Monomial::of(v, e);
      }
      out += Poly::term(scalar(), m);
    }
    return out;
  }

  Point point(const std::vector<Var>& vars) {
    Point p;
    for (const auto& v : vars) p[v.name] = v.invertible ? nonzero_point() : GaussQ{rational(), rational()};
    return p;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

inline const std::vector<Var>& standard_vars() {
  static const std::vector<Var> vs{vars::del, vars::lambda, vars::mu, Var{"a"}, Var{"b"}, Var{"q", true}};
  return vs;
}

}  // namespace ck::testing
