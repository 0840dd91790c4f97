#pragma once

// Closed forms written out by hand, shared by the unit tests and the
// acceptance run.

#include <map>
#include <string>
#include <tuple>

#include "ck/derivations.hpp"
#include "ck/formal_dist.hpp"
#include "ck/modules.hpp"

namespace ck::testing {

/// Generator commutators cell by cell: [L_i(z), L_j(w)] at z^m w^n is
/// (n-m) L(-m-n-4, i+j), [L_i(z), H_j(w)] is (n+1) H(-m-n-3, i+j),
/// [H_i(z), L_j(w)] is (-m-1) H(-m-n-3, i+j).
inline HVElement commutator_cell(const GeneratorId& x, const GeneratorId& y, int m, int n) {
  const int loop = x.index + y.index;
  if (x.family == "L" && y.family == "L") return HVElement({LoopFamily::L, -m - n - 4, loop}, Scalar(n - m));
  if (x.family == "L" && y.family == "H") return HVElement({LoopFamily::H, -m - n - 3, loop}, Scalar(n + 1));
  if (x.family == "H" && y.family == "L") return HVElement({LoopFamily::H, -m - n - 3, loop}, Scalar(-m - 1));
  return {};
}

/// Table of ad_{g L[c] + h H[c]} + D^c_a:
///   L -> [g(-l)(d+2l), l h(-l) + a],  H -> [0, g(-l)(d+l)].
inline TableDerivation derivation_table(int c, const Poly& g, const Poly& h, const Poly& a) {
  const Poly d = del(), l = lam();
  const Poly g_neg = substitute(g, vars::del, -l), h_neg = substitute(h, vars::del, -l);
  return {c, g_neg * (d + l.scaled(2)), l * h_neg + a, Poly(), g_neg * (d + l)};
}

/// f_{i,k} (fam "f") or g_{i,k} (fam "g") as a full bilinear polynomial in
/// d and l with its own symbolic coefficients.
inline Poly generic_coefficient(const std::string& fam, int i, int k) {
  auto idx = [](int n) { return n < 0 ? "n" + std::to_string(-n) : std::to_string(n); };
  Poly out;
  for (int p = 0; p <= 1; ++p) {
    for (int r = 0; r <= 1; ++r) {
      const std::string name = fam + idx(i) + "x" + idx(k) + "x" + std::to_string(p) + std::to_string(r);
      out += Poly::var(name) * del().pow(p) * lam().pow(r);
    }
  }
  return out;
}

inline ModuleSpec generic_module(IndexRange window) {
  std::map<std::tuple<std::string, int, int>, Poly> table;
  for (int i = window.lo; i <= window.hi; ++i) {
    for (int k = window.lo; k <= window.hi; ++k) {
      table[{"L", i, k}] = generic_coefficient("f", i, k);
      table[{"H", i, k}] = generic_coefficient("g", i, k);
    }
  }
  return table_module("generic", ModuleShape::graded, window, window, {"L", "H"}, table);
}

inline Poly at(const Poly& p, const Poly& x, const Poly& y) { return compose(p, {{"d", x}, {"l", y}}); }

/// m g_{i+j,k}(d,l+m) - f_{i,k}(d+m,l) g_{j,i+k}(d,m) + g_{j,k}(d+l,m) f_{i,j+k}(d,l)
inline Poly lh_closed_form(int i, int j, int k) {
  const Poly d = del(), l = lam(), m = mu();
  auto f = [](int s, int t) { return generic_coefficient("f", s, t); };
  auto g = [](int s, int t) { return generic_coefficient("g", s, t); };
  return m * at(g(i + j, k), d, l + m) - at(f(i, k), d + m, l) * at(g(j, i + k), d, m) +
         at(g(j, k), d + l, m) * at(f(i, j + k), d, l);
}

/// g_{j,k}(d+l,m) g_{i,j+k}(d,l) - g_{i,k}(d+m,l) g_{j,i+k}(d,m)
inline Poly hh_closed_form(int i, int j, int k) {
  const Poly d = del(), l = lam(), m = mu();
  auto g = [](int s, int t) { return generic_coefficient("g", s, t); };
  return at(g(j, k), d + l, m) * at(g(i, j + k), d, l) - at(g(i, k), d + m, l) * at(g(j, i + k), d, m);
}

}  // namespace ck::testing
