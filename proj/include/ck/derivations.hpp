#pragma once

// Conformal derivations of CHV. A derivation is described on generators
// and extended by D_l(p(d) x) = p(d+l) D_l(x).

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ck/algebra.hpp"
#include "ck/combination.hpp"
#include "ck/errors.hpp"
#include "ck/poly.hpp"

namespace ck {

/// ad_x with x homogeneous.
struct InnerDerivation {
  Element x;
};

/// D^c_a: L[i] -> a H[i+c], H[i] -> 0.
struct OuterScalar {
  int degree = 0;
  Poly a;
};

/// D_a for a finitely supported vector a: L[i] -> sum_c a_c H[i+c], H[i] -> 0.
struct OuterVector {
  std::map<int, Poly> a;
};

/// Index-independent degree-c derivation:
///   L[i] -> f1 L[i+c] + f2 H[i+c],   H[i] -> f3 L[i+c] + f4 H[i+c].
struct TableDerivation {
  int degree = 0;
  Poly f1, f2, f3, f4;

  friend bool operator==(const TableDerivation&, const TableDerivation&) = default;

  friend TableDerivation operator+(const TableDerivation& a, const TableDerivation& b) {
    if (a.degree != b.degree) throw DomainError("cannot add table derivations of different degrees");
    return {a.degree, a.f1 + b.f1, a.f2 + b.f2, a.f3 + b.f3, a.f4 + b.f4};
  }
  friend TableDerivation operator-(const TableDerivation& a, const TableDerivation& b) {
    if (a.degree != b.degree) throw DomainError("cannot subtract table derivations of different degrees");
    return {a.degree, a.f1 - b.f1, a.f2 - b.f2, a.f3 - b.f3, a.f4 - b.f4};
  }

  std::string to_string() const {
    return "degree " + std::to_string(degree) + ": L -> [" + f1.to_string() + ", " + f2.to_string() + "], H -> [" +
           f3.to_string() + ", " + f4.to_string() + "]";
  }
};

/// Images given explicitly on a finite set of generators.
struct WindowedDerivation {
  std::map<GeneratorId, LambdaElement> images;
};

using DerivationDescriptor = std::variant<InnerDerivation, OuterScalar, OuterVector, TableDerivation, WindowedDerivation>;

inline LambdaElement apply(const StructureTable& table, const DerivationDescriptor& D, const GeneratorId& x) {
  table.require_generator(x);
  return std::visit(
      [&](const auto& d) -> LambdaElement {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, InnerDerivation>) {
          if (!d.x.is_zero() && !grade_check(d.x)) throw DomainError("inner derivation needs a homogeneous element");
          return bracket(table, d.x, Element::of(x));
        } else if constexpr (std::is_same_v<T, OuterScalar>) {
          if (x.family != "L") return {};
          return LambdaElement::of({"H", x.index + d.degree}, d.a);
        } else if constexpr (std::is_same_v<T, OuterVector>) {
          LambdaElement out;
          if (x.family != "L") return out;
          for (const auto& [c, a] : d.a) out.add({"H", x.index + c}, a);
          return out;
        } else if constexpr (std::is_same_v<T, TableDerivation>) {
          LambdaElement out;
          const int target = x.index + d.degree;
          if (x.family == "L") {
            out.add({"L", target}, d.f1);
            out.add({"H", target}, d.f2);
          } else if (x.family == "H") {
            out.add({"L", target}, d.f3);
            out.add({"H", target}, d.f4);
          }
          return out;
        } else {
          auto it = d.images.find(x);
          if (it == d.images.end()) throw WindowError(x.to_string() + " is outside the derivation's window");
          return it->second;
        }
      },
      D);
}

/// D_l on a combination q(d, ...) Z: sum q(d+l, ...) D_l(Z).
inline LambdaElement apply(const StructureTable& table, const DerivationDescriptor& D, const LambdaElement& v) {
  LambdaElement out;
  const std::map<std::string, Poly> shift{{vars::del.name, del() + lam()}};
  for (const auto& [g, q] : v.terms()) out += compose(q, shift) * apply(table, D, g);
  return out;
}

/// D_l([x _m y]) - [(D_l x) _{l+m} y] - [x _m (D_l y)] over C[d,l,m].
inline LambdaElement check_derivation(const StructureTable& table, const DerivationDescriptor& D,
                                      const GeneratorId& x, const GeneratorId& y) {
  const LambdaElement lhs = apply(table, D, bracket_gen(table, x, y, mu()));
  const LambdaElement first = bracket(table, apply(table, D, x), Element::of(y), lam() + mu());
  const LambdaElement second = bracket(table, Element::of(x), apply(table, D, y), mu());
  return lhs - first - second;
}

struct DerivationFailure {
  GeneratorId x, y;
  LambdaElement residual;

  std::string describe() const {
    return "derivation identity fails for (" + x.to_string() + ", " + y.to_string() + "): residual " +
           residual.to_string();
  }
};

/// Runs check_derivation on every generator pair with indices in `window`;
/// `checked` counts index pairs, each covering every family combination.
inline std::vector<DerivationFailure> verify_derivation(const StructureTable& table, const DerivationDescriptor& D,
                                                        IndexRange window, std::size_t* checked = nullptr) {
  std::vector<DerivationFailure> failures;
  std::size_t count = 0;
  for (int i = window.lo; i <= window.hi; ++i) {
    for (int j = window.lo; j <= window.hi; ++j) {
      ++count;
      for (const auto& a : table.families()) {
        for (const auto& b : table.families()) {
          GeneratorId x{a, i}, y{b, j};
          LambdaElement r = check_derivation(table, D, x, y);
          if (!r.is_zero()) failures.push_back({x, y, std::move(r)});
        }
      }
    }
  }
  if (checked) *checked = count;
  return failures;
}

/// Table form of a single-degree derivation, read off its images of L[0]
/// and H[0]. Throws if an image leaves grade `degree`.
inline TableDerivation to_table(const StructureTable& table, const DerivationDescriptor& D, int degree) {
  TableDerivation t{degree, {}, {}, {}, {}};
  for (const auto& [fam, fl, fh] :
       {std::tuple{"L", &t.f1, &t.f2}, std::tuple{"H", &t.f3, &t.f4}}) {
    const LambdaElement img = apply(table, D, GeneratorId{fam, 0});
    for (const auto& [g, p] : img.terms()) {
      if (g.index != degree) throw DomainError("image " + img.to_string() + " is not of degree " + std::to_string(degree));
      if (g.family == "L") {
        *fl = p;
      } else if (g.family == "H") {
        *fh = p;
      }
    }
  }
  return t;
}

struct DerivationSplit {
  Poly g;  // inner part g(d) L[c]
  Poly h;  // inner part h(d) H[c]
  Poly a;  // outer part D^c_a

  InnerDerivation inner(int degree) const {
    Element x;
    x.add({"L", degree}, g);
    x.add({"H", degree}, h);
    return {std::move(x)};
  }
};

/// Splits a degree-c table derivation of CHV into ad_{g(d)L[c] + h(d)H[c]}
/// plus D^c_a, following the constructive argument:
///   1. l divides f1(-l, l);
///   2. g(-l) = f1(-l, l) / l and f1 = (d+2l) g(-l);
///   3. after removing ad_{g L[c]} the L-image is f2(l), free of d;
///   4. f2 = l*h~(l) + a, h(d) = h~(-d);
///   5. the remaining H-image vanishes.
/// The inputs must already satisfy the derivation identity on `window`.
inline DerivationSplit decompose_degree_c(const StructureTable& table, const TableDerivation& D,
                                          IndexRange window = {-2, 2}) {
  for (int i = window.lo; i <= window.hi; ++i) {
    for (const auto& [x, y] : {std::pair{GeneratorId{"L", 0}, GeneratorId{"L", i}},
                               std::pair{GeneratorId{"L", 0}, GeneratorId{"H", i}},
                               std::pair{GeneratorId{"H", 0}, GeneratorId{"L", i}}}) {
      const LambdaElement r = check_derivation(table, D, x, y);
      if (!r.is_zero()) {
        throw NotADerivation(0, "identity fails on (" + x.to_string() + ", " + y.to_string() + "): " + r.to_string());
      }
    }
  }
  const Poly d = del(), l = lam();
  const int c = D.degree;

  // 1.
  const Poly f1_at = compose(D.f1, {{vars::del.name, -l}});
  const DivisionResult div = divide_in(f1_at, l, vars::lambda);
  if (!div.remainder.is_zero()) throw NotADerivation(1, "l does not divide f1(-l, l) = " + f1_at.to_string());
  // 2.
  const Poly g_neg = div.quotient;  // g(-l)
  if (!(D.f1 == (d + l.scaled(2)) * g_neg)) {
    throw NotADerivation(2, "f1 = " + D.f1.to_string() + " is not (d+2*l)*g(-l)");
  }
  const Poly g = compose(g_neg, {{vars::lambda.name, -d}});
  const TableDerivation inner_g = to_table(table, InnerDerivation{Element::of({"L", c}, g)}, c);
  const TableDerivation rest = D - inner_g;
  // 3.
  if (!rest.f1.is_zero() || rest.f2.contains(vars::del.name)) {
    throw NotADerivation(3, "remaining L-image " + rest.f2.to_string() + " depends on d");
  }
  // 4.
  const Poly a = coeff_of(rest.f2, vars::lambda, 0);
  const DivisionResult hdiv = divide_in(rest.f2 - a, l, vars::lambda);
  const Poly h = compose(hdiv.quotient, {{vars::lambda.name, -d}});
  const TableDerivation inner_h = to_table(table, InnerDerivation{Element::of({"H", c}, h)}, c);
  const TableDerivation outer = rest - inner_h;
  // 5.
  if (!outer.f1.is_zero() || !outer.f3.is_zero() || !outer.f4.is_zero()) {
    throw NotADerivation(5, "H-image does not vanish: " + outer.to_string());
  }
  if (!(outer.f2 == a)) throw NotADerivation(4, "non-constant outer part " + outer.f2.to_string());
  return {g, h, a};
}

/// Graded components D^c via the projections onto grade i+c.
inline std::map<int, WindowedDerivation> split_by_degree(const WindowedDerivation& D) {
  std::map<int, WindowedDerivation> out;
  for (const auto& [x, img] : D.images) {
    for (const auto& [g, p] : img.terms()) {
      out[g.index - x.index].images[x].add(g, p);
    }
  }
  // every component is defined on the whole window
  for (auto& [c, comp] : out) {
    for (const auto& [x, img] : D.images) comp.images.try_emplace(x);
  }
  return out;
}

/// Images of D on all generators with indices in `window`.
inline WindowedDerivation restrict_to_window(const StructureTable& table, const DerivationDescriptor& D,
                                             IndexRange window) {
  WindowedDerivation out;
  for (const auto& fam : table.families()) {
    for (int i = window.lo; i <= window.hi; ++i) {
      GeneratorId x{fam, i};
      out.images[x] = apply(table, D, x);
    }
  }
  return out;
}

}  // namespace ck
