#pragma once

// Conformal modules over CHV and CW. A module is free over C[d] on v (rank
// one) or on v[k], k in a grade window, with
//   X[i] _l v[k] = f_{X,i,k}(d, l) v[i+k].

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ck/algebra.hpp"
#include "ck/combination.hpp"
#include "ck/errors.hpp"
#include "ck/poly.hpp"

namespace ck {

enum class ModuleShape { rank1, graded };

/// Structure coefficient of X[i] on v[k]; nullopt where undefined.
using ActionFn = std::function<std::optional<Poly>(const std::string& family, int i, int k)>;

/// Finite window of a 0/1 sequence A = (a_k).
class BitSequenceWindow {
 public:
  BitSequenceWindow() = default;
  explicit BitSequenceWindow(std::map<int, int> bits) : bits_(std::move(bits)) {
    for (const auto& [k, b] : bits_) {
      if (b != 0 && b != 1) throw DomainError("bit a_" + std::to_string(k) + " must be 0 or 1");
    }
  }

  /// Bits of `mask` (bit 0 first) placed on lo, lo+1, ...
  static BitSequenceWindow from_mask(int lo, int width, unsigned mask) {
    std::map<int, int> bits;
    for (int t = 0; t < width; ++t) bits[lo + t] = static_cast<int>((mask >> t) & 1U);
    return BitSequenceWindow(std::move(bits));
  }

  const std::map<int, int>& bits() const noexcept { return bits_; }
  bool has(int k) const { return bits_.count(k) != 0; }
  int at(int k) const {
    auto it = bits_.find(k);
    if (it == bits_.end()) throw WindowError("a_" + std::to_string(k) + " is outside the bit window");
    return it->second;
  }
  IndexRange window() const {
    if (bits_.empty()) return {0, -1};
    return {bits_.begin()->first, bits_.rbegin()->first};
  }
  std::string to_string() const {
    std::string out;
    for (const auto& [k, b] : bits_) out += static_cast<char>('0' + b);
    return out;
  }

 private:
  std::map<int, int> bits_;
};

struct ModuleSpec {
  std::string name;
  std::string algebra = "CHV";
  ModuleShape shape = ModuleShape::rank1;
  IndexRange grades{0, 0};      // {0, 0} for rank one
  IndexRange generators{-2, 2};  // default window for pair checks
  std::vector<std::string> families{"L", "H"};
  ActionFn action;
  std::optional<BitSequenceWindow> bits;
  bool nontrivial = false;

  bool acts_with(const std::string& family) const {
    for (const auto& f : families) {
      if (f == family) return true;
    }
    return false;
  }
  int target(int i, int k) const { return shape == ModuleShape::rank1 ? 0 : i + k; }
  bool has_grade(int k) const { return shape == ModuleShape::rank1 ? k == 0 : grades.contains(k); }

  /// Coefficient of X[i] on v[k]; nullopt when either grade or the action
  /// itself is undefined. Families the module does not act with give 0.
  std::optional<Poly> coefficient(const std::string& family, int i, int k) const {
    if (!has_grade(k) || !has_grade(target(i, k))) return std::nullopt;
    if (!acts_with(family)) return Poly();
    return action(family, i, k);
  }
};

/// Module spec backed by an explicit table. Entries missing inside
/// `generators` are zero; generator indices outside it are undefined.
inline ModuleSpec table_module(std::string name, ModuleShape shape, IndexRange grades, IndexRange generators,
                               std::vector<std::string> families,
                               std::map<std::tuple<std::string, int, int>, Poly> table) {
  ModuleSpec m;
  m.name = std::move(name);
  m.shape = shape;
  m.grades = shape == ModuleShape::rank1 ? IndexRange{0, 0} : grades;
  m.generators = generators;
  m.families = std::move(families);
  m.algebra = m.acts_with("H") ? "CHV" : "CW";
  m.action = [table = std::move(table), generators](const std::string& f, int i, int k) -> std::optional<Poly> {
    if (!generators.contains(i)) return std::nullopt;
    auto it = table.find({f, i, k});
    return it == table.end() ? Poly() : it->second;
  };
  return m;
}

/// (p(d) X[i]) _nu (q(d) v[k]) = p(-nu) q(d+nu) f(d, nu) v[i+k], extended
/// bilinearly.
inline ModuleVector act(const ModuleSpec& m, const Element& x, const ModuleVector& v, const Poly& spectral = lam()) {
  ModuleVector out;
  const std::map<std::string, Poly> left_sub{{vars::del.name, -spectral}};
  const std::map<std::string, Poly> right_sub{{vars::del.name, del() + spectral}};
  const std::map<std::string, Poly> spectral_sub{{vars::lambda.name, spectral}};
  const bool plain = spectral == lam();
  for (const auto& [bv, q] : v.terms()) {
    const Poly right = compose(q, right_sub);
    for (const auto& [g, p] : x.terms()) {
      const std::optional<Poly> f = m.coefficient(g.family, g.index, bv.grade);
      if (!f) {
        throw WindowError(g.to_string() + " _l " + bv.to_string() + " is outside the module window of " + m.name);
      }
      if (f->is_zero()) continue;
      const Poly coeff = compose(p, left_sub) * right * (plain ? *f : compose(*f, spectral_sub));
      out.add(BasisVector{m.target(g.index, bv.grade)}, coeff);
    }
  }
  return out;
}

inline ModuleVector act(const ModuleSpec& m, const Element& x, int k, const Poly& spectral = lam()) {
  return act(m, x, ModuleVector::of(BasisVector{k}), spectral);
}

/// x _l (y _m v[k]) - y _m (x _l v[k]) - [x _l y] _{l+m} v[k].
inline ModuleVector module_residual(const StructureTable& algebra, const ModuleSpec& m, const GeneratorId& x,
                                    const GeneratorId& y, int k) {
  const ModuleVector v = ModuleVector::of(BasisVector{k});
  const ModuleVector xy = act(m, Element::of(x), act(m, Element::of(y), v, mu()), lam());
  const ModuleVector yx = act(m, Element::of(y), act(m, Element::of(x), v, lam()), mu());
  const ModuleVector br = act(m, bracket_gen(algebra, x, y, lam()), v, lam() + mu());
  return xy - yx - br;
}

/// Whether every action the identity for (x, y, v[k]) touches is defined.
inline bool identity_defined(const ModuleSpec& m, const GeneratorId& x, const GeneratorId& y, int k) {
  const int i = x.index, j = y.index;
  return m.coefficient(y.family, j, k) && m.coefficient(x.family, i, m.target(j, k)) &&
         m.coefficient(x.family, i, k) && m.coefficient(y.family, j, m.target(i, k)) &&
         m.coefficient("L", i + j, k) && m.coefficient("H", i + j, k);
}

struct ModuleFailure {
  GeneratorId x, y;
  int k = 0;
  ModuleVector residual;

  std::string describe() const {
    return "module identity fails for (" + x.to_string() + ", " + y.to_string() + ", v[" + std::to_string(k) +
           "]): residual " + residual.to_string();
  }
};

struct ModuleReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<ModuleFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Same module with each action evaluated at most once.
inline ModuleSpec memoized(const ModuleSpec& m) {
  ModuleSpec out = m;
  auto cache = std::make_shared<std::map<std::tuple<std::string, int, int>, std::optional<Poly>>>();
  out.action = [cache, action = m.action](const std::string& f, int i, int k) -> std::optional<Poly> {
    auto key = std::make_tuple(f, i, k);
    auto it = cache->find(key);
    if (it == cache->end()) it = cache->emplace(std::move(key), action(f, i, k)).first;
    return it->second;
  };
  return out;
}

/// Every family pair, generator indices in `pairs`, every grade k. Identities
/// that need an undefined action are skipped.
inline ModuleReport check_module(const StructureTable& algebra, const ModuleSpec& spec, IndexRange pairs) {
  const ModuleSpec m = memoized(spec);
  ModuleReport report;
  const IndexRange ks = m.shape == ModuleShape::rank1 ? IndexRange{0, 0} : m.grades;
  for (const auto& a : m.families) {
    for (const auto& b : m.families) {
      for (int i = pairs.lo; i <= pairs.hi; ++i) {
        for (int j = pairs.lo; j <= pairs.hi; ++j) {
          for (int k = ks.lo; k <= ks.hi; ++k) {
            GeneratorId x{a, i}, y{b, j};
            if (!identity_defined(m, x, y, k)) {
              ++report.skipped;
              continue;
            }
            ++report.checked;
            ModuleVector r = module_residual(algebra, m, x, y, k);
            if (!r.is_zero()) report.failures.push_back({x, y, k, std::move(r)});
          }
        }
      }
    }
  }
  return report;
}

inline ModuleReport check_module(const ModuleSpec& m, std::optional<IndexRange> pairs = std::nullopt) {
  return check_module(builtin_algebra(m.algebra), m, pairs.value_or(m.generators));
}

/// Nontrivial means some defined action is nonzero on the generator window.
inline bool is_trivial(const ModuleSpec& m) {
  const IndexRange ks = m.shape == ModuleShape::rank1 ? IndexRange{0, 0} : m.grades;
  for (const auto& f : m.families) {
    for (int i = m.generators.lo; i <= m.generators.hi; ++i) {
      for (int k = ks.lo; k <= ks.hi; ++k) {
        auto c = m.coefficient(f, i, k);
        if (c && !c->is_zero()) return false;
      }
    }
  }
  return true;
}

enum class ConstraintKind { LH, HH, LL };

inline std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::LH: return "LH";
    case ConstraintKind::HH: return "HH";
    case ConstraintKind::LL: return "LL";
  }
  return "?";
}

/// Coefficient of v[i+j+k] in the compatibility residual for the pair of
/// the given kind with indices i and j. For LH this is
///   g_{j,k}(d+l,m) f_{i,j+k}(d,l) - f_{i,k}(d+m,l) g_{j,i+k}(d,m) + m g_{i+j,k}(d,l+m),
/// for HH
///   g_{j,k}(d+l,m) g_{i,j+k}(d,l) - g_{i,k}(d+m,l) g_{j,i+k}(d,m).
inline Poly generate_constraints(const StructureTable& algebra, const ModuleSpec& m, ConstraintKind kind, int i, int j,
                                 int k) {
  const std::string a = kind == ConstraintKind::HH ? "H" : "L";
  const std::string b = kind == ConstraintKind::LL ? "L" : "H";
  const GeneratorId x{a, i}, y{b, j};
  if (!identity_defined(m, x, y, k)) {
    throw WindowError("constraint (" + x.to_string() + ", " + y.to_string() + ", v[" + std::to_string(k) +
                      "]) needs actions outside the module window");
  }
  return module_residual(algebra, m, x, y, k).coefficient(BasisVector{m.target(i + j, k)});
}

inline Poly generate_constraints(const ModuleSpec& m, ConstraintKind kind, int i, int j, int k) {
  return generate_constraints(builtin_algebra("CHV"), m, kind, i, j, k);
}

/// True iff g_{j,k} has degree 0 in d, for every H-action on the window.
inline std::map<std::pair<int, int>, bool> check_partial_independence(const ModuleSpec& m) {
  std::map<std::pair<int, int>, bool> out;
  const IndexRange ks = m.shape == ModuleShape::rank1 ? IndexRange{0, 0} : m.grades;
  for (int j = m.generators.lo; j <= m.generators.hi; ++j) {
    for (int k = ks.lo; k <= ks.hi; ++k) {
      if (auto g = m.coefficient("H", j, k)) out[{j, k}] = g->degree_in(vars::del.name).value_or(0) == 0;
    }
  }
  return out;
}

inline bool independent_of_d(const Poly& g) { return g.degree_in(vars::del.name).value_or(0) == 0; }

namespace detail {

inline void require_monic_in_d(const Poly& p) {
  if (p.is_zero()) throw DomainError("submodule generator must be nonzero");
  if (p.contains(vars::lambda.name) || p.contains(vars::mu.name)) {
    throw DomainError("submodule generator must be a polynomial in d");
  }
  if (p.min_degree_in(vars::del.name).value_or(0) < 0) throw DomainError("submodule generator has negative powers of d");
  const int n = p.degree_in(vars::del.name).value_or(0);
  if (!(coeff_of(p, vars::del, n) == Poly(1))) throw DomainError("submodule generator " + p.to_string() + " is not monic in d");
}

inline std::vector<std::pair<std::string, int>> rank1_generators(const ModuleSpec& m) {
  if (m.shape != ModuleShape::rank1) throw DomainError(m.name + " is not a rank-one module");
  std::vector<std::pair<std::string, int>> out;
  for (const auto& f : m.families) {
    for (int i = m.generators.lo; i <= m.generators.hi; ++i) out.emplace_back(f, i);
  }
  return out;
}

}  // namespace detail

/// Whether C[d] p(d) v is closed under every action X[i] _l, i.e. p(d)
/// divides p(d+l) f(d, l) for all generators in the module's window.
inline bool rank1_submodule_closed(const Poly& p, const ModuleSpec& m) {
  detail::require_monic_in_d(p);
  const Poly shifted = compose(p, {{vars::del.name, del() + lam()}});
  for (const auto& [f, i] : detail::rank1_generators(m)) {
    const std::optional<Poly> c = m.coefficient(f, i, 0);
    if (!c) continue;
    if (!divide_in(shifted * *c, p, vars::del).remainder.is_zero()) return false;
  }
  return true;
}

/// Action of X[i] on the generator p(d)v of a closed submodule:
/// X[i] _l (p v) = (p(d+l) f / p(d)) (p v).
inline Poly induced_rank1_action(const Poly& p, const ModuleSpec& m, const std::string& family, int i) {
  detail::require_monic_in_d(p);
  const std::optional<Poly> c = m.coefficient(family, i, 0);
  if (!c) throw WindowError(family + "[" + std::to_string(i) + "] is outside the module window");
  const DivisionResult r = divide_in(compose(p, {{vars::del.name, del() + lam()}}) * *c, p, vars::del);
  if (!r.remainder.is_zero()) throw DomainError(p.to_string() + " does not generate a submodule");
  return r.quotient;
}

/// Monic gcd over Q(i) of univariate polynomials in d.
inline Poly gcd_in_d(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divide_in(a, b, vars::del).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  const int n = a.degree_in(vars::del.name).value_or(0);
  return a * coeff_of(a, vars::del, n).inverse_unit();
}

struct ProbeResult {
  enum class Verdict { witness, no_witness, inconclusive };
  Verdict verdict = Verdict::no_witness;
  std::optional<Poly> witness;
  int max_deg = 0;
  std::string detail;

  std::string to_string() const {
    switch (verdict) {
      case Verdict::witness: return "witness: " + witness->to_string();
      case Verdict::no_witness: return "no witness up to degree " + std::to_string(max_deg);
      case Verdict::inconclusive: return "inconclusive: " + detail;
    }
    return "";
  }
};

/// Searches for a proper submodule C[d] p v with p monic of degree 1..max_deg.
/// Since p(d) and p(d+l) are coprime, closure holds iff p divides every
/// l-coefficient of every action; those span the ideal generated by their
/// gcd G. A witness exists up to max_deg whenever 1 <= deg G <= max_deg.
/// Parameters must be numeric.
inline ProbeResult irreducibility_probe(const ModuleSpec& m, int max_deg) {
  if (max_deg < 1) throw DomainError("max_deg must be at least 1");
  ProbeResult out;
  out.max_deg = max_deg;
  Poly g;
  for (const auto& [f, i] : detail::rank1_generators(m)) {
    const std::optional<Poly> c = m.coefficient(f, i, 0);
    if (!c) continue;
    for (const auto& v : c->variables()) {
      if (v.name != vars::del.name && v.name != vars::lambda.name) {
        throw DomainError("irreducibility_probe needs numeric parameters; found '" + v.name + "'");
      }
    }
    const int top = c->degree_in(vars::lambda.name).value_or(0);
    for (int t = 0; t <= top; ++t) g = gcd_in_d(g, coeff_of(*c, vars::lambda, t));
  }
  if (g.is_zero()) {
    out.verdict = ProbeResult::Verdict::witness;
    out.witness = del();
    return out;
  }
  const int n = g.degree_in(vars::del.name).value_or(0);
  if (n == 0) return out;
  if (n <= max_deg) {
    out.verdict = ProbeResult::Verdict::witness;
    out.witness = g;
    return out;
  }
  out.verdict = ProbeResult::Verdict::inconclusive;
  out.detail = "common factor " + g.to_string() + " has degree " + std::to_string(n) + " > " + std::to_string(max_deg);
  return out;
}

// ---- named families -------------------------------------------------------
//
// Parameter names: a, b as usual; q is the loop parameter of the rank-one
// family (invertible), hc the constant of the H-action.

namespace params {
inline const Var q{"q", true};
inline Poly a() { return Poly::var("a"); }
inline Poly b() { return Poly::var("b"); }
inline Poly hc() { return Poly::var("hc"); }
inline Poly loop() { return Poly::var(q); }
}  // namespace params

/// q^i as a polynomial; negative powers need q to be a unit.
inline Poly loop_power(const Poly& q, int i) {
  if (i < 0 && !q.is_unit()) throw DomainError("loop parameter " + q.to_string() + " must be invertible");
  return q.pow(i);
}

/// M_{a,b,q,hc}: L[i] _l v = q^i (d + a l + b) v,  H[i] _l v = hc q^i v.
inline ModuleSpec build_M(const Poly& a = params::a(), const Poly& b = params::b(), const Poly& q = params::loop(),
                          const Poly& hc = params::hc()) {
  ModuleSpec m;
  m.name = "M";
  m.nontrivial = true;
  const Poly f = del() + a * lam() + b;
  m.action = [f, q, hc](const std::string& fam, int i, int) -> std::optional<Poly> {
    const Poly qi = loop_power(q, i);
    if (fam == "L") return qi * f;
    if (fam == "H") return hc * qi;
    return Poly();
  };
  return m;
}

/// M'_{a,b} over CW: L _l v = (d + a l + b) v for every L[i].
inline ModuleSpec build_Mprime(const Poly& a = params::a(), const Poly& b = params::b()) {
  ModuleSpec m;
  m.name = "M'";
  m.algebra = "CW";
  m.families = {"L"};
  m.nontrivial = true;
  const Poly f = del() + a * lam() + b;
  m.action = [f](const std::string&, int, int) -> std::optional<Poly> { return f; };
  return m;
}

inline constexpr IndexRange kDefaultGradeWindow{-3, 3};

namespace detail {

inline ModuleSpec graded_shell(std::string name, IndexRange grades) {
  if (grades.size() == 0) throw DomainError("empty grade window");
  ModuleSpec m;
  m.name = std::move(name);
  m.shape = ModuleShape::graded;
  m.grades = grades;
  m.generators = {grades.lo - grades.hi, grades.hi - grades.lo};
  m.nontrivial = true;
  return m;
}

/// Case split on (a_k, a_{i+k}).
inline Poly bit_action(int from, int to, const Poly& b) {
  const Poly base = del() + b;
  if (from == 0 && to == 0) return base;
  if (from == 1 && to == 1) return base + lam();
  if (from == 0 && to == 1) return Poly(1);
  return base * (base + lam());
}

}  // namespace detail

/// V'_{a,b} over CW: L[i] _l v[k] = (d + a l + b) v[i+k].
inline ModuleSpec build_V_ab(const Poly& a = params::a(), const Poly& b = params::b(),
                             IndexRange grades = kDefaultGradeWindow) {
  ModuleSpec m = detail::graded_shell("V'", grades);
  m.algebra = "CW";
  m.families = {"L"};
  const Poly f = del() + a * lam() + b;
  m.action = [f](const std::string&, int, int) -> std::optional<Poly> { return f; };
  return m;
}

/// V'_{A,b} over CW; the action on v[k] follows the case split on
/// (a_k, a_{i+k}) and is defined only when both bits are in the window.
inline ModuleSpec build_V_Ab(const BitSequenceWindow& A, const Poly& b = params::b()) {
  ModuleSpec m = detail::graded_shell("V'_A", A.window());
  m.algebra = "CW";
  m.families = {"L"};
  m.bits = A;
  m.action = [A, b](const std::string&, int i, int k) -> std::optional<Poly> {
    if (!A.has(k) || !A.has(i + k)) return std::nullopt;
    return detail::bit_action(A.at(k), A.at(i + k), b);
  };
  return m;
}

/// V_{a,b,hc} over CHV: V'_{a,b} with H[j] _l v[k] = hc v[j+k].
inline ModuleSpec build_V_abc(const Poly& a = params::a(), const Poly& b = params::b(), const Poly& hc = params::hc(),
                              IndexRange grades = kDefaultGradeWindow) {
  ModuleSpec m = build_V_ab(a, b, grades);
  m.name = "V";
  m.algebra = "CHV";
  m.families = {"L", "H"};
  ActionFn l_action = m.action;
  m.action = [l_action, hc](const std::string& fam, int i, int k) -> std::optional<Poly> {
    if (fam == "H") return hc;
    return l_action(fam, i, k);
  };
  return m;
}

/// V_{A,b,hc} over CHV: V'_{A,b} with H[j] _l v[k] = hc v[j+k].
inline ModuleSpec build_V_Abc(const BitSequenceWindow& A, const Poly& b = params::b(), const Poly& hc = params::hc()) {
  ModuleSpec m = build_V_Ab(A, b);
  m.name = "V_A";
  m.algebra = "CHV";
  m.families = {"L", "H"};
  ActionFn l_action = m.action;
  m.action = [l_action, hc](const std::string& fam, int i, int k) -> std::optional<Poly> {
    if (fam == "H") return hc;
    return l_action(fam, i, k);
  };
  return m;
}

/// Action table of a module on a generator window, for printing.
inline std::vector<std::tuple<std::string, int, int, Poly>> action_table(const ModuleSpec& m, IndexRange generators) {
  std::vector<std::tuple<std::string, int, int, Poly>> out;
  const IndexRange ks = m.shape == ModuleShape::rank1 ? IndexRange{0, 0} : m.grades;
  for (const auto& f : m.families) {
    for (int i = generators.lo; i <= generators.hi; ++i) {
      for (int k = ks.lo; k <= ks.hi; ++k) {
        if (auto c = m.coefficient(f, i, k)) out.emplace_back(f, i, k, *c);
      }
    }
  }
  return out;
}

}  // namespace ck
