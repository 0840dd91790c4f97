#pragma once

// Z-graded Lie conformal algebras that are free C[d]-modules on generators
// F[i], with lambda-brackets given by index-independent structure rules
//   [A[i] _l B[j]] = p(d, l) C[i+j].

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ck/combination.hpp"
#include "ck/errors.hpp"
#include "ck/poly.hpp"

namespace ck {

struct IndexRange {
  int lo = 0;
  int hi = 0;

  bool contains(int i) const noexcept { return lo <= i && i <= hi; }
  int size() const noexcept { return hi < lo ? 0 : hi - lo + 1; }
  std::string to_string() const { return std::to_string(lo) + ".." + std::to_string(hi); }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct Rule {
  std::string target;
  Poly coefficient;  // in d, l and parameters
};

class StructureTable {
 public:
  using RuleMap = std::map<std::pair<std::string, std::string>, Rule>;

  StructureTable(std::string name, std::vector<std::string> families, RuleMap rules,
                 IndexRange window = {-2, 2}, std::optional<IndexRange> restriction = std::nullopt)
      : name_(std::move(name)),
        families_(std::move(families)),
        rules_(std::move(rules)),
        window_(window),
        restriction_(restriction) {
    std::set<std::string> seen;
    for (const auto& f : families_) {
      if (f == "v") throw DomainError("family name 'v' is reserved for module basis vectors");
      if (!seen.insert(f).second) throw DomainError("family '" + f + "' declared twice");
    }
    for (const auto& [key, rule] : rules_) {
      for (const auto* f : {&key.first, &key.second, &rule.target}) {
        if (!has_family(*f)) throw DomainError("rule uses undeclared family '" + *f + "'");
      }
      if (rule.coefficient.contains(vars::mu.name)) {
        throw DomainError("rule coefficients must be polynomials in d and l");
      }
    }
    if (window_.size() == 0) throw DomainError("empty verification window");
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& families() const noexcept { return families_; }
  const RuleMap& rules() const noexcept { return rules_; }
  IndexRange window() const noexcept { return window_; }
  const std::optional<IndexRange>& restriction() const noexcept { return restriction_; }

  bool has_family(const std::string& f) const {
    for (const auto& g : families_) {
      if (g == f) return true;
    }
    return false;
  }

  const Rule* rule(const std::string& a, const std::string& b) const {
    auto it = rules_.find({a, b});
    return it == rules_.end() ? nullptr : &it->second;
  }

  void require_generator(const GeneratorId& x) const {
    if (!has_family(x.family)) {
      throw DomainError("family '" + x.family + "' is not declared in algebra " + name_);
    }
    if (restriction_ && !restriction_->contains(x.index)) {
      throw DomainError(x.to_string() + " is outside algebra " + name_ + " (indices " + restriction_->to_string() + ")");
    }
  }

  /// Valid index window for the axiom checks, honoring a restriction.
  IndexRange check_window(IndexRange requested) const {
    if (!restriction_) return requested;
    return {std::max(requested.lo, restriction_->lo), std::min(requested.hi, restriction_->hi)};
  }

 private:
  std::string name_;
  std::vector<std::string> families_;
  RuleMap rules_;
  IndexRange window_;
  std::optional<IndexRange> restriction_;
};

/// [x _nu y] for generators; `spectral` replaces l in the rule coefficient.
inline LambdaElement bracket_gen(const StructureTable& table, const GeneratorId& x, const GeneratorId& y,
                                 const Poly& spectral = lam()) {
  table.require_generator(x);
  table.require_generator(y);
  const Rule* r = table.rule(x.family, y.family);
  if (r == nullptr || r->coefficient.is_zero()) return {};
  Poly coefficient = r->coefficient;
  if (!(spectral == lam())) coefficient = compose(coefficient, {{vars::lambda.name, spectral}});
  return LambdaElement::of(GeneratorId{r->target, x.index + y.index}, std::move(coefficient));
}

/// Bilinear extension through [p(d)x _nu q(d)y] = p(-nu) q(d+nu) [x _nu y].
/// Coefficients may contain other variables (outer spectral parameters),
/// which are left untouched.
inline LambdaElement bracket(const StructureTable& table, const Element& x, const Element& y,
                             const Poly& spectral = lam()) {
  LambdaElement out;
  if (x.is_zero() || y.is_zero()) return out;
  const std::map<std::string, Poly> left_sub{{vars::del.name, -spectral}};
  const std::map<std::string, Poly> right_sub{{vars::del.name, del() + spectral}};
  std::vector<std::pair<const GeneratorId*, Poly>> right;
  for (const auto& [gy, q] : y.terms()) right.emplace_back(&gy, compose(q, right_sub));
  for (const auto& [gx, p] : x.terms()) {
    const Poly left = compose(p, left_sub);
    for (const auto& [gy, q] : right) {
      const LambdaElement base = bracket_gen(table, gx, *gy, spectral);
      for (const auto& [target, r] : base.terms()) out.add(target, left * q * r);
    }
  }
  return out;
}

/// [x _l y] + [y _{-l-d} x]; zero iff skew-symmetry holds for the pair.
inline LambdaElement check_skew(const StructureTable& table, const GeneratorId& x, const GeneratorId& y) {
  const LambdaElement forward = bracket_gen(table, x, y, lam());
  const LambdaElement backward = bracket_gen(table, y, x, mu());
  const std::map<std::string, Poly> flip{{vars::mu.name, -lam() - del()}};
  return forward + backward.map_coefficients([&](const Poly& p) { return compose(p, flip); });
}

/// [x _l [y _m z]] - [[x _l y] _{l+m} z] - [y _m [x _l z]] over C[d,l,m].
inline LambdaElement check_jacobi(const StructureTable& table, const GeneratorId& x, const GeneratorId& y,
                                  const GeneratorId& z) {
  const Element ex = Element::of(x), ey = Element::of(y), ez = Element::of(z);
  LambdaElement lhs = bracket(table, ex, bracket_gen(table, y, z, mu()), lam());
  LambdaElement first = bracket(table, bracket_gen(table, x, y, lam()), ez, lam() + mu());
  LambdaElement second = bracket(table, ey, bracket_gen(table, x, z, lam()), mu());
  return lhs - first - second;
}

/// Common grade of a homogeneous element; absent for zero or mixed grades.
inline std::optional<int> grade_check(const Element& e) {
  std::optional<int> grade;
  for (const auto& [g, p] : e.terms()) {
    if (grade && *grade != g.index) return std::nullopt;
    grade = g.index;
  }
  return grade;
}

struct AxiomFailure {
  std::string identity;  // "skew" or "jacobi"
  std::vector<GeneratorId> generators;
  LambdaElement residual;

  std::string describe() const {
    std::string out = identity + " fails for (";
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (i) out += ", ";
      out += generators[i].to_string();
    }
    return out + "): residual " + residual.to_string();
  }
};

/// `checked` counts index pairs/triples; each one covers every family
/// combination.
struct AxiomReport {
  std::size_t checked = 0;
  std::vector<AxiomFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

inline AxiomReport verify_skew(const StructureTable& table, IndexRange window) {
  window = table.check_window(window);
  AxiomReport report;
  for (int i = window.lo; i <= window.hi; ++i) {
    for (int j = window.lo; j <= window.hi; ++j) {
      ++report.checked;
      for (const auto& a : table.families()) {
        for (const auto& b : table.families()) {
          GeneratorId x{a, i}, y{b, j};
          LambdaElement r = check_skew(table, x, y);
          if (!r.is_zero()) report.failures.push_back({"skew", {x, y}, std::move(r)});
        }
      }
    }
  }
  return report;
}

inline AxiomReport verify_jacobi(const StructureTable& table, IndexRange window) {
  window = table.check_window(window);
  AxiomReport report;
  for (int i = window.lo; i <= window.hi; ++i) {
    for (int j = window.lo; j <= window.hi; ++j) {
      for (int k = window.lo; k <= window.hi; ++k) {
        ++report.checked;
        // jacobi needs [x y] and [x z] at grades i+j, i+k inside a restriction
        if (table.restriction() &&
            (!table.restriction()->contains(i + j) || !table.restriction()->contains(i + k) ||
             !table.restriction()->contains(j + k))) {
          continue;
        }
        for (const auto& a : table.families()) {
          for (const auto& b : table.families()) {
            for (const auto& c : table.families()) {
              GeneratorId x{a, i}, y{b, j}, z{c, k};
              LambdaElement r = check_jacobi(table, x, y, z);
              if (!r.is_zero()) report.failures.push_back({"jacobi", {x, y, z}, std::move(r)});
            }
          }
        }
      }
    }
  }
  return report;
}

/// Throws AxiomViolation naming the first offending pair or triple.
inline void validate(const StructureTable& table) {
  for (const auto& report : {verify_skew(table, table.window()), verify_jacobi(table, table.window())}) {
    if (!report.ok()) throw AxiomViolation(table.name() + ": " + report.failures.front().describe());
  }
}

/// Builtin tables: CHV (loop Heisenberg-Virasoro), CW (loop Virasoro) and
/// CVir (CW restricted to L[0]).
///
/// CHV uses [H[i] _l L[j]] = l*H[i+j]. Writing l*L[i+j] on the right-hand
/// side instead is rejected by the skew check, so the H-valued rule is the
/// only consistent one.
inline StructureTable make_builtin_algebra(const std::string& name) {
  const Poly d = del(), l = lam();
  if (name == "CHV") {
    StructureTable t("CHV", {"L", "H"},
                     {{{"L", "L"}, {"L", d + l.scaled(2)}},
                      {{"L", "H"}, {"H", d + l}},
                      {{"H", "L"}, {"H", l}},
                      {{"H", "H"}, {"H", Poly()}}});
    validate(t);
    return t;
  }
  if (name == "CW" || name == "CVir") {
    std::optional<IndexRange> restriction;
    if (name == "CVir") restriction = IndexRange{0, 0};
    StructureTable t(name, {"L"}, {{{"L", "L"}, {"L", d + l.scaled(2)}}}, {-2, 2}, restriction);
    validate(t);
    return t;
  }
  throw DomainError("unknown builtin algebra '" + name + "' (expected CHV, CW or CVir)");
}

/// Validated once per process.
inline StructureTable builtin_algebra(const std::string& name) {
  if (name == "CHV") {
    static const StructureTable chv = make_builtin_algebra("CHV");
    return chv;
  }
  if (name == "CW") {
    static const StructureTable cw = make_builtin_algebra("CW");
    return cw;
  }
  if (name == "CVir") {
    static const StructureTable cvir = make_builtin_algebra("CVir");
    return cvir;
  }
  return make_builtin_algebra(name);
}

}  // namespace ck
