#pragma once

// Sparse multivariate Laurent polynomials over the Gaussian rationals.
//
// Variables are identified by name. `d`, `l` and `m` stand for the
// derivation and the two spectral parameters; every other name is a
// parameter. A variable flagged invertible may carry negative exponents.

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ck/errors.hpp"
#include "ck/scalar.hpp"

namespace ck {

struct Var {
  std::string name;
  bool invertible = false;

  friend bool operator==(const Var&, const Var&) = default;
};

using VarSpec = Var;

namespace vars {
inline const Var del{"d"};
inline const Var lambda{"l"};
inline const Var mu{"m"};
}  // namespace vars

/// Fixed ring order: d, l, m first, then parameters alphabetically.
inline bool var_name_less(std::string_view a, std::string_view b) {
  auto rank = [](std::string_view n) {
    if (n == "d") return 0;
    if (n == "l") return 1;
    if (n == "m") return 2;
    return 3;
  };
  const int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

inline void require_same_context(const Var& a, const Var& b) {
  if (a.invertible != b.invertible) {
    throw ContextError("variable '" + a.name + "' used both as invertible and as ordinary");
  }
}

class Monomial {
 public:
  using Factor = std::pair<Var, int>;

  Monomial() = default;

  static Monomial of(const Var& v, int exponent = 1) {
    Monomial m;
    if (exponent != 0) {
      check_exponent(v, exponent);
      m.factors_.emplace_back(v, exponent);
    }
    return m;
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }

  int degree() const {
    int total = 0;
    for (const auto& [v, e] : factors_) total += e;
    return total;
  }

  int exponent(std::string_view name) const {
    for (const auto& [v, e] : factors_) {
      if (v.name == name) return e;
    }
    return 0;
  }

  bool all_invertible() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.first.invertible; });
  }

  /// This monomial with `name` removed.
  Monomial without(std::string_view name) const {
    Monomial m;
    for (const auto& f : factors_) {
      if (f.first.name != name) m.factors_.push_back(f);
    }
    return m;
  }

  Monomial inverse() const {
    Monomial m;
    for (const auto& [v, e] : factors_) {
      check_exponent(v, -e);
      m.factors_.emplace_back(v, -e);
    }
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && var_name_less(i->first.name, j->first.name))) {
        out.factors_.push_back(*i++);
      } else if (i == a.factors_.end() || var_name_less(j->first.name, i->first.name)) {
        out.factors_.push_back(*j++);
      } else {
        require_same_context(i->first, j->first);
        const int e = i->second + j->second;
        if (e != 0) out.factors_.emplace_back(i->first, e);
        ++i;
        ++j;
      }
    }
    return out;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  std::string to_string() const {
    std::string out;
    for (const auto& [v, e] : factors_) {
      if (!out.empty()) out += "*";
      out += v.name;
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

 private:
  static void check_exponent(const Var& v, int e) {
    if (e < 0 && !v.invertible) {
      throw DomainError("negative exponent on non-invertible variable '" + v.name + "'");
    }
  }

  std::vector<Factor> factors_;
};

/// Graded-lex descending: higher total degree first, then the exponent
/// vector compared in ring order.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    auto i = fa.begin();
    auto j = fb.begin();
    while (i != fa.end() || j != fb.end()) {
      int ea = 0, eb = 0;
      if (j == fb.end() || (i != fa.end() && var_name_less(i->first.name, j->first.name))) {
        ea = (i++)->second;
      } else if (i == fa.end() || var_name_less(j->first.name, i->first.name)) {
        eb = (j++)->second;
      } else {
        ea = (i++)->second;
        eb = (j++)->second;
      }
      if (ea != eb) return ea > eb;
    }
    return false;
  }
};

class Poly {
 public:
  using TermMap = std::map<Monomial, Scalar, MonomialOrder>;

  Poly() = default;
  Poly(Scalar c) { add_term(Monomial(), std::move(c)); }  // NOLINT(google-explicit-constructor)
  Poly(long long c) : Poly(Scalar(c)) {}                   // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(Scalar(static_cast<long long>(c))) {}  // NOLINT(google-explicit-constructor)

  static Poly var(const Var& v, int exponent = 1) { return term(Scalar(1), Monomial::of(v, exponent)); }
  static Poly var(std::string name) { return var(Var{std::move(name)}); }
  static Poly term(Scalar c, Monomial m) {
    Poly p;
    p.add_term(std::move(m), std::move(c));
    return p;
  }

  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

  /// Coefficient of the empty monomial.
  Scalar constant_term() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  /// A single nonzero term built from invertible variables only.
  bool is_unit() const { return terms_.size() == 1 && terms_.begin()->first.all_invertible(); }

  Poly inverse_unit() const {
    if (!is_unit()) throw DomainError("'" + to_string() + "' is not a unit");
    const auto& [m, c] = *terms_.begin();
    return term(c.inverse(), m.inverse());
  }

  bool contains(std::string_view name) const {
    for (const auto& [m, c] : terms_) {
      if (m.exponent(name) != 0) return true;
    }
    return false;
  }

  std::optional<int> degree_in(std::string_view name) const {
    std::optional<int> deg;
    for (const auto& [m, c] : terms_) {
      const int e = m.exponent(name);
      if (!deg || e > *deg) deg = e;
    }
    return deg;
  }

  std::optional<int> min_degree_in(std::string_view name) const {
    std::optional<int> deg;
    for (const auto& [m, c] : terms_) {
      const int e = m.exponent(name);
      if (!deg || e < *deg) deg = e;
    }
    return deg;
  }

  std::optional<int> total_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.degree();
  }

  /// Every variable occurring with nonzero exponent, in ring order.
  std::vector<Var> variables() const {
    std::vector<Var> out;
    for (const auto& [m, c] : terms_) {
      for (const auto& [v, e] : m.factors()) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Var& x) { return x.name == v.name; });
        if (it == out.end()) {
          out.push_back(v);
        } else {
          require_same_context(*it, v);
        }
      }
    }
    std::sort(out.begin(), out.end(), [](const Var& a, const Var& b) { return var_name_less(a.name, b.name); });
    return out;
  }

  Poly operator-() const {
    Poly out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    }
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    return std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                      [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
  }

  Poly scaled(const Scalar& s) const {
    if (s.is_zero()) return Poly();
    Poly out = *this;
    for (auto& [m, c] : out.terms_) c *= s;
    return out;
  }

  Poly pow(int e) const {
    if (e < 0) return inverse_unit().pow(-e);
    Poly result(1), base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return result;
  }

  /// Canonical text, e.g. `d^2+2*b*d+l*d` rendered in ring/graded-lex order.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string t = term_to_string(m, c);
      if (!first && t.front() != '-') out += "+";
      out += t;
      first = false;
    }
    return out;
  }

 private:
  static std::string term_to_string(const Monomial& m, const Scalar& c) {
    if (m.is_one()) return c.to_string();
    if (c.is_one()) return m.to_string();
    if (c == Scalar(-1)) return "-" + m.to_string();
    return c.to_string() + "*" + m.to_string();
  }

  void add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    if (!(it->first == m)) {
      for (const auto& [v, e] : m.factors()) {
        for (const auto& [w, f] : it->first.factors()) {
          if (v.name == w.name) require_same_context(v, w);
        }
      }
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  TermMap terms_;
};

inline Poly del() { return Poly::var(vars::del); }
inline Poly lam() { return Poly::var(vars::lambda); }
inline Poly mu() { return Poly::var(vars::mu); }

inline Poly poly_add(const Poly& p, const Poly& q) { return p + q; }
inline Poly poly_mul(const Poly& p, const Poly& q) { return p * q; }

/// Simultaneous substitution name -> value. Values for invertible variables
/// must be units.
inline Poly compose(const Poly& p, const std::map<std::string, Poly>& values) {
  bool touched = false;
  for (const auto& [name, value] : values) touched = touched || p.contains(name);
  if (!touched) return p;
  for (const auto& [name, value] : values) {
    for (const auto& v : p.variables()) {
      if (v.name == name && v.invertible && !value.is_unit()) {
        throw DomainError("cannot substitute non-unit '" + value.to_string() + "' for invertible '" + name + "'");
      }
    }
  }
  std::map<std::pair<std::string, int>, Poly> power_cache;
  auto power = [&](const std::string& name, const Poly& value, int e) -> const Poly& {
    auto key = std::make_pair(name, e);
    auto it = power_cache.find(key);
    if (it == power_cache.end()) it = power_cache.emplace(key, value.pow(e)).first;
    return it->second;
  };
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Poly t(c);
    Monomial rest;
    for (const auto& [v, e] : m.factors()) {
      auto it = values.find(v.name);
      if (it == values.end()) {
        rest = rest * Monomial::of(v, e);
      } else {
        t *= power(v.name, it->second, e);
      }
    }
    out += t * Poly::term(Scalar(1), rest);
  }
  return out;
}

inline Poly substitute(const Poly& p, const Var& var, const Poly& value) {
  if (var.invertible && !value.is_unit()) {
    throw DomainError("cannot substitute non-unit '" + value.to_string() + "' for invertible '" + var.name + "'");
  }
  return compose(p, {{var.name, value}});
}

/// Coefficient of var^k, as a polynomial in the remaining variables.
inline Poly coeff_of(const Poly& p, const Var& var, int k) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    if (m.exponent(var.name) == k) out += Poly::term(c, m.without(var.name));
  }
  return out;
}

struct DivisionResult {
  Poly quotient;
  Poly remainder;
};

/// Division with remainder treating p and divisor as univariate in `var`.
/// The leading coefficient of the divisor must be a unit.
inline DivisionResult divide_in(const Poly& p, const Poly& divisor, const Var& var) {
  if (divisor.is_zero()) throw DomainError("division by zero polynomial");
  auto low = [&](const Poly& x) { return x.min_degree_in(var.name).value_or(0); };
  if (low(p) < 0 || low(divisor) < 0) {
    throw DomainError("divide_in requires non-negative exponents in '" + var.name + "'");
  }
  const int dd = *divisor.degree_in(var.name);
  const Poly lc = coeff_of(divisor, var, dd);
  if (!lc.is_unit()) {
    throw DomainError("leading coefficient '" + lc.to_string() + "' of the divisor is not a unit");
  }
  const Poly lc_inv = lc.inverse_unit();
  Poly quotient, remainder = p;
  while (!remainder.is_zero()) {
    const int dr = *remainder.degree_in(var.name);
    if (dr < dd) break;
    const Poly t = coeff_of(remainder, var, dr) * lc_inv * Poly::var(var, dr - dd);
    quotient += t;
    remainder -= t * divisor;
  }
  return {std::move(quotient), std::move(remainder)};
}

}  // namespace ck
