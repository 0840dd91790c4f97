#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "ck/poly.hpp"

namespace ck {

/// Free generator of a graded conformal algebra: family tag plus grade.
struct GeneratorId {
  std::string family;
  int index = 0;

  std::string to_string() const { return family + "[" + std::to_string(index) + "]"; }

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
  friend std::strong_ordering operator<=>(const GeneratorId& a, const GeneratorId& b) {
    // L before H before user families (alphabetical).
    auto rank = [](const std::string& f) { return f == "L" ? 0 : f == "H" ? 1 : 2; };
    if (auto c = rank(a.family) <=> rank(b.family); c != 0) return c;
    if (auto c = a.family.compare(b.family) <=> 0; c != 0) return c;
    return a.index <=> b.index;
  }
};

/// Basis vector v_k of a graded module (k = 0 for rank one).
struct BasisVector {
  int grade = 0;

  std::string to_string() const { return "v[" + std::to_string(grade) + "]"; }

  friend auto operator<=>(const BasisVector&, const BasisVector&) = default;
};

/// Finite linear combination sum_k p_k(...) * key_k with polynomial
/// coefficients. Zero coefficients are never stored.
template <class Key>
class Combination {
 public:
  using TermMap = std::map<Key, Poly>;

  Combination() = default;

  static Combination of(Key key, Poly coefficient = Poly(1)) {
    Combination c;
    c.add(std::move(key), std::move(coefficient));
    return c;
  }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Poly coefficient(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Poly() : it->second;
  }

  void add(const Key& key, const Poly& coefficient) {
    if (coefficient.is_zero()) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, coefficient);
      return;
    }
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// Applies `f` to every coefficient, dropping results that vanish.
  template <class F>
  Combination map_coefficients(F&& f) const {
    Combination out;
    for (const auto& [k, p] : terms_) out.add(k, f(p));
    return out;
  }

  Combination& operator+=(const Combination& o) {
    for (const auto& [k, p] : o.terms_) add(k, p);
    return *this;
  }
  Combination& operator-=(const Combination& o) {
    for (const auto& [k, p] : o.terms_) add(k, -p);
    return *this;
  }
  friend Combination operator+(Combination a, const Combination& b) { return a += b; }
  friend Combination operator-(Combination a, const Combination& b) { return a -= b; }
  Combination operator-() const {
    return map_coefficients([](const Poly& p) { return -p; });
  }
  friend Combination operator*(const Poly& s, const Combination& c) {
    return c.map_coefficients([&](const Poly& p) { return s * p; });
  }
  friend Combination operator*(const Combination& c, const Poly& s) { return s * c; }

  friend bool operator==(const Combination& a, const Combination& b) { return a.terms_ == b.terms_; }

  /// `(d+2*l)*L[3]+l*H[3]`; zero prints as `0`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, p] : terms_) {
      std::string t;
      const std::string key = k.to_string();
      if (p == Poly(1)) {
        t = key;
      } else if (p == Poly(-1)) {
        t = "-" + key;
      } else if (p.size() == 1) {
        t = p.to_string() + "*" + key;
      } else {
        t = "(" + p.to_string() + ")*" + key;
      }
      if (!first && t.front() != '-') out += "+";
      out += t;
      first = false;
    }
    return out;
  }

 private:
  TermMap terms_;
};

/// C[d]-combination of generators; LambdaElement additionally allows the
/// spectral variables in coefficients.
using Element = Combination<GeneratorId>;
using LambdaElement = Combination<GeneratorId>;
using ModuleVector = Combination<BasisVector>;

inline Element gen(std::string family, int index) { return Element::of(GeneratorId{std::move(family), index}); }

}  // namespace ck
