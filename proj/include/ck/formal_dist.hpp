#pragma once

// Window-truncated formal distributions over the loop Heisenberg-Virasoro
// Lie algebra HV, with basis L(a,i), H(b,j) and brackets
//   [L(a,i), L(b,j)] = (a-b) L(a+b,i+j)
//   [L(a,i), H(b,j)] = -b H(a+b,i+j)
//   [H(a,i), H(b,j)] = 0.
//
// A distribution stores the coefficients of a finite exponent window and a
// validity flag per cell. A cell is valid when its value is exact, i.e.
// everything that contributes to it was known. Cells outside the window are
// unknown unless the distribution is flagged as vanishing there:
// `zero_outside` for one-variable series, `rows_zero_outside` for
// two-variable ones (each z-row inside the window has its whole w-support
// inside the window, as for the delta distribution).

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ck/algebra.hpp"
#include "ck/combination.hpp"
#include "ck/errors.hpp"
#include "ck/scalar.hpp"

namespace ck {

enum class LoopFamily : std::uint8_t { L, H };

struct LoopBasisSymbol {
  LoopFamily family = LoopFamily::L;
  int weight = 0;
  int loop = 0;

  std::string to_string() const {
    return std::string(family == LoopFamily::L ? "L" : "H") + "(" + std::to_string(weight) + "," +
           std::to_string(loop) + ")";
  }

  friend auto operator<=>(const LoopBasisSymbol&, const LoopBasisSymbol&) = default;
};

class HVElement {
 public:
  HVElement() = default;
  explicit HVElement(const LoopBasisSymbol& s, Scalar c = Scalar(1)) { add(s, std::move(c)); }

  const std::map<LoopBasisSymbol, Scalar>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(const LoopBasisSymbol& s, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Scalar coefficient(const LoopBasisSymbol& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  HVElement& operator+=(const HVElement& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }
  HVElement& operator-=(const HVElement& o) {
    for (const auto& [s, c] : o.terms_) add(s, -c);
    return *this;
  }
  friend HVElement operator+(HVElement a, const HVElement& b) { return a += b; }
  friend HVElement operator-(HVElement a, const HVElement& b) { return a -= b; }
  friend HVElement operator*(const Scalar& k, const HVElement& x) {
    HVElement out;
    if (k.is_zero()) return out;
    for (const auto& [s, c] : x.terms_) out.terms_.emplace(s, k * c);
    return out;
  }
  friend HVElement operator*(const HVElement& x, const Scalar& k) { return k * x; }
  friend bool operator==(const HVElement&, const HVElement&) = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [s, c] : terms_) {
      std::string t;
      if (c.is_one()) {
        t = s.to_string();
      } else if (c == Scalar(-1)) {
        t = "-" + s.to_string();
      } else {
        t = c.to_string() + "*" + s.to_string();
      }
      if (!first && t.front() != '-') out += "+";
      out += t;
      first = false;
    }
    return out;
  }

 private:
  std::map<LoopBasisSymbol, Scalar> terms_;
};

inline bool is_zero_value(const Scalar& s) { return s.is_zero(); }
inline bool is_zero_value(const HVElement& x) { return x.is_zero(); }
inline std::string value_to_string(const Scalar& s) { return s.to_string(); }
inline std::string value_to_string(const HVElement& x) { return x.to_string(); }

inline HVElement hv_bracket(const LoopBasisSymbol& x, const LoopBasisSymbol& y) {
  const int w = x.weight + y.weight;
  const int loop = x.loop + y.loop;
  if (x.family == LoopFamily::L && y.family == LoopFamily::L) {
    return HVElement({LoopFamily::L, w, loop}, Scalar(x.weight - y.weight));
  }
  if (x.family == LoopFamily::L && y.family == LoopFamily::H) {
    return HVElement({LoopFamily::H, w, loop}, Scalar(-y.weight));
  }
  if (x.family == LoopFamily::H && y.family == LoopFamily::L) {
    return HVElement({LoopFamily::H, w, loop}, Scalar(x.weight));
  }
  return {};
}

inline HVElement hv_bracket(const HVElement& x, const HVElement& y) {
  HVElement out;
  for (const auto& [s, c] : x.terms()) {
    for (const auto& [t, e] : y.terms()) out += (c * e) * hv_bracket(s, t);
  }
  return out;
}

template <class C>
class MonoDistribution {
 public:
  MonoDistribution(IndexRange window, bool zero_outside = false)
      : window_(window),
        coeffs_(static_cast<std::size_t>(window.size())),
        valid_(static_cast<std::size_t>(window.size()), 1),
        zero_outside_(zero_outside) {}

  IndexRange window() const noexcept { return window_; }
  bool zero_outside() const noexcept { return zero_outside_; }

  bool valid(int n) const {
    if (!window_.contains(n)) return zero_outside_;
    return valid_[slot(n)] != 0;
  }

  /// Exact value at z^n (or w^n) when known.
  std::optional<C> known(int n) const {
    if (!window_.contains(n)) {
      if (zero_outside_) return C{};
      return std::nullopt;
    }
    if (!valid_[slot(n)]) return std::nullopt;
    return coeffs_[slot(n)];
  }

  const C& at(int n) const {
    if (!window_.contains(n)) throw WindowError("exponent " + std::to_string(n) + " outside " + window_.to_string());
    return coeffs_[slot(n)];
  }

  void set(int n, C value, bool valid = true) {
    coeffs_[slot(n)] = std::move(value);
    valid_[slot(n)] = valid ? 1 : 0;
  }

  std::size_t valid_count() const {
    std::size_t count = 0;
    for (auto v : valid_) count += v;
    return count;
  }

  /// Formal derivative: (f')_n = (n+1) f_{n+1}.
  MonoDistribution derivative() const {
    IndexRange out_window = window_;
    if (zero_outside_) out_window.lo -= 1;
    MonoDistribution out(out_window, zero_outside_);
    for (int n = out_window.lo; n <= out_window.hi; ++n) {
      auto src = known(n + 1);
      if (src) {
        out.set(n, Scalar(n + 1) * *src);
      } else {
        out.set(n, C{}, false);
      }
    }
    return out;
  }

  std::string to_string(const std::string& var = "z") const {
    std::string out;
    for (int n = window_.lo; n <= window_.hi; ++n) {
      if (!valid(n)) continue;
      const C& c = coeffs_[slot(n)];
      if (is_zero_value(c)) continue;
      out += var + "^" + std::to_string(n) + " -> " + value_to_string(c) + "\n";
    }
    return out.empty() ? "0\n" : out;
  }

 private:
  std::size_t slot(int n) const { return static_cast<std::size_t>(n - window_.lo); }

  IndexRange window_;
  std::vector<C> coeffs_;
  std::vector<char> valid_;
  bool zero_outside_;
};

template <class C>
class BiDistribution {
 public:
  BiDistribution(IndexRange z, IndexRange w, bool rows_zero_outside = false)
      : z_(z),
        w_(w),
        cells_(static_cast<std::size_t>(z.size()) * static_cast<std::size_t>(w.size())),
        valid_(cells_.size(), 1),
        rows_zero_outside_(rows_zero_outside) {}

  IndexRange z_window() const noexcept { return z_; }
  IndexRange w_window() const noexcept { return w_; }
  bool rows_zero_outside() const noexcept { return rows_zero_outside_; }

  bool in_window(int m, int n) const { return z_.contains(m) && w_.contains(n); }
  bool valid(int m, int n) const { return in_window(m, n) && valid_[slot(m, n)] != 0; }

  std::optional<C> known(int m, int n) const {
    if (!z_.contains(m)) return std::nullopt;
    if (!w_.contains(n)) {
      if (rows_zero_outside_) return C{};
      return std::nullopt;
    }
    if (!valid_[slot(m, n)]) return std::nullopt;
    return cells_[slot(m, n)];
  }

  const C& at(int m, int n) const {
    if (!in_window(m, n)) {
      throw WindowError("cell (" + std::to_string(m) + ", " + std::to_string(n) + ") outside window");
    }
    return cells_[slot(m, n)];
  }

  void set(int m, int n, C value, bool valid = true) {
    cells_[slot(m, n)] = std::move(value);
    valid_[slot(m, n)] = valid ? 1 : 0;
  }

  std::size_t valid_count() const {
    std::size_t count = 0;
    for (auto v : valid_) count += v;
    return count;
  }

  /// True when every valid cell is zero.
  bool vanishes_on_valid() const {
    for (std::size_t s = 0; s < cells_.size(); ++s) {
      if (valid_[s] && !is_zero_value(cells_[s])) return false;
    }
    return true;
  }

  BiDistribution scaled(const Scalar& k) const {
    BiDistribution out = *this;
    for (auto& c : out.cells_) c = k * c;
    return out;
  }

  /// Sparse `(z_exp, w_exp) -> value` listing of the valid nonzero cells.
  std::string to_string() const {
    std::string out;
    for (int m = z_.lo; m <= z_.hi; ++m) {
      for (int n = w_.lo; n <= w_.hi; ++n) {
        if (!valid(m, n) || is_zero_value(cells_[slot(m, n)])) continue;
        out += "(" + std::to_string(m) + ", " + std::to_string(n) + ") -> " + value_to_string(cells_[slot(m, n)]) + "\n";
      }
    }
    return out.empty() ? "0\n" : out;
  }

 private:
  std::size_t slot(int m, int n) const {
    return static_cast<std::size_t>(m - z_.lo) * static_cast<std::size_t>(w_.size()) +
           static_cast<std::size_t>(n - w_.lo);
  }

  IndexRange z_;
  IndexRange w_;
  std::vector<C> cells_;
  std::vector<char> valid_;
  bool rows_zero_outside_;
};

/// L_i(z) = sum_a L(a,i) z^{-a-2}, truncated to `window`.
inline MonoDistribution<HVElement> dist_L(int i, IndexRange window) {
  MonoDistribution<HVElement> out(window);
  for (int n = window.lo; n <= window.hi; ++n) out.set(n, HVElement({LoopFamily::L, -n - 2, i}));
  return out;
}

/// H_j(z) = sum_b H(b,j) z^{-b-1}, truncated to `window`.
inline MonoDistribution<HVElement> dist_H(int j, IndexRange window) {
  MonoDistribution<HVElement> out(window);
  for (int n = window.lo; n <= window.hi; ++n) out.set(n, HVElement({LoopFamily::H, -n - 1, j}));
  return out;
}

/// Generating distribution of a CHV generator family ("L" or "H").
inline MonoDistribution<HVElement> dist_generator(const std::string& family, int index, IndexRange window) {
  if (family == "L") return dist_L(index, window);
  if (family == "H") return dist_H(index, window);
  throw DomainError("no generating distribution for family '" + family + "'");
}

/// delta(z,w) = sum_i z^i w^{-i-1} on the given window.
inline BiDistribution<Scalar> delta(IndexRange z, IndexRange w) {
  bool rows_complete = w.contains(-z.lo - 1) && w.contains(-z.hi - 1);
  BiDistribution<Scalar> out(z, w, rows_complete);
  for (int m = z.lo; m <= z.hi; ++m) {
    if (w.contains(-m - 1)) out.set(m, -m - 1, Scalar(1));
  }
  return out;
}

/// delta with a w-window wide enough that every z-row is complete.
inline BiDistribution<Scalar> delta(IndexRange z) { return delta(z, IndexRange{-z.hi - 1, -z.lo - 1}); }

/// [a(z), b(w)] cellwise.
inline BiDistribution<HVElement> commutator_dist(const MonoDistribution<HVElement>& a,
                                                 const MonoDistribution<HVElement>& b) {
  BiDistribution<HVElement> out(a.window(), b.window(), b.zero_outside());
  for (int m = a.window().lo; m <= a.window().hi; ++m) {
    for (int n = b.window().lo; n <= b.window().hi; ++n) {
      const bool ok = a.valid(m) && b.valid(n);
      out.set(m, n, ok ? hv_bracket(a.at(m), b.at(n)) : HVElement{}, ok);
    }
  }
  return out;
}

/// Formal w-derivative; a row-complete input stays row-complete on a window
/// widened by one.
template <class C>
BiDistribution<C> d_w(const BiDistribution<C>& a) {
  IndexRange w = a.w_window();
  if (a.rows_zero_outside()) w.lo -= 1;
  BiDistribution<C> out(a.z_window(), w, a.rows_zero_outside());
  for (int m = out.z_window().lo; m <= out.z_window().hi; ++m) {
    for (int n = w.lo; n <= w.hi; ++n) {
      auto src = a.known(m, n + 1);
      if (src) {
        out.set(m, n, Scalar(n + 1) * *src);
      } else {
        out.set(m, n, C{}, false);
      }
    }
  }
  return out;
}

/// (z - w) a(z, w).
template <class C>
BiDistribution<C> times_z_minus_w(const BiDistribution<C>& a) {
  IndexRange w = a.w_window();
  if (a.rows_zero_outside()) w.hi += 1;
  BiDistribution<C> out(a.z_window(), w, a.rows_zero_outside());
  for (int m = out.z_window().lo; m <= out.z_window().hi; ++m) {
    for (int n = w.lo; n <= w.hi; ++n) {
      auto up = a.known(m - 1, n);
      auto left = a.known(m, n - 1);
      if (up && left) {
        out.set(m, n, *up - *left);
      } else {
        out.set(m, n, C{}, false);
      }
    }
  }
  return out;
}

/// f(w) a(z, w) on the window of `a`. A cell is valid only when every
/// product f_k a_{m,n-k} that can be nonzero is known.
template <class C1, class C2>
auto mul_dist(const MonoDistribution<C1>& f, const BiDistribution<C2>& a) {
  using R = decltype(std::declval<C1>() * std::declval<C2>());
  BiDistribution<R> out(a.z_window(), a.w_window());
  if (!f.zero_outside() && !a.rows_zero_outside()) {
    for (int m = a.z_window().lo; m <= a.z_window().hi; ++m) {
      for (int n = a.w_window().lo; n <= a.w_window().hi; ++n) out.set(m, n, R{}, false);
    }
    return out;
  }
  for (int m = a.z_window().lo; m <= a.z_window().hi; ++m) {
    for (int n = a.w_window().lo; n <= a.w_window().hi; ++n) {
      R sum{};
      bool ok = true;
      auto accumulate = [&](int k, int col) {
        auto fv = f.known(k);
        auto av = a.known(m, col);
        if (av && is_zero_value(*av)) return;
        if (fv && is_zero_value(*fv)) return;
        if (!fv || !av) {
          ok = false;
          return;
        }
        sum += *fv * *av;
      };
      if (a.rows_zero_outside()) {
        for (int col = a.w_window().lo; col <= a.w_window().hi && ok; ++col) accumulate(n - col, col);
      } else {
        for (int k = f.window().lo; k <= f.window().hi && ok; ++k) accumulate(k, n - k);
      }
      out.set(m, n, ok ? std::move(sum) : R{}, ok);
    }
  }
  return out;
}

/// Cellwise a + k*b on the common window; valid where both are valid.
template <class C>
BiDistribution<C> add_scaled(const BiDistribution<C>& a, const BiDistribution<C>& b, const Scalar& k = Scalar(1)) {
  IndexRange z{std::max(a.z_window().lo, b.z_window().lo), std::min(a.z_window().hi, b.z_window().hi)};
  IndexRange w{std::max(a.w_window().lo, b.w_window().lo), std::min(a.w_window().hi, b.w_window().hi)};
  const bool same = a.z_window() == b.z_window() && a.w_window() == b.w_window();
  BiDistribution<C> out(z, w, same && a.rows_zero_outside() && b.rows_zero_outside());
  for (int m = z.lo; m <= z.hi; ++m) {
    for (int n = w.lo; n <= w.hi; ++n) {
      const bool ok = a.valid(m, n) && b.valid(m, n);
      out.set(m, n, ok ? a.at(m, n) + k * b.at(m, n) : C{}, ok);
    }
  }
  return out;
}

/// Res_z a(z, w): the coefficient of z^{-1}, as a series in w.
template <class C>
MonoDistribution<C> res_z(const BiDistribution<C>& a) {
  if (!a.z_window().contains(-1)) throw Inconclusive("window does not contain z^-1; residue unknown");
  MonoDistribution<C> out(a.w_window(), a.rows_zero_outside());
  for (int n = a.w_window().lo; n <= a.w_window().hi; ++n) {
    const bool ok = a.valid(-1, n);
    out.set(n, ok ? a.at(-1, n) : C{}, ok);
  }
  return out;
}

struct CellComparison {
  std::size_t compared = 0;
  std::size_t mismatched = 0;

  bool equal() const noexcept { return mismatched == 0; }
};

/// Compares two distributions on cells valid in both.
template <class C>
CellComparison compare_on_valid(const BiDistribution<C>& a, const BiDistribution<C>& b) {
  CellComparison cmp;
  for (int m = a.z_window().lo; m <= a.z_window().hi; ++m) {
    for (int n = a.w_window().lo; n <= a.w_window().hi; ++n) {
      if (!a.valid(m, n) || !b.valid(m, n)) continue;
      ++cmp.compared;
      if (!(a.at(m, n) == b.at(m, n))) ++cmp.mismatched;
    }
  }
  return cmp;
}

template <class C>
CellComparison compare_on_valid(const MonoDistribution<C>& a, const MonoDistribution<C>& b) {
  CellComparison cmp;
  for (int n = a.window().lo; n <= a.window().hi; ++n) {
    if (!a.valid(n) || !b.valid(n) || !b.window().contains(n)) continue;
    ++cmp.compared;
    if (!(a.at(n) == b.at(n))) ++cmp.mismatched;
  }
  return cmp;
}

/// Smallest N <= n_max with (z-w)^N a = 0 on the valid region; absent when
/// no such N is found. Throws Inconclusive when truncation leaves nothing
/// to test.
template <class C>
std::optional<int> locality_order(const BiDistribution<C>& a, int n_max) {
  BiDistribution<C> cur = a;
  for (int n = 0; n <= n_max; ++n) {
    if (cur.valid_count() == 0) {
      throw Inconclusive("window too small: no valid cells left after multiplying by (z-w)^" + std::to_string(n));
    }
    if (cur.vanishes_on_valid()) return n;
    cur = times_z_minus_w(cur);
  }
  return std::nullopt;
}

/// c^j(w) = Res_z (z-w)^j a(z,w) for j below the locality order, so that
/// a = sum_j c^j(w) d_w^j delta / j!.
template <class C>
std::vector<MonoDistribution<C>> delta_decompose(const BiDistribution<C>& a, int bound) {
  auto order = locality_order(a, bound);
  if (!order) throw DomainError("distribution is not local within order " + std::to_string(bound));
  std::vector<MonoDistribution<C>> out;
  BiDistribution<C> cur = a;
  for (int j = 0; j < *order; ++j) {
    out.push_back(res_z(cur));
    cur = times_z_minus_w(cur);
  }
  return out;
}

/// sum_j c^j(w) d_w^j delta(z,w) / j! over the z-window.
template <class C>
BiDistribution<C> delta_synthesize(const std::vector<MonoDistribution<C>>& parts, IndexRange z) {
  BiDistribution<Scalar> basis = delta(z);
  std::optional<BiDistribution<C>> sum;
  Scalar factorial(1);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (j > 0) {
      basis = d_w(basis);
      factorial *= Scalar(static_cast<long long>(j));
    }
    BiDistribution<C> term = mul_dist(parts[j], basis.scaled(factorial.inverse()));
    sum = sum ? add_scaled(*sum, term) : term;
  }
  if (!sum) {
    BiDistribution<C> zero(z, basis.w_window(), true);
    return zero;
  }
  return *sum;
}

/// Coefficients of lambda^k in Res_z e^{lambda(z-w)} a(z,w), k = 0..cap.
template <class C>
std::vector<MonoDistribution<C>> fourier(const BiDistribution<C>& a, int cap) {
  std::vector<MonoDistribution<C>> out;
  BiDistribution<C> cur = a;
  Scalar factorial(1);
  for (int k = 0; k <= cap; ++k) {
    if (k > 0) {
      cur = times_z_minus_w(cur);
      factorial *= Scalar(k);
    }
    MonoDistribution<C> r = res_z(cur);
    if (r.valid_count() == 0) throw Inconclusive("window too small for lambda^" + std::to_string(k));
    MonoDistribution<C> scaled(r.window(), r.zero_outside());
    for (int n = r.window().lo; n <= r.window().hi; ++n) {
      scaled.set(n, r.valid(n) ? factorial.inverse() * r.at(n) : C{}, r.valid(n));
    }
    out.push_back(std::move(scaled));
  }
  return out;
}

namespace detail {

/// x (x-1) ... (x-r+1)
inline long long falling_factorial(long long x, int r) {
  long long out = 1;
  for (int t = 0; t < r; ++t) out *= (x - t);
  return out;
}

inline int derivative_order(const LoopBasisSymbol& s, int n) {
  return s.family == LoopFamily::L ? -s.weight - 2 - n : -s.weight - 1 - n;
}

}  // namespace detail

/// Series of sum_r p_r d_w^r X(w) for an element with constant coefficients
/// in d only.
inline MonoDistribution<HVElement> element_distribution(const Element& e, IndexRange window) {
  MonoDistribution<HVElement> out(window);
  for (const auto& [g, p] : e.terms()) {
    const LoopFamily fam = g.family == "L" ? LoopFamily::L : LoopFamily::H;
    if (g.family != "L" && g.family != "H") throw Mismatch("no generating distribution for " + g.to_string());
    for (const auto& [mono, c] : p.terms()) {
      const int r = mono.exponent(vars::del.name);
      if (!(mono.without(vars::del.name).is_one())) {
        throw Mismatch("coefficient " + p.to_string() + " is not a constant polynomial in d");
      }
      for (int n = window.lo; n <= window.hi; ++n) {
        const int src = n + r;
        const int weight = fam == LoopFamily::L ? -src - 2 : -src - 1;
        const Scalar factor = Scalar(detail::falling_factorial(src, r)) * c;
        HVElement cell = out.at(n);
        cell.add({fam, weight, g.index}, factor);
        out.set(n, std::move(cell));
      }
    }
  }
  return out;
}

/// Identifies a w-series with sum_r p_r d^r X(w) over CHV generators by
/// coefficient matching, then re-synthesizes and compares on every valid
/// cell. Throws Mismatch when no such combination reproduces the series.
inline Element identify_generators(const MonoDistribution<HVElement>& series) {
  std::map<std::pair<GeneratorId, int>, Scalar> candidate;
  for (int n = series.window().lo; n <= series.window().hi; ++n) {
    if (!series.valid(n)) continue;
    for (const auto& [s, c] : series.at(n).terms()) {
      const int r = detail::derivative_order(s, n);
      if (r < 0) throw Mismatch("term " + s.to_string() + " at w^" + std::to_string(n) + " is not a derivative of a generator");
      const long long ff = detail::falling_factorial(n + r, r);
      if (ff == 0) throw Mismatch("term " + s.to_string() + " at w^" + std::to_string(n) + " where every derivative vanishes");
      const Scalar value = c / Scalar(ff);
      GeneratorId g{s.family == LoopFamily::L ? "L" : "H", s.loop};
      auto [it, inserted] = candidate.emplace(std::make_pair(g, r), value);
      if (!inserted && !(it->second == value)) {
        throw Mismatch("inconsistent coefficient of d^" + std::to_string(r) + " " + g.to_string());
      }
    }
  }
  Element e;
  for (const auto& [key, value] : candidate) {
    e.add(key.first, Poly::term(value, Monomial::of(vars::del, key.second)));
  }
  const MonoDistribution<HVElement> back = element_distribution(e, series.window());
  const CellComparison cmp = compare_on_valid(series, back);
  if (!cmp.equal()) throw Mismatch("series is not a C[d]-combination of generators on its valid cells");
  return e;
}

/// Converts the lambda-coefficients of a Fourier transform into a
/// LambdaElement.
inline LambdaElement identify_lambda(const std::vector<MonoDistribution<HVElement>>& series) {
  LambdaElement out;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Poly lk = lam().pow(static_cast<int>(k));
    out += lk * identify_generators(series[k]);
  }
  return out;
}

/// Table bracket minus the bracket recovered from distributions; zero
/// certifies agreement for the pair (x, y).
inline LambdaElement compare_with_structure_table(const std::vector<MonoDistribution<HVElement>>& series,
                                                  const StructureTable& table, const GeneratorId& x,
                                                  const GeneratorId& y) {
  return bracket_gen(table, x, y) - identify_lambda(series);
}

/// Default exponent window.
inline constexpr IndexRange kDefaultDistWindow{-6, 6};

/// [X_i(z), Y_j(w)] for CHV generator families on the default window.
inline BiDistribution<HVElement> generator_commutator(const GeneratorId& x, const GeneratorId& y,
                                                      IndexRange window = kDefaultDistWindow) {
  return commutator_dist(dist_generator(x.family, x.index, window), dist_generator(y.family, y.index, window));
}

/// The delta expansion sum_k (q_k(d_w) Z(w)) d_w^k delta(z,w) whose Fourier
/// transform is the lambda-bracket sum_k l^k q_k(d) Z.
inline BiDistribution<HVElement> delta_expansion(const LambdaElement& bracket_value, IndexRange z,
                                                 IndexRange series_window) {
  std::vector<MonoDistribution<HVElement>> parts;
  int max_k = -1;
  for (const auto& [g, p] : bracket_value.terms()) max_k = std::max(max_k, p.degree_in(vars::lambda.name).value_or(0));
  Scalar factorial(1);
  for (int k = 0; k <= max_k; ++k) {
    if (k > 0) factorial *= Scalar(k);
    Element part;
    for (const auto& [g, p] : bracket_value.terms()) part.add(g, coeff_of(p, vars::lambda, k));
    MonoDistribution<HVElement> series = element_distribution(part, series_window);
    // c^k = k! q_k
    MonoDistribution<HVElement> scaled(series.window());
    for (int n = series_window.lo; n <= series_window.hi; ++n) scaled.set(n, factorial * series.at(n));
    parts.push_back(std::move(scaled));
  }
  return delta_synthesize(parts, z);
}

}  // namespace ck
