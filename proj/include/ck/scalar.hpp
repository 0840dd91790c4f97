#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <utility>

#include "ck/errors.hpp"

namespace ck {

using Rational = boost::multiprecision::mpq_rational;

inline std::string rational_to_string(const Rational& r) {
  const auto num = numerator(r);
  const auto den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Exact rational in lowest terms. Values whose numerator and denominator
/// fit in 64 bits are stored inline; anything larger falls back to GMP.
/// The representation is canonical: a value that fits is always inline.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long long n) : num_(n) {  // NOLINT(google-explicit-constructor)
    if (n == kMin) set_big(Rational(n));
  }
  ExactRational(const Rational& r) { set_big(r); }  // NOLINT(google-explicit-constructor)

  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_integer() const { return big_ ? denominator(*big_) == 1 : den_ == 1; }
  bool equals(long long n) const noexcept { return !big_ && den_ == 1 && num_ == n; }

  Rational to_rational() const {
    if (big_) return *big_;
    return Rational(num_) / Rational(den_);
  }

  std::string to_string() const {
    if (big_) return rational_to_string(*big_);
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  ExactRational operator-() const {
    ExactRational out;
    if (big_) {
      out.set_big(-*big_);
    } else {
      out.num_ = -num_;
      out.den_ = den_;
    }
    return out;
  }

  ExactRational& operator+=(const ExactRational& o) { return add(o, false); }
  ExactRational& operator-=(const ExactRational& o) { return add(o, true); }

  ExactRational& operator*=(const ExactRational& o) {
    if (!big_ && !o.big_) {
      if (num_ == 0 || o.num_ == 0) {
        num_ = 0;
        den_ = 1;
        return *this;
      }
      const long long g1 = std::gcd(num_, o.den_), g2 = std::gcd(o.num_, den_);
      long long n, d;
      if (!__builtin_mul_overflow(num_ / g1, o.num_ / g2, &n) && !__builtin_mul_overflow(den_ / g2, o.den_ / g1, &d) &&
          n != kMin) {
        num_ = n;
        den_ = d;
        return *this;
      }
    }
    set_big(to_rational() * o.to_rational());
    return *this;
  }

  ExactRational& operator/=(const ExactRational& o) { return *this *= o.reciprocal(); }

  ExactRational reciprocal() const {
    if (is_zero()) throw DomainError("division by zero");
    ExactRational out;
    if (big_) {
      out.set_big(Rational(1) / *big_);
    } else {
      out.num_ = num_ < 0 ? -den_ : den_;
      out.den_ = num_ < 0 ? -num_ : num_;
    }
    return out;
  }

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    if (a.big_ || b.big_) return a.big_ && b.big_ && *a.big_ == *b.big_;
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  static constexpr long long kMin = std::numeric_limits<long long>::min();

  ExactRational& add(const ExactRational& o, bool negate) {
    if (!big_ && !o.big_) {
      const long long on = negate ? -o.num_ : o.num_;
      long long n, d;
      bool fits;
      if (den_ == o.den_) {
        d = den_;
        fits = !__builtin_add_overflow(num_, on, &n);
      } else {
        long long a, b;
        fits = !__builtin_mul_overflow(num_, o.den_, &a) && !__builtin_mul_overflow(on, den_, &b) &&
               !__builtin_add_overflow(a, b, &n) && !__builtin_mul_overflow(den_, o.den_, &d);
      }
      if (fits && n != kMin) {
        if (n == 0) {
          num_ = 0;
          den_ = 1;
        } else {
          const long long g = std::gcd(n, d);
          num_ = n / g;
          den_ = d / g;
        }
        return *this;
      }
    }
    const Rational r = o.to_rational();
    set_big(negate ? to_rational() - r : to_rational() + r);
    return *this;
  }

  void set_big(const Rational& r) {
    const auto& n = numerator(r);
    const auto& d = denominator(r);
    static const boost::multiprecision::mpz_int lo(kMin + 1);
    static const boost::multiprecision::mpz_int hi(std::numeric_limits<long long>::max());
    if (n >= lo && n <= hi && d <= hi) {
      num_ = n.convert_to<long long>();
      den_ = d.convert_to<long long>();
      big_.reset();
      return;
    }
    big_ = std::make_shared<const Rational>(r);
    num_ = 0;
    den_ = 1;
  }

  long long num_ = 0;
  long long den_ = 1;
  std::shared_ptr<const Rational> big_;  // immutable, shared between copies
};

/// Gaussian rational re + im*i with both parts in lowest terms, so
/// structural equality is value equality.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& re, const Rational& im = Rational(0)) : re_(re), im_(im) {}
  Scalar(ExactRational re, ExactRational im = ExactRational()) : re_(std::move(re)), im_(std::move(im)) {}

  static Scalar imaginary_unit() { return Scalar(ExactRational(0), ExactRational(1)); }
  static Scalar fraction(long long num, long long den) {
    if (den == 0) throw DomainError("zero denominator");
    return Scalar(ExactRational(num) / ExactRational(den));
  }

  Rational re() const { return re_.to_rational(); }
  Rational im() const { return im_.to_rational(); }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_one() const { return re_.equals(1) && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  bool is_integer() const { return im_.is_zero() && re_.is_integer(); }

  Scalar conj() const { return Scalar(re_, -im_); }

  Scalar inverse() const {
    if (is_zero()) throw DomainError("division by zero");
    if (im_.is_zero()) return Scalar(re_.reciprocal());
    const ExactRational norm = re_ * re_ + im_ * im_;
    return Scalar(re_ / norm, -im_ / norm);
  }

  Scalar operator-() const { return Scalar(-re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    if (!o.im_.is_zero()) im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    if (!o.im_.is_zero()) im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (im_.is_zero() && o.im_.is_zero()) {
      re_ *= o.re_;
      return *this;
    }
    ExactRational re = re_ * o.re_ - im_ * o.im_;
    ExactRational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  Scalar pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar result(1), base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return result;
  }

  /// Canonical text: `3`, `-3/2`, `i`, `-2*i`, `(1+2*i)`, `(1/2-i)`.
  std::string to_string() const {
    if (im_.is_zero()) return re_.to_string();
    std::string imag;
    if (im_.equals(1)) {
      imag = "i";
    } else if (im_.equals(-1)) {
      imag = "-i";
    } else {
      imag = im_.to_string() + "*i";
    }
    if (re_.is_zero()) return imag;
    std::string out = "(" + re_.to_string();
    if (imag.front() != '-') out += "+";
    return out + imag + ")";
  }

 private:
  ExactRational re_;
  ExactRational im_;
};

}  // namespace ck
