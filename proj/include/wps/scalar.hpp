#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "wps/error.hpp"

namespace wps {

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw PreconditionError("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Accepts "n" or "n/d" with optional leading sign; arbitrary size.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty number");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool slash = false;
    bool digit_seen = false;
    for (std::size_t k = i; k < s.size(); ++k) {
      if (s[k] == '/' && !slash && digit_seen && k + 1 < s.size()) {
        slash = true;
        digit_seen = false;
      } else if (s[k] >= '0' && s[k] <= '9') {
        digit_seen = true;
      } else {
        throw ParseError("bad number '" + s + "'");
      }
    }
    if (!digit_seen) throw ParseError("bad number '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad number '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(std::move(q));
  }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  bool is_negative() const { return sgn(q_) < 0; }
  const mpq_class& value() const { return q_; }
  std::string to_string() const { return q_.get_str(); }

  Rational& operator+=(const Rational& o) {
    q_ += o.q_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    q_ -= o.q_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    q_ *= o.q_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw PreconditionError("division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(Rational a) {
    a.q_ = -a.q_;
    return a;
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }

 private:
  mpq_class q_;
};

/// Element of a prime field F_p.
///
/// A value built from a bare integer has no modulus yet (p == 0) and behaves
/// as an integer literal until it meets a bound value, at which point it is
/// reduced. This lets generic code write K(1) or K(-1) without a context.
class Fp {
 public:
  Fp() = default;
  Fp(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Fp(long v, std::uint32_t p) : v_(reduce(v, p)), p_(p) {}

  std::uint32_t modulus() const { return p_; }
  std::int64_t raw() const { return v_; }
  bool is_zero() const { return p_ == 0 ? v_ == 0 : v_ % p_ == 0; }
  bool is_one() const { return p_ == 0 ? v_ == 1 : reduce(v_, p_) == 1 % p_; }
  bool is_negative() const { return p_ == 0 && v_ < 0; }
  std::string to_string() const { return std::to_string(p_ == 0 ? v_ : reduce(v_, p_)); }

  friend Fp operator+(const Fp& a, const Fp& b) { return binary(a, b, [](std::int64_t x, std::int64_t y) { return x + y; }); }
  friend Fp operator-(const Fp& a, const Fp& b) { return binary(a, b, [](std::int64_t x, std::int64_t y) { return x - y; }); }
  friend Fp operator*(const Fp& a, const Fp& b) { return binary(a, b, [](std::int64_t x, std::int64_t y) { return x * y; }); }
  friend Fp operator/(const Fp& a, const Fp& b) {
    std::uint32_t p = a.p_ ? a.p_ : b.p_;
    if (b.is_zero()) throw PreconditionError("division by zero");
    if (p == 0) {
      if (b.v_ != 1 && b.v_ != -1) throw PreconditionError("unbound F_p literal division");
      return Fp(a.v_ * b.v_);
    }
    return Fp(reduce(a.v_, p) * inverse(reduce(b.v_, p), p), p);
  }
  friend Fp operator-(const Fp& a) { return a.p_ ? Fp(-a.v_, a.p_) : Fp(-a.v_); }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }
  friend bool operator==(const Fp& a, const Fp& b) {
    std::uint32_t p = a.p_ ? a.p_ : b.p_;
    if (p == 0) return a.v_ == b.v_;
    return reduce(a.v_, p) == reduce(b.v_, p);
  }

  static std::int64_t inverse(std::int64_t a, std::uint32_t p) {
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t -= q * new_t;
      std::swap(t, new_t);
      r -= q * new_r;
      std::swap(r, new_r);
    }
    return t < 0 ? t + p : t;
  }

 private:
  static std::int64_t reduce(std::int64_t v, std::uint32_t p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return r < 0 ? r + p : r;
  }
  template <class Op>
  static Fp binary(const Fp& a, const Fp& b, Op op) {
    std::uint32_t p = a.p_ ? a.p_ : b.p_;
    if (p == 0) return Fp(op(a.v_, b.v_));
    return Fp(op(reduce(a.v_, p), reduce(b.v_, p)), p);
  }

  std::int64_t v_ = 0;
  std::uint32_t p_ = 0;
};

/// The base field K: the rationals or F_p for a prime p < 2^31.
class FieldSpec {
 public:
  static FieldSpec rationals() { return FieldSpec(0); }
  static FieldSpec prime(std::uint64_t p) {
    if (p < 2 || p >= (1ULL << 31)) throw PreconditionError("field modulus out of range: " + std::to_string(p));
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw PreconditionError("field modulus is not prime: " + std::to_string(p));
    return FieldSpec(static_cast<std::uint32_t>(p));
  }

  bool is_rational() const { return modulus_ == 0; }
  std::uint32_t modulus() const { return modulus_; }
  std::string name() const { return is_rational() ? "Q" : "F_" + std::to_string(modulus_); }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  explicit FieldSpec(std::uint32_t p) : modulus_(p) {}
  std::uint32_t modulus_ = 0;
};

template <class K>
concept Scalar = std::regular<K> && requires(const K a, const K b) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { a / b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.to_string() } -> std::convertible_to<std::string>;
};

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool accepts(const FieldSpec& f) { return f.is_rational(); }
  static Rational from_rational(const Rational& q, const FieldSpec&) { return q; }
};

template <>
struct ScalarTraits<Fp> {
  static bool accepts(const FieldSpec& f) { return !f.is_rational(); }
  static Fp from_rational(const Rational& q, const FieldSpec& f) {
    const std::uint32_t p = f.modulus();
    mpz_class num = q.value().get_num() % p;
    mpz_class den = q.value().get_den() % p;
    if (den == 0) throw PreconditionError("denominator vanishes in " + f.name());
    return Fp(num.get_si(), p) / Fp(den.get_si(), p);
  }
};

}  // namespace wps
