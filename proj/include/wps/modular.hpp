#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "wps/scalar.hpp"

namespace wps::modular {

/// Primes just below 2^31, largest first, generated on demand.
inline std::uint32_t prime(std::size_t i) {
  static std::vector<std::uint32_t> cache;
  auto is_prime = [](std::uint32_t n) {
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; static_cast<std::uint64_t>(d) * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  };
  std::uint32_t next = cache.empty() ? 2147483647u : cache.back() - 2;
  while (cache.size() <= i) {
    while (!is_prime(next)) next -= 2;
    cache.push_back(next);
    next -= 2;
  }
  return cache[i];
}

/// x with x = a mod m and x = b mod p, in [0, m*p).
inline mpz_class crt(const mpz_class& a, const mpz_class& m, std::uint32_t b, std::uint32_t p) {
  const auto am = static_cast<std::int64_t>(mpz_fdiv_ui(a.get_mpz_t(), p));
  const auto mm = static_cast<std::int64_t>(mpz_fdiv_ui(m.get_mpz_t(), p));
  std::int64_t diff = (static_cast<std::int64_t>(b) - am) % p;
  if (diff < 0) diff += p;
  const std::int64_t k = diff * Fp::inverse(mm, p) % p;
  return a + m * static_cast<unsigned long>(k);
}

/// The fraction r/s with |r|, |s| <= sqrt(m/2) and r = s*a mod m, if any.
inline std::optional<Rational> reconstruct(const mpz_class& a, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = a, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (abs(t1) > bound || t1 == 0) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  return Rational(mpq_class(r1, t1));
}

}  // namespace wps::modular
