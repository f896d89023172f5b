#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wps/error.hpp"
#include "wps/scalar.hpp"

namespace wps {

inline constexpr std::size_t kMaxVariables = 12;

/// A monomial x0^e0 ... xn^en together with its cached weighted degree.
class Monomial {
 public:
  using Exponents = std::array<std::uint16_t, kMaxVariables>;

  Monomial() = default;
  Monomial(const Exponents& e, int degree) : exp_(e), degree_(degree) {}

  std::uint16_t operator[](std::size_t i) const { return exp_[i]; }
  const Exponents& exponents() const { return exp_; }
  int degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }

  // Bit i is set when x_i occurs; a cheap necessary condition for divisibility.
  std::uint32_t support_mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < kMaxVariables; ++i)
      if (exp_[i]) m |= 1u << i;
    return m;
  }

  bool divides(const Monomial& o) const {
    if (degree_ > o.degree_) return false;
    for (std::size_t i = 0; i < kMaxVariables; ++i)
      if (exp_[i] > o.exp_[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.exp_[i] = static_cast<std::uint16_t>(a.exp_[i] + b.exp_[i]);
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }
  // Exact quotient; requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.exp_[i] = static_cast<std::uint16_t>(a.exp_[i] - b.exp_[i]);
    r.degree_ = a.degree_ - b.degree_;
    return r;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp_ == b.exp_; }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (auto e : exp_) h = (h ^ e) * 1099511628211ULL;
    return h;
  }

 private:
  Exponents exp_{};
  int degree_ = 0;
};

/// Weighted degree reverse lexicographic order. Returns >0 when a > b.
inline int compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  for (std::size_t i = kMaxVariables; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// The weighted polynomial ring A = K[x0..xn], deg(xi) = di.
///
/// A cheap shared handle; two handles compare equal when field and weights
/// agree.
class WeightedRing {
 public:
  WeightedRing(FieldSpec field, std::vector<int> weights) : impl_(std::make_shared<Impl>()) {
    if (weights.size() < 2)
      throw PreconditionError("a weighted ring needs at least two variables (saturation is not finitely generated otherwise)");
    if (weights.size() > kMaxVariables)
      throw PreconditionError("at most " + std::to_string(kMaxVariables) + " variables are supported");
    for (int w : weights)
      if (w < 1) throw PreconditionError("weights must be positive");
    impl_->field = field;
    impl_->weights = std::move(weights);
    impl_->lcm = std::accumulate(impl_->weights.begin(), impl_->weights.end(), 1,
                                 [](int a, int b) { return std::lcm(a, b); });
  }

  const FieldSpec& field() const { return impl_->field; }
  const std::vector<int>& weights() const { return impl_->weights; }
  std::size_t num_variables() const { return impl_->weights.size(); }
  int weight(std::size_t i) const { return impl_->weights[i]; }
  int lcm_weights() const { return impl_->lcm; }

  friend bool operator==(const WeightedRing& a, const WeightedRing& b) {
    return a.impl_ == b.impl_ || (a.impl_->field == b.impl_->field && a.impl_->weights == b.impl_->weights);
  }

  Monomial monomial(std::span<const int> exponents) const {
    if (exponents.size() != num_variables()) throw PreconditionError("exponent vector has wrong length");
    Monomial::Exponents e{};
    int deg = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] < 0 || exponents[i] > 60000) throw PreconditionError("exponent out of range");
      e[i] = static_cast<std::uint16_t>(exponents[i]);
      deg += exponents[i] * impl_->weights[i];
    }
    return Monomial(e, deg);
  }
  Monomial monomial(std::initializer_list<int> exponents) const {
    std::vector<int> v(exponents);
    return monomial(std::span<const int>(v));
  }
  Monomial one() const { return Monomial(); }
  Monomial variable(std::size_t i, int power = 1) const {
    Monomial::Exponents e{};
    e[i] = static_cast<std::uint16_t>(power);
    return Monomial(e, power * impl_->weights[i]);
  }

  Monomial lcm(const Monomial& a, const Monomial& b) const {
    Monomial::Exponents e{};
    int deg = 0;
    for (std::size_t i = 0; i < num_variables(); ++i) {
      e[i] = std::max(a[i], b[i]);
      deg += e[i] * impl_->weights[i];
    }
    return Monomial(e, deg);
  }
  bool coprime(const Monomial& a, const Monomial& b) const {
    for (std::size_t i = 0; i < num_variables(); ++i)
      if (a[i] && b[i]) return false;
    return true;
  }

  /// All monomials of weighted degree d, in descending canonical order.
  const std::vector<Monomial>& basis(int d) const {
    static const std::vector<Monomial> kEmpty;
    if (d < 0) return kEmpty;
    std::lock_guard<std::mutex> lock(impl_->mutex);
    auto it = impl_->basis_cache.find(d);
    if (it != impl_->basis_cache.end()) return *it->second;
    auto out = std::make_unique<std::vector<Monomial>>();
    Monomial::Exponents e{};
    enumerate(d, 0, e, *out);
    std::sort(out->begin(), out->end(), [](const Monomial& a, const Monomial& b) { return compare(a, b) > 0; });
    return *impl_->basis_cache.emplace(d, std::move(out)).first->second;
  }

 private:
  void enumerate(int remaining, std::size_t var, Monomial::Exponents& e, std::vector<Monomial>& out) const {
    const std::size_t n = num_variables();
    if (var + 1 == n) {
      if (remaining % impl_->weights[var] == 0) {
        e[var] = static_cast<std::uint16_t>(remaining / impl_->weights[var]);
        int deg = 0;
        for (std::size_t i = 0; i < n; ++i) deg += e[i] * impl_->weights[i];
        out.emplace_back(e, deg);
        e[var] = 0;
      }
      return;
    }
    for (int k = 0; k * impl_->weights[var] <= remaining; ++k) {
      e[var] = static_cast<std::uint16_t>(k);
      enumerate(remaining - k * impl_->weights[var], var + 1, e, out);
    }
    e[var] = 0;
  }

  struct Impl {
    FieldSpec field = FieldSpec::rationals();
    std::vector<int> weights;
    int lcm = 1;
    mutable std::mutex mutex;
    mutable std::map<int, std::unique_ptr<std::vector<Monomial>>> basis_cache;
  };
  std::shared_ptr<Impl> impl_;
};

/// Degreewise monomial basis of A; empty for negative degrees.
inline std::vector<Monomial> monomial_basis(const WeightedRing& ring, int d) { return ring.basis(d); }

/// Text form of a monomial, e.g. "x0^3*x1"; "1" for the constant monomial.
inline std::string monomial_to_string(const Monomial& m, std::size_t nvars) {
  std::string s;
  for (std::size_t i = 0; i < nvars; ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += '*';
    s += 'x' + std::to_string(i);
    if (m[i] > 1) s += '^' + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

template <Scalar K>
class Polynomial {
 public:
  using Term = std::pair<Monomial, K>;

  explicit Polynomial(WeightedRing ring) : ring_(std::move(ring)) {}
  Polynomial(WeightedRing ring, std::vector<Term> terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
    normalize();
  }
  static Polynomial constant(WeightedRing ring, K c) { return Polynomial(std::move(ring), {{Monomial(), std::move(c)}}); }
  static Polynomial monomial(WeightedRing ring, Monomial m, K c = K(1)) {
    return Polynomial(std::move(ring), {{m, std::move(c)}});
  }

  const WeightedRing& ring() const { return ring_; }
  /// Terms in strictly descending canonical order, no zero coefficients.
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<int> homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = terms_.front().first.degree();
    for (const auto& t : terms_)
      if (t.first.degree() != d) return std::nullopt;
    return d;
  }
  bool is_homogeneous() const { return terms_.empty() || homogeneous_degree().has_value(); }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return Polynomial(a.ring_, std::move(t));
  }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r = a;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    std::vector<Term> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) t.emplace_back(ma * mb, ca * cb);
    return Polynomial(a.ring_, std::move(t));
  }
  friend Polynomial operator*(const K& c, const Polynomial& a) {
    std::vector<Term> t = a.terms_;
    for (auto& x : t) x.second = c * x.second;
    return Polynomial(a.ring_, std::move(t));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.ring_ == b.ring_ && a.terms_ == b.terms_; }

 private:
  static void check_same(const Polynomial& a, const Polynomial& b) {
    if (!(a.ring_ == b.ring_)) throw RingMismatch("polynomial arithmetic");
  }
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return compare(a.first, b.first) > 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second = out.back().second + t.second;
        if (out.back().second.is_zero()) out.pop_back();
      } else if (!t.second.is_zero()) {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }

  WeightedRing ring_;
  std::vector<Term> terms_;
};

/// Ring multiplication in A.
template <Scalar K>
Polynomial<K> poly_product(const Polynomial<K>& f, const Polynomial<K>& g) {
  return f * g;
}

template <Scalar K>
std::string to_string(const Polynomial<K>& f) {
  if (f.is_zero()) return "0";
  std::string s;
  const std::size_t n = f.ring().num_variables();
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    bool neg = c.is_negative();
    K mag = neg ? -c : c;
    if (first) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      s += mag.to_string();
    } else {
      if (!(mag == K(1))) s += mag.to_string() + "*";
      s += monomial_to_string(m, n);
    }
  }
  return s;
}

namespace detail {

class PolyLexer {
 public:
  explicit PolyLexer(std::string_view s) : s_(s) {}
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    return s_[pos_++];
  }
  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the polynomial text grammar: a signed sum of terms
/// `coeff*x0^e0*...*xn^en`, coeff an integer or a/b.
template <Scalar K>
Polynomial<K> parse_polynomial(const WeightedRing& ring, std::string_view text) {
  detail::PolyLexer lx(text);
  std::vector<typename Polynomial<K>::Term> terms;
  if (lx.done()) lx.fail("empty polynomial");
  bool first = true;
  while (!lx.done()) {
    bool neg = false;
    char c = lx.peek();
    if (c == '+' || c == '-') {
      lx.get();
      neg = (c == '-');
    } else if (!first) {
      lx.fail("expected '+' or '-'");
    }
    first = false;
    Rational coef(1);
    std::vector<int> exps(ring.num_variables(), 0);
    bool have_factor = false;
    while (true) {
      c = lx.peek();
      if (c >= '0' && c <= '9') {
        std::string num = lx.digits();
        if (lx.peek() == '/') {
          lx.get();
          num += "/" + lx.digits();
        }
        coef *= Rational::parse(num);
      } else if (c == 'x') {
        lx.get();
        std::size_t idx = std::stoul(lx.digits());
        if (idx >= ring.num_variables()) lx.fail("variable index out of range");
        int e = 1;
        if (lx.peek() == '^') {
          lx.get();
          e = std::stoi(lx.digits());
        }
        exps[idx] += e;
      } else {
        lx.fail("expected coefficient or variable");
      }
      have_factor = true;
      if (lx.peek() == '*') {
        lx.get();
        continue;
      }
      break;
    }
    if (!have_factor) lx.fail("empty term");
    if (neg) coef = -coef;
    terms.emplace_back(ring.monomial(std::span<const int>(exps)), ScalarTraits<K>::from_rational(coef, ring.field()));
  }
  return Polynomial<K>(ring, std::move(terms));
}

}  // namespace wps
