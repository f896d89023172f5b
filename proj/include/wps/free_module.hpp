#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wps/ring.hpp"

namespace wps {

/// The graded free module ⊕ A[-g_i], generator e_i sitting in degree g_i.
///
/// Shift convention: A[k] has its generator in degree -k, so that
/// A[k]_m = A_{k+m}.
class FreeModule {
 public:
  FreeModule(WeightedRing ring, std::vector<int> degrees) : ring_(std::move(ring)), degrees_(std::move(degrees)) {}

  const WeightedRing& ring() const { return ring_; }
  const std::vector<int>& degrees() const { return degrees_; }
  std::size_t rank() const { return degrees_.size(); }
  int degree(std::size_t i) const { return degrees_[i]; }

  friend bool operator==(const FreeModule& a, const FreeModule& b) {
    return a.ring_ == b.ring_ && a.degrees_ == b.degrees_;
  }

 private:
  WeightedRing ring_;
  std::vector<int> degrees_;
};

/// Term order on monomial * e_i.
///
/// Compares total degree, then block (block 0 beats block 1, giving an
/// elimination order for the lower blocks), then the weighted degrevlex
/// order on the monomial, then position (lower index is larger).
/// Degree-compatible, so homogeneous inputs can be processed degree by
/// degree.
class ModuleOrder {
 public:
  ModuleOrder() = default;
  explicit ModuleOrder(std::vector<int> degrees, std::vector<int> blocks = {})
      : degrees_(std::move(degrees)), blocks_(std::move(blocks)) {
    if (blocks_.empty()) blocks_.assign(degrees_.size(), 0);
    assert(blocks_.size() == degrees_.size());
  }

  std::size_t rank() const { return degrees_.size(); }
  int generator_degree(std::uint32_t comp) const { return degrees_[comp]; }
  int block(std::uint32_t comp) const { return blocks_[comp]; }
  const std::vector<int>& degrees() const { return degrees_; }

  int compare(const Monomial& a, std::uint32_t ca, const Monomial& b, std::uint32_t cb) const {
    const int da = a.degree() + degrees_[ca];
    const int db = b.degree() + degrees_[cb];
    if (da != db) return da > db ? 1 : -1;
    if (blocks_[ca] != blocks_[cb]) return blocks_[ca] < blocks_[cb] ? 1 : -1;
    if (int c = wps::compare(a, b)) return c;
    if (ca != cb) return ca < cb ? 1 : -1;
    return 0;
  }

 private:
  std::vector<int> degrees_;
  std::vector<int> blocks_;
};

template <Scalar K>
struct ColumnTerm {
  Monomial mono;
  std::uint32_t comp = 0;
  K coef;

  friend bool operator==(const ColumnTerm&, const ColumnTerm&) = default;
};

/// An element of a graded free module, stored as terms in strictly
/// descending module order. Columns handed around the library are always
/// homogeneous.
template <Scalar K>
struct Column {
  std::vector<ColumnTerm<K>> terms;

  bool is_zero() const { return terms.empty(); }
  const ColumnTerm<K>& lead() const { return terms.front(); }
  std::size_t size() const { return terms.size(); }
  /// Total degree of a nonzero column in the given module.
  int degree(const ModuleOrder& order) const { return lead().mono.degree() + order.generator_degree(lead().comp); }

  friend bool operator==(const Column&, const Column&) = default;
};

namespace column {

/// Builds a normalized column from arbitrary terms (sorted, merged, zeros dropped).
template <Scalar K>
Column<K> from_terms(const ModuleOrder& order, std::vector<ColumnTerm<K>> terms) {
  std::sort(terms.begin(), terms.end(), [&](const ColumnTerm<K>& a, const ColumnTerm<K>& b) {
    return order.compare(a.mono, a.comp, b.mono, b.comp) > 0;
  });
  Column<K> out;
  out.terms.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.terms.empty() && out.terms.back().comp == t.comp && out.terms.back().mono == t.mono) {
      out.terms.back().coef = out.terms.back().coef + t.coef;
      if (out.terms.back().coef.is_zero()) out.terms.pop_back();
    } else if (!t.coef.is_zero()) {
      out.terms.push_back(std::move(t));
    }
  }
  return out;
}

template <Scalar K>
Column<K> unit(std::uint32_t comp, K c = K(1)) {
  Column<K> v;
  v.terms.push_back({Monomial(), comp, std::move(c)});
  return v;
}

template <Scalar K>
Column<K> monomial_times(const Column<K>& v, const K& c, const Monomial& m) {
  Column<K> r;
  if (c.is_zero()) return r;
  r.terms.reserve(v.terms.size());
  for (const auto& t : v.terms) r.terms.push_back({t.mono * m, t.comp, c * t.coef});
  return r;
}

template <Scalar K>
Column<K> scaled(const Column<K>& v, const K& c) {
  return monomial_times(v, c, Monomial());
}

/// a[start..] + c * m * b, merged under the order.
template <Scalar K>
Column<K> axpy(const ModuleOrder& order, const Column<K>& a, std::size_t start, const K& c, const Monomial& m,
               const Column<K>& b) {
  Column<K> r;
  if (c.is_zero()) {
    r.terms.assign(a.terms.begin() + static_cast<std::ptrdiff_t>(start), a.terms.end());
    return r;
  }
  r.terms.reserve(a.terms.size() - start + b.terms.size());
  std::size_t i = start, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size()) {
      r.terms.push_back(a.terms[i++]);
      continue;
    }
    const Monomial bm = b.terms[j].mono * m;
    if (i == a.terms.size()) {
      r.terms.push_back({bm, b.terms[j].comp, c * b.terms[j].coef});
      ++j;
      continue;
    }
    int cmp = order.compare(a.terms[i].mono, a.terms[i].comp, bm, b.terms[j].comp);
    if (cmp > 0) {
      r.terms.push_back(a.terms[i++]);
    } else if (cmp < 0) {
      r.terms.push_back({bm, b.terms[j].comp, c * b.terms[j].coef});
      ++j;
    } else {
      K s = a.terms[i].coef + c * b.terms[j].coef;
      if (!s.is_zero()) r.terms.push_back({bm, b.terms[j].comp, std::move(s)});
      ++i;
      ++j;
    }
  }
  return r;
}

template <Scalar K>
Column<K> add(const ModuleOrder& order, const Column<K>& a, const Column<K>& b) {
  return axpy(order, a, 0, K(1), Monomial(), b);
}

template <Scalar K>
Column<K> sub(const ModuleOrder& order, const Column<K>& a, const Column<K>& b) {
  return axpy(order, a, 0, K(-1), Monomial(), b);
}

template <Scalar K>
bool is_homogeneous(const ModuleOrder& order, const Column<K>& v) {
  if (v.is_zero()) return true;
  const int d = v.degree(order);
  for (const auto& t : v.terms)
    if (t.mono.degree() + order.generator_degree(t.comp) != d) return false;
  return true;
}

/// Reindexes components through `map` (old comp -> new comp) and re-sorts.
template <Scalar K>
Column<K> remap(const ModuleOrder& target, const Column<K>& v, std::span<const std::uint32_t> map) {
  std::vector<ColumnTerm<K>> t = v.terms;
  for (auto& x : t) x.comp = map[x.comp];
  return from_terms(target, std::move(t));
}

/// Keeps only components in [lo, hi) and shifts them down by lo.
template <Scalar K>
Column<K> slice(const ModuleOrder& target, const Column<K>& v, std::uint32_t lo, std::uint32_t hi) {
  std::vector<ColumnTerm<K>> t;
  for (const auto& x : v.terms)
    if (x.comp >= lo && x.comp < hi) t.push_back({x.mono, x.comp - lo, x.coef});
  return from_terms(target, std::move(t));
}

/// Extracts the polynomial entry of v at component comp.
template <Scalar K>
Polynomial<K> entry(const WeightedRing& ring, const Column<K>& v, std::uint32_t comp) {
  std::vector<typename Polynomial<K>::Term> t;
  for (const auto& x : v.terms)
    if (x.comp == comp) t.emplace_back(x.mono, x.coef);
  return Polynomial<K>(ring, std::move(t));
}

/// Builds a column from one polynomial per component.
template <Scalar K>
Column<K> from_entries(const ModuleOrder& order, std::span<const Polynomial<K>> entries) {
  std::vector<ColumnTerm<K>> t;
  for (std::uint32_t i = 0; i < entries.size(); ++i)
    for (const auto& [m, c] : entries[i].terms()) t.push_back({m, i, c});
  return from_terms(order, std::move(t));
}

/// Sum over terms of v of coef * mono * images[comp]; the images live in `target`.
template <Scalar K>
Column<K> substitute(const ModuleOrder& target, const Column<K>& v, std::span<const Column<K>> images) {
  std::vector<ColumnTerm<K>> acc;
  for (const auto& t : v.terms)
    for (const auto& s : images[t.comp].terms) acc.push_back({s.mono * t.mono, s.comp, t.coef * s.coef});
  return from_terms(target, std::move(acc));
}

template <Scalar K>
Column<K> make_monic(Column<K> v) {
  if (v.is_zero() || v.lead().coef == K(1)) return v;
  const K inv = K(1) / v.lead().coef;
  for (auto& t : v.terms) t.coef = t.coef * inv;
  return v;
}

}  // namespace column
}  // namespace wps
