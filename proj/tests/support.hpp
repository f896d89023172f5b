#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "wps/wps.hpp"

namespace wps::testing {

using Q = Rational;

inline WeightedRing ring_of(std::vector<int> weights) { return WeightedRing(FieldSpec::rationals(), std::move(weights)); }

inline Polynomial<Q> poly(const WeightedRing& R, const char* text) { return parse_polynomial<Q>(R, text); }

/// Module from generator degrees and relation columns written as polynomial text.
inline Presentation<Q> module_of(const WeightedRing& R, std::vector<int> degrees,
                                 const std::vector<std::vector<const char*>>& relations) {
  std::vector<std::vector<Polynomial<Q>>> rels;
  for (const auto& col : relations) {
    std::vector<Polynomial<Q>> c;
    for (const char* e : col) c.push_back(poly(R, e));
    rels.push_back(std::move(c));
  }
  return present<Q>(FreeModule(R, std::move(degrees)), rels);
}

inline Column<Q> col(const Presentation<Q>& M, const std::vector<const char*>& entries) {
  std::vector<Polynomial<Q>> c;
  for (const char* e : entries) c.push_back(poly(M.ring(), e));
  return column::from_entries<Q>(M.order(), c);
}

// ---------------------------------------------------------------------------
// Oracles. None of these touch the Gröbner engine.

/// Coefficients of prod 1/(1 - t^{d_i}) up to t^N, by direct series multiplication.
inline std::vector<long> hilbert_series(const std::vector<int>& weights, int N) {
  std::vector<long> s(N + 1, 0);
  s[0] = 1;
  for (int w : weights)
    for (int d = w; d <= N; ++d) s[d] += s[d - w];
  return s;
}

/// Dense exact rank of a list of rows.
inline std::size_t dense_rank(std::vector<std::vector<Q>> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t ncols = rows[0].size();
  for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      const Q f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < ncols; ++k) rows[r][k] = rows[r][k] - f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Coordinates of a degree-d column of F in the monomial basis of F_d.
class DenseCoordinates {
 public:
  DenseCoordinates(const WeightedRing& R, const std::vector<int>& degrees, int d) {
    for (std::uint32_t c = 0; c < degrees.size(); ++c)
      for (const auto& m : R.basis(d - degrees[c])) index_[{c, m.exponents()}] = size_++;
  }
  std::size_t size() const { return size_; }
  std::vector<Q> operator()(const Column<Q>& v) const {
    std::vector<Q> x(size_, Q(0));
    for (const auto& t : v.terms) x[index_.at({t.comp, t.mono.exponents()})] = t.coef;
    return x;
  }

 private:
  std::map<std::pair<std::uint32_t, Monomial::Exponents>, std::size_t> index_;
  std::size_t size_ = 0;
};

/// All monomial multiples of gens landing in degree d.
inline std::vector<Column<Q>> multiples_in_degree(const WeightedRing& R, const ModuleOrder& order,
                                                  const std::vector<Column<Q>>& gens, int d) {
  std::vector<Column<Q>> out;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    for (const auto& m : R.basis(d - g.degree(order))) out.push_back(column::monomial_times(g, Q(1), m));
  }
  return out;
}

/// dim of the degree-d part of the submodule spanned by gens.
inline std::size_t span_dimension(const WeightedRing& R, const std::vector<int>& degrees,
                                  const std::vector<Column<Q>>& gens, int d) {
  const ModuleOrder order(degrees);
  DenseCoordinates X(R, degrees, d);
  std::vector<std::vector<Q>> rows;
  for (const auto& v : multiples_in_degree(R, order, gens, d)) rows.push_back(X(v));
  return dense_rank(std::move(rows));
}

/// v ∈ span(gens), decided degreewise by linear algebra.
inline bool span_contains(const WeightedRing& R, const std::vector<int>& degrees, const std::vector<Column<Q>>& gens,
                          const Column<Q>& v) {
  if (v.is_zero()) return true;
  const ModuleOrder order(degrees);
  const int d = v.degree(order);
  DenseCoordinates X(R, degrees, d);
  std::vector<std::vector<Q>> rows;
  for (const auto& w : multiples_in_degree(R, order, gens, d)) rows.push_back(X(w));
  const std::size_t r = dense_rank(rows);
  rows.push_back(X(v));
  return dense_rank(std::move(rows)) == r;
}

/// dim M_d = dim F_d - dim N_d, by linear algebra on the presentation.
inline std::size_t oracle_dim(const Presentation<Q>& M, int d) {
  std::size_t ambient = 0;
  for (std::size_t c = 0; c < M.num_generators(); ++c) ambient += M.ring().basis(d - M.generator_degree(c)).size();
  return ambient - span_dimension(M.ring(), M.cover().degrees(), M.relations(), d);
}

// ---------------------------------------------------------------------------
// Random instances

class Random {
 public:
  explicit Random(unsigned seed) : gen_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  /// Random homogeneous polynomial of degree d with small integer coefficients.
  std::vector<std::pair<Monomial, Q>> terms(const WeightedRing& R, int d, int max_terms = 3) {
    std::vector<std::pair<Monomial, Q>> out;
    const auto& basis = R.basis(d);
    if (basis.empty()) return out;
    const int k = uniform(1, max_terms);
    for (int i = 0; i < k; ++i) {
      const auto& m = basis[static_cast<std::size_t>(uniform(0, static_cast<int>(basis.size()) - 1))];
      int c = uniform(-3, 3);
      if (c == 0) c = 1;
      out.emplace_back(m, Q(c));
    }
    return out;
  }

  /// Random homogeneous column of degree d in the free module with the given degrees.
  Column<Q> column(const WeightedRing& R, const std::vector<int>& degrees, int d, double density = 0.7,
                   int max_terms = 3) {
    const ModuleOrder order(degrees);
    std::vector<ColumnTerm<Q>> t;
    for (std::uint32_t c = 0; c < degrees.size(); ++c) {
      if (std::uniform_real_distribution<double>(0, 1)(gen_) > density) continue;
      for (auto& [m, q] : terms(R, d - degrees[c], max_terms)) t.push_back({m, c, q});
    }
    return column::from_terms(order, std::move(t));
  }

  /// Random presentation: up to max_gens generators in degrees [0, max_gen_deg],
  /// up to max_rels nonzero relations of degree at most max_rel_deg. Each
  /// relation entry is nonzero with probability `density` and has at most
  /// `max_terms` terms.
  Presentation<Q> presentation(const WeightedRing& R, int max_gens, int max_rels, int max_gen_deg, int max_rel_deg,
                               double density = 0.7, int max_terms = 3) {
    std::vector<int> degrees;
    const int g = uniform(1, max_gens);
    for (int i = 0; i < g; ++i) degrees.push_back(uniform(0, max_gen_deg));
    const int r = uniform(0, max_rels);
    const int lo = *std::min_element(degrees.begin(), degrees.end());
    std::vector<Column<Q>> rels;
    for (int tries = 0; static_cast<int>(rels.size()) < r && tries < 50; ++tries) {
      auto v = column(R, degrees, uniform(lo + 1, std::max(lo + 1, max_rel_deg)), density, max_terms);
      if (!v.is_zero()) rels.push_back(std::move(v));
    }
    return Presentation<Q>(FreeModule(R, degrees), std::move(rels));
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

/// True when the two modules have the same Hilbert function on [lo, hi].
inline bool same_dims(const Presentation<Q>& a, const Presentation<Q>& b, int lo, int hi) {
  for (int d = lo; d <= hi; ++d)
    if (hilbert_function(a, d) != hilbert_function(b, d)) return false;
  return true;
}

}  // namespace wps::testing
