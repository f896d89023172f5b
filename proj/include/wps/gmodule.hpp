#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wps/free_module.hpp"
#include "wps/groebner.hpp"
#include "wps/linalg.hpp"

namespace wps {

/// A finitely presented graded module cover / span(relations).
///
/// Immutable. The Gröbner basis of the relations is computed on first use
/// and shared between copies.
template <Scalar K>
class Presentation {
 public:
  Presentation(FreeModule cover, std::vector<Column<K>> relations)
      : cover_(std::move(cover)), order_(cover_.degrees()), cache_(std::make_shared<Cache>()) {
    for (auto& r : relations) {
      if (r.is_zero()) continue;
      assert(column::is_homogeneous(order_, r));
      relations_.push_back(std::move(r));
    }
  }

  static Presentation free(const WeightedRing& ring, std::vector<int> degrees) {
    return Presentation(FreeModule(ring, std::move(degrees)), {});
  }
  static Presentation zero(const WeightedRing& ring) { return free(ring, {}); }

  const WeightedRing& ring() const { return cover_.ring(); }
  const FreeModule& cover() const { return cover_; }
  const ModuleOrder& order() const { return order_; }
  const std::vector<Column<K>>& relations() const { return relations_; }
  std::size_t num_generators() const { return cover_.rank(); }
  int generator_degree(std::size_t i) const { return cover_.degree(i); }
  std::vector<int> relation_degrees() const {
    std::vector<int> d;
    for (const auto& r : relations_) d.push_back(r.degree(order_));
    return d;
  }

  const GroebnerBasis<K>& relation_basis() const {
    std::call_once(cache_->once, [&] { cache_->gb.emplace(ring(), order_, std::span<const Column<K>>(relations_)); });
    return *cache_->gb;
  }
  Column<K> normal_form(const Column<K>& v) const { return relation_basis().normal_form(v); }
  bool is_zero_element(const Column<K>& v) const { return normal_form(v).is_zero(); }

  /// True when every generator is killed by the relations.
  bool is_zero_module() const {
    for (std::uint32_t i = 0; i < num_generators(); ++i)
      if (!is_zero_element(column::unit<K>(i))) return false;
    return true;
  }

 private:
  struct Cache {
    std::once_flag once;
    std::optional<GroebnerBasis<K>> gb;
  };

  FreeModule cover_;
  ModuleOrder order_;
  std::vector<Column<K>> relations_;
  std::shared_ptr<Cache> cache_;
};

/// Validated construction from polynomial relation columns (one entry per
/// generator).
template <Scalar K>
Presentation<K> present(const FreeModule& cover, const std::vector<std::vector<Polynomial<K>>>& relations) {
  const ModuleOrder order(cover.degrees());
  std::vector<Column<K>> cols;
  for (std::size_t j = 0; j < relations.size(); ++j) {
    const auto& rel = relations[j];
    if (rel.size() != cover.rank())
      throw PreconditionError("relation column " + std::to_string(j) + " has " + std::to_string(rel.size()) +
                              " entries, expected " + std::to_string(cover.rank()));
    std::optional<int> degree;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      if (!(rel[i].ring() == cover.ring())) throw RingMismatch("present");
      for (const auto& [m, c] : rel[i].terms()) {
        const int d = m.degree() + cover.degree(i);
        if (!degree) degree = d;
        if (*degree != d) throw InhomogeneousRelation(j, "x" + std::to_string(i) + ": " + to_string(rel[i]));
      }
    }
    cols.push_back(column::from_entries<K>(order, rel));
  }
  return Presentation<K>(cover, std::move(cols));
}

/// A degree-0 homomorphism between presented modules, given by the images
/// of the source generators in the target cover.
template <Scalar K>
class GradedMap {
 public:
  /// Validates degrees and that source relations land in the target relations.
  GradedMap(Presentation<K> source, Presentation<K> target, std::vector<Column<K>> images)
      : GradedMap(std::move(source), std::move(target), std::move(images), true) {}

  static GradedMap unchecked(Presentation<K> source, Presentation<K> target, std::vector<Column<K>> images) {
    return GradedMap(std::move(source), std::move(target), std::move(images), false);
  }

  const Presentation<K>& source() const { return source_; }
  const Presentation<K>& target() const { return target_; }
  const std::vector<Column<K>>& images() const { return images_; }

  /// Image of a source-cover column, as a target-cover column.
  Column<K> apply(const Column<K>& v) const {
    return column::substitute(target_.order(), v, std::span<const Column<K>>(images_));
  }

 private:
  GradedMap(Presentation<K> source, Presentation<K> target, std::vector<Column<K>> images, bool check)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (!(source_.ring() == target_.ring())) throw RingMismatch("graded map");
    if (images_.size() != source_.num_generators()) throw PreconditionError("graded map: wrong number of images");
    for (std::size_t j = 0; j < images_.size(); ++j) {
      const auto& v = images_[j];
      if (v.is_zero()) continue;
      if (!column::is_homogeneous(target_.order(), v) || v.degree(target_.order()) != source_.generator_degree(j))
        throw PreconditionError("graded map: image of generator " + std::to_string(j) + " is not of degree " +
                                std::to_string(source_.generator_degree(j)));
    }
    if (!check) return;
    for (std::size_t r = 0; r < source_.relations().size(); ++r)
      if (!target_.is_zero_element(apply(source_.relations()[r])))
        throw PreconditionError("graded map: relation " + std::to_string(r) + " does not map to zero");
  }

  Presentation<K> source_;
  Presentation<K> target_;
  std::vector<Column<K>> images_;
};

template <Scalar K>
GradedMap<K> identity_map(const Presentation<K>& M) {
  std::vector<Column<K>> im;
  for (std::uint32_t i = 0; i < M.num_generators(); ++i) im.push_back(column::unit<K>(i));
  return GradedMap<K>::unchecked(M, M, std::move(im));
}

template <Scalar K>
GradedMap<K> zero_map(const Presentation<K>& M, const Presentation<K>& N) {
  return GradedMap<K>::unchecked(M, N, std::vector<Column<K>>(M.num_generators()));
}

/// g ∘ f.
template <Scalar K>
GradedMap<K> compose(const GradedMap<K>& g, const GradedMap<K>& f) {
  std::vector<Column<K>> im;
  for (const auto& v : f.images()) im.push_back(g.apply(v));
  return GradedMap<K>::unchecked(f.source(), g.target(), std::move(im));
}

// ---------------------------------------------------------------------------
// Degreewise linear algebra

/// A basis of the K-vector space M_d, computed by row reduction of the
/// relation multiples landing in degree d. Independent of the Gröbner
/// engine; it is the reference every other computation is checked against.
template <Scalar K>
class ComponentBasis {
 public:
  ComponentBasis(const Presentation<K>& M, int d) : degree_(d), echelon_(0) {
    const WeightedRing& ring = M.ring();
    for (std::uint32_t c = 0; c < M.num_generators(); ++c)
      for (const auto& m : ring.basis(d - M.generator_degree(c))) {
        index_.emplace(key(m, c), coords_.size());
        coords_.push_back({m, c, K(1)});
      }
    echelon_ = RowEchelon<K>(coords_.size());
    const ModuleOrder& order = M.order();
    for (const auto& rel : M.relations()) {
      const int e = rel.degree(order);
      for (const auto& m : ring.basis(d - e)) echelon_.insert(dense(column::monomial_times(rel, K(1), m)));
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (!echelon_.is_pivot(i)) {
        free_.push_back(i);
        Column<K> v;
        v.terms.push_back(coords_[i]);
        basis_.push_back(std::move(v));
      }
  }

  int degree() const { return degree_; }
  std::size_t dimension() const { return basis_.size(); }
  /// Representatives (single terms monomial * e_c) of a basis of M_d.
  const std::vector<Column<K>>& basis() const { return basis_; }
  /// Dimension of (cover)_d.
  std::size_t ambient_dimension() const { return coords_.size(); }

  /// Coordinates of the class of v (a degree-d cover column) in basis().
  std::vector<K> coordinates(const Column<K>& v) const {
    std::vector<K> x = dense(v);
    echelon_.reduce(x);
    std::vector<K> out;
    for (auto i : free_) out.push_back(x[i]);
    return out;
  }
  /// True when v lies in the span of the relations (v = 0 in M).
  bool is_zero(const Column<K>& v) const { return echelon_.contains(dense(v)); }

 private:
  struct Key {
    Monomial m;
    std::uint32_t c;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.m.hash() * 31 + k.c; }
  };
  static Key key(const Monomial& m, std::uint32_t c) { return {m, c}; }

  std::vector<K> dense(const Column<K>& v) const {
    std::vector<K> x(coords_.size(), K(0));
    for (const auto& t : v.terms) {
      auto it = index_.find(key(t.mono, t.comp));
      if (it == index_.end()) throw PreconditionError("component_basis: column not of degree " + std::to_string(degree_));
      x[it->second] = x[it->second] + t.coef;
    }
    return x;
  }

  int degree_;
  std::vector<ColumnTerm<K>> coords_;
  std::unordered_map<Key, std::size_t, KeyHash> index_;
  RowEchelon<K> echelon_;
  std::vector<std::size_t> free_;
  std::vector<Column<K>> basis_;
};

template <Scalar K>
ComponentBasis<K> component_basis(const Presentation<K>& M, int d) {
  return ComponentBasis<K>(M, d);
}

/// Standard monomials of degree d with respect to the relation Gröbner
/// basis: monomial * e_c not divisible by a leading term on component c.
/// Their classes form a basis of M_d.
template <Scalar K>
std::vector<Column<K>> standard_basis(const Presentation<K>& M, int d) {
  const auto& gb = M.relation_basis();
  std::vector<Column<K>> out;
  for (std::uint32_t c = 0; c < M.num_generators(); ++c) {
    const auto leads = gb.leads_on(c);
    for (const auto& m : M.ring().basis(d - M.generator_degree(c))) {
      bool divisible = false;
      for (const auto& l : leads)
        if (l.divides(m)) {
          divisible = true;
          break;
        }
      if (divisible) continue;
      Column<K> v;
      v.terms.push_back({m, c, K(1)});
      out.push_back(std::move(v));
    }
  }
  return out;
}

/// dim_K M_d, counted from the standard monomials of the relation Gröbner basis.
template <Scalar K>
std::size_t hilbert_function(const Presentation<K>& M, int d) {
  const auto& gb = M.relation_basis();
  std::size_t count = 0;
  for (std::uint32_t c = 0; c < M.num_generators(); ++c) {
    const auto leads = gb.leads_on(c);
    for (const auto& m : M.ring().basis(d - M.generator_degree(c))) {
      bool divisible = false;
      for (const auto& l : leads)
        if (l.divides(m)) {
          divisible = true;
          break;
        }
      if (!divisible) ++count;
    }
  }
  return count;
}

/// Numerator of the Hilbert series of A/L for the monomial ideal L, as
/// degree -> coefficient; the denominator is prod (1 - t^{d_i}).
inline std::map<int, long> monomial_hilbert_numerator(const WeightedRing& ring, std::vector<Monomial> gens) {
  std::vector<Monomial> min;
  std::sort(gens.begin(), gens.end(), [](const Monomial& a, const Monomial& b) { return a.degree() < b.degree(); });
  for (const auto& g : gens) {
    bool redundant = false;
    for (const auto& m : min)
      if (m.divides(g)) {
        redundant = true;
        break;
      }
    if (!redundant) min.push_back(g);
  }
  std::map<int, long> out;
  bool coprime = true;
  for (std::size_t i = 0; i < min.size() && coprime; ++i)
    for (std::size_t j = i + 1; j < min.size() && coprime; ++j) coprime = ring.coprime(min[i], min[j]);
  if (coprime) {
    out[0] = 1;
    for (const auto& g : min) {
      std::map<int, long> next = out;
      for (const auto& [d, c] : out) next[d + g.degree()] -= c;
      out = std::move(next);
    }
  } else {
    // N(L + (m)) = N(L) - t^deg(m) N(L : m).
    const Monomial m = min.back();
    min.pop_back();
    std::vector<Monomial> colon;
    for (const auto& g : min) colon.push_back(ring.lcm(g, m) / m);
    out = monomial_hilbert_numerator(ring, min);
    for (const auto& [d, c] : monomial_hilbert_numerator(ring, std::move(colon))) out[d + m.degree()] -= c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// Numerator of the Hilbert series of M over prod (1 - t^{d_i}).
template <Scalar K>
std::map<int, long> hilbert_numerator(const Presentation<K>& M) {
  const auto& gb = M.relation_basis();
  std::map<int, long> out;
  for (std::uint32_t c = 0; c < M.num_generators(); ++c)
    for (const auto& [d, k] : monomial_hilbert_numerator(M.ring(), gb.leads_on(c))) out[d + M.generator_degree(c)] += k;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

template <Scalar K>
std::vector<std::size_t> hilbert_window(const Presentation<K>& M, int lo, int hi) {
  std::vector<std::size_t> out;
  for (int d = lo; d <= hi; ++d) out.push_back(hilbert_function(M, d));
  return out;
}

// ---------------------------------------------------------------------------
// Presentation-level constructions

/// M[k]: every generator degree shifted by -k, so M[k]_d = M_{d+k}.
template <Scalar K>
Presentation<K> twist(const Presentation<K>& M, int k) {
  std::vector<int> deg = M.cover().degrees();
  for (auto& g : deg) g -= k;
  return Presentation<K>(FreeModule(M.ring(), std::move(deg)), M.relations());
}

/// The module A[k].
template <Scalar K>
Presentation<K> shifted_ring(const WeightedRing& ring, int k) {
  return Presentation<K>::free(ring, {-k});
}

template <Scalar K>
struct DirectSum {
  Presentation<K> sum;
  GradedMap<K> inject_first, inject_second;
  GradedMap<K> project_first, project_second;
};

template <Scalar K>
DirectSum<K> direct_sum(const Presentation<K>& M, const Presentation<K>& N) {
  if (!(M.ring() == N.ring())) throw RingMismatch("direct_sum");
  const auto r = static_cast<std::uint32_t>(M.num_generators());
  const auto s = static_cast<std::uint32_t>(N.num_generators());
  std::vector<int> deg = M.cover().degrees();
  deg.insert(deg.end(), N.cover().degrees().begin(), N.cover().degrees().end());
  const ModuleOrder order(deg);
  std::vector<std::uint32_t> shift_first(r), shift_second(s);
  for (std::uint32_t i = 0; i < r; ++i) shift_first[i] = i;
  for (std::uint32_t i = 0; i < s; ++i) shift_second[i] = r + i;
  std::vector<Column<K>> rels;
  for (const auto& v : M.relations()) rels.push_back(column::remap<K>(order, v, shift_first));
  for (const auto& v : N.relations()) rels.push_back(column::remap<K>(order, v, shift_second));
  Presentation<K> S(FreeModule(M.ring(), deg), std::move(rels));

  std::vector<Column<K>> i1, i2, p1, p2;
  for (std::uint32_t i = 0; i < r; ++i) i1.push_back(column::unit<K>(i));
  for (std::uint32_t i = 0; i < s; ++i) i2.push_back(column::unit<K>(r + i));
  for (std::uint32_t i = 0; i < r + s; ++i) {
    p1.push_back(i < r ? column::unit<K>(i) : Column<K>{});
    p2.push_back(i < r ? Column<K>{} : column::unit<K>(i - r));
  }
  return DirectSum<K>{S, GradedMap<K>::unchecked(M, S, std::move(i1)), GradedMap<K>::unchecked(N, S, std::move(i2)),
                      GradedMap<K>::unchecked(S, M, std::move(p1)), GradedMap<K>::unchecked(S, N, std::move(p2))};
}

/// M ⊗_A N: generators e_i ⊗ f_j (index i*s + j), relations rel(M) ⊗ f_j
/// and e_i ⊗ rel(N).
template <Scalar K>
Presentation<K> tensor_presentation(const Presentation<K>& M, const Presentation<K>& N) {
  if (!(M.ring() == N.ring())) throw RingMismatch("tensor_presentation");
  const auto r = static_cast<std::uint32_t>(M.num_generators());
  const auto s = static_cast<std::uint32_t>(N.num_generators());
  std::vector<int> deg;
  for (std::uint32_t i = 0; i < r; ++i)
    for (std::uint32_t j = 0; j < s; ++j) deg.push_back(M.generator_degree(i) + N.generator_degree(j));
  const ModuleOrder order(deg);
  std::vector<Column<K>> rels;
  std::vector<std::uint32_t> map;
  for (const auto& rel : M.relations())
    for (std::uint32_t j = 0; j < s; ++j) {
      map.assign(r, 0);
      for (std::uint32_t i = 0; i < r; ++i) map[i] = i * s + j;
      rels.push_back(column::remap<K>(order, rel, map));
    }
  for (std::uint32_t i = 0; i < r; ++i)
    for (const auto& rel : N.relations()) {
      map.assign(s, 0);
      for (std::uint32_t j = 0; j < s; ++j) map[j] = i * s + j;
      rels.push_back(column::remap<K>(order, rel, map));
    }
  return Presentation<K>(FreeModule(M.ring(), std::move(deg)), std::move(rels));
}

/// φ ⊗ ψ : M ⊗ N -> M' ⊗ N'.
template <Scalar K>
GradedMap<K> tensor_map(const GradedMap<K>& phi, const GradedMap<K>& psi) {
  Presentation<K> src = tensor_presentation(phi.source(), psi.source());
  Presentation<K> tgt = tensor_presentation(phi.target(), psi.target());
  const auto s2 = static_cast<std::uint32_t>(psi.target().num_generators());
  std::vector<Column<K>> im;
  for (const auto& a : phi.images())
    for (const auto& b : psi.images()) {
      std::vector<ColumnTerm<K>> t;
      for (const auto& x : a.terms)
        for (const auto& y : b.terms) t.push_back({x.mono * y.mono, x.comp * s2 + y.comp, x.coef * y.coef});
      im.push_back(column::from_terms(tgt.order(), std::move(t)));
    }
  return GradedMap<K>::unchecked(std::move(src), std::move(tgt), std::move(im));
}

/// Multisets of size n over {0..r-1}, as non-decreasing index tuples in
/// lexicographic order.
inline std::vector<std::vector<std::uint32_t>> multisets(std::uint32_t r, std::uint32_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  if (n == 0) return {{}};
  if (r == 0) return out;
  std::vector<std::uint32_t> cur(n, 0);
  while (true) {
    out.push_back(cur);
    std::size_t k = n;
    while (k > 0 && cur[k - 1] == r - 1) --k;
    if (k == 0) break;
    const std::uint32_t v = cur[k - 1] + 1;
    for (std::size_t i = k - 1; i < n; ++i) cur[i] = v;
  }
  return out;
}

namespace detail {

struct MultisetIndex {
  std::vector<std::vector<std::uint32_t>> sets;
  std::map<std::vector<std::uint32_t>, std::uint32_t> index;

  MultisetIndex(std::uint32_t r, std::uint32_t n) : sets(multisets(r, n)) {
    for (std::uint32_t i = 0; i < sets.size(); ++i) index.emplace(sets[i], i);
  }
  std::uint32_t find(std::vector<std::uint32_t> s) const {
    std::sort(s.begin(), s.end());
    return index.at(s);
  }
};

}  // namespace detail

/// S^n(M) presented as S^n(F0) / (N · S^{n-1}(F0)).
template <Scalar K>
Presentation<K> sym_presentation(const Presentation<K>& M, std::uint32_t n) {
  const WeightedRing& ring = M.ring();
  if (n == 0) return Presentation<K>::free(ring, {0});
  const auto r = static_cast<std::uint32_t>(M.num_generators());
  detail::MultisetIndex top(r, n);
  std::vector<int> deg;
  for (const auto& S : top.sets) {
    int d = 0;
    for (auto i : S) d += M.generator_degree(i);
    deg.push_back(d);
  }
  const ModuleOrder order(deg);
  std::vector<Column<K>> rels;
  const auto lower = multisets(r, n - 1);
  for (const auto& rel : M.relations())
    for (const auto& S : lower) {
      std::vector<ColumnTerm<K>> t;
      for (const auto& x : rel.terms) {
        std::vector<std::uint32_t> T = S;
        T.push_back(x.comp);
        t.push_back({x.mono, top.find(std::move(T)), x.coef});
      }
      rels.push_back(column::from_terms(order, std::move(t)));
    }
  return Presentation<K>(FreeModule(ring, std::move(deg)), std::move(rels));
}

/// S^n(φ) : S^n(M) -> S^n(M').
template <Scalar K>
GradedMap<K> sym_map(const GradedMap<K>& phi, std::uint32_t n) {
  Presentation<K> src = sym_presentation(phi.source(), n);
  Presentation<K> tgt = sym_presentation(phi.target(), n);
  if (n == 0) return GradedMap<K>::unchecked(src, tgt, {column::unit<K>(0)});
  const auto r = static_cast<std::uint32_t>(phi.target().num_generators());
  const auto src_sets = multisets(static_cast<std::uint32_t>(phi.source().num_generators()), n);
  detail::MultisetIndex top(r, n);
  std::vector<Column<K>> im;
  for (const auto& S : src_sets) {
    // Expand the product of the images as (monomial, multiset) terms.
    std::vector<std::pair<std::vector<std::uint32_t>, ColumnTerm<K>>> acc{{{}, {Monomial(), 0, K(1)}}};
    for (auto i : S) {
      std::vector<std::pair<std::vector<std::uint32_t>, ColumnTerm<K>>> next;
      for (const auto& [set, term] : acc)
        for (const auto& x : phi.images()[i].terms) {
          auto T = set;
          T.push_back(x.comp);
          next.push_back({std::move(T), {term.mono * x.mono, 0, term.coef * x.coef}});
        }
      acc = std::move(next);
    }
    std::vector<ColumnTerm<K>> t;
    for (auto& [set, term] : acc) t.push_back({term.mono, top.find(set), term.coef});
    im.push_back(column::from_terms(tgt.order(), std::move(t)));
  }
  return GradedMap<K>::unchecked(std::move(src), std::move(tgt), std::move(im));
}

/// The multiplication S^p(M) ⊗ S^q(M) -> S^{p+q}(M).
template <Scalar K>
GradedMap<K> sym_multiplication(const Presentation<K>& M, std::uint32_t p, std::uint32_t q) {
  Presentation<K> sp = sym_presentation(M, p);
  Presentation<K> sq = sym_presentation(M, q);
  Presentation<K> src = tensor_presentation(sp, sq);
  Presentation<K> tgt = sym_presentation(M, p + q);
  const auto r = static_cast<std::uint32_t>(M.num_generators());
  const auto P = multisets(r, p), Q = multisets(r, q);
  detail::MultisetIndex top(r, p + q);
  std::vector<Column<K>> im;
  for (const auto& a : P)
    for (const auto& b : Q) {
      auto T = a;
      T.insert(T.end(), b.begin(), b.end());
      im.push_back(column::unit<K>(top.find(std::move(T))));
    }
  return GradedMap<K>::unchecked(std::move(src), std::move(tgt), std::move(im));
}

}  // namespace wps
