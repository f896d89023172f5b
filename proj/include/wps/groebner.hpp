#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "wps/free_module.hpp"
#include "wps/modular.hpp"

namespace wps {

namespace detail {
struct CoefficientSwell {};

// Rational coefficients wider than this trigger the multi-modular route.
inline constexpr std::size_t kSwellBits = 96;

template <class Unused = void>
std::optional<std::vector<Column<Rational>>> modular_basis(const WeightedRing& ring, const ModuleOrder& order,
                                                           const std::vector<Column<Rational>>& gens, int through);
}  // namespace detail

/// Degree-by-degree Buchberger for homogeneous submodules of a graded free
/// module.
///
/// Inputs and S-pairs are processed in order of total degree (normal
/// strategy). Pairs are pruned with the Gebauer-Möller chain criteria; the
/// coprime-leading-term criterion is only used when the ambient module has
/// rank one, where it is valid. After complete(d) the basis is a Gröbner
/// basis in all degrees <= d.
template <Scalar K>
class GroebnerEngine {
 public:
  GroebnerEngine(WeightedRing ring, ModuleOrder order)
      : ring_(std::move(ring)), order_(std::move(order)), by_comp_(order_.rank()), ideal_case_(order_.rank() == 1) {}

  const ModuleOrder& order() const { return order_; }
  const WeightedRing& ring() const { return ring_; }
  const std::vector<Column<K>>& elements() const { return elements_; }

  void add(Column<K> v) {
    if (v.is_zero()) return;
    assert(column::is_homogeneous(order_, v));
    const int d = v.degree(order_);
    inputs_[d].push_back(std::move(v));
  }

  /// Over Q, a run whose coefficients blow up is abandoned and redone from
  /// a basis computed modulo several primes, lifted by rational
  /// reconstruction and then verified exactly (see modular_complete).
  void complete(int through = INT_MAX) {
    if constexpr (std::is_same_v<K, Rational>) {
      auto saved = inputs_;
      try {
        run(through, true);
      } catch (const detail::CoefficientSwell&) {
        ++modular_runs_;
        modular_complete(through, std::move(saved));
      }
    } else {
      run(through, false);
    }
  }

 private:
  void run(int through, bool guard) {
    guard_ = guard;
    while (true) {
      int d = INT_MAX;
      if (!inputs_.empty()) d = std::min(d, inputs_.begin()->first);
      if (!pairs_.empty()) d = std::min(d, pairs_.begin()->first);
      if (d == INT_MAX || d > through) break;

      std::vector<Column<K>> inputs;
      if (auto it = inputs_.find(d); it != inputs_.end()) {
        inputs = std::move(it->second);
        inputs_.erase(it);
      }
      std::vector<Pair> pairs;
      if (auto it = pairs_.find(d); it != pairs_.end()) {
        pairs = std::move(it->second);
        pairs_.erase(it);
      }
      for (auto& v : inputs) insert_reduced(reduce(v));
      std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (int c = wps::compare(a.lcm, b.lcm)) return c < 0;
        if (a.comp != b.comp) return a.comp < b.comp;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
      });
      for (const auto& p : pairs) insert_reduced(reduce(spoly(p)));
    }
    guard_ = false;
  }

  void reset() {
    elements_.clear();
    leads_.clear();
    for (auto& b : by_comp_) b.clear();
    inputs_.clear();
    pairs_.clear();
  }

  // Let N be generated by the current elements and the inputs of degree
  // <= through, and G the candidate lifted from the primes. If G is a
  // truncated Gröbner basis over Q with the same leads as the basis mod p,
  // and every generator of N reduces to zero by G, then for d <= through
  //   dim N_d >= dim (N mod p)_d = #leads of G in degree d = dim <G>_d >= dim N_d,
  // the first inequality because rank can only drop mod p. So <G> = N.
  void modular_complete(int through, std::map<int, std::vector<Column<K>>> saved) {
    std::vector<Column<K>> gens = elements_;
    std::map<int, std::vector<Column<K>>> later;
    for (auto& [d, v] : saved) {
      if (d <= through)
        for (auto& c : v) gens.push_back(std::move(c));
      else
        later[d] = std::move(v);
    }
    if (auto G = detail::modular_basis(ring_, order_, gens, through)) {
      reset();
      inputs_ = later;
      for (const auto& g : *G) add(g);
      run(through, false);
      bool ok = elements_.size() == G->size();
      for (std::size_t i = 0; ok && i < gens.size(); ++i) ok = reduce(gens[i]).is_zero();
      if (ok) return;
    }
    reset();
    inputs_ = std::move(later);
    for (auto& g : gens) add(std::move(g));
    run(through, false);
  }

 public:

  /// Full reduction of v; exact for deg(v) <= the completed degree.
  Column<K> reduce(const Column<K>& v) const { return reduce_by(v, nullptr); }

  /// The reduced basis: minimal leading terms, monic, tails in normal form.
  std::vector<Column<K>> reduced() const {
    std::vector<char> kept(elements_.size(), 0);
    for (std::uint32_t i = 0; i < elements_.size(); ++i) {
      kept[i] = 1;
      for (auto j : by_comp_[leads_[i].comp])
        if (j != i && leads_[j].mono.divides(leads_[i].mono)) {
          kept[i] = 0;
          break;
        }
    }
    std::vector<Column<K>> out;
    for (std::uint32_t i = 0; i < elements_.size(); ++i) {
      if (!kept[i]) continue;
      const auto& e = elements_[i];
      Column<K> tail;
      tail.terms.assign(e.terms.begin() + 1, e.terms.end());
      Column<K> r;
      r.terms.push_back(e.terms.front());
      for (auto& t : reduce_by(tail, &kept).terms) r.terms.push_back(std::move(t));
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  Column<K> reduce_by(const Column<K>& v, const std::vector<char>* allowed) const {
    Column<K> rem;
    Column<K> cur = v;
    std::size_t pos = 0;
    while (pos < cur.terms.size()) {
      const auto& t = cur.terms[pos];
      const std::ptrdiff_t idx = find_reducer(t.mono, t.comp, allowed);
      if (idx < 0) {
        rem.terms.push_back(t);
        ++pos;
        continue;
      }
      const Monomial q = t.mono / leads_[idx].mono;
      const K c = -t.coef;
      cur = column::axpy(order_, cur, pos, c, q, elements_[idx]);
      pos = 0;
    }
    return rem;
  }

 public:
  bool contains(const Column<K>& v) {
    if (v.is_zero()) return true;
    complete(v.degree(order_));
    return reduce(v).is_zero();
  }

  /// How many completions took the multi-modular route.
  int modular_runs() const { return modular_runs_; }

  /// Leading monomials of basis elements on component comp.
  std::vector<Monomial> leads_on(std::uint32_t comp) const {
    std::vector<Monomial> out;
    for (auto idx : by_comp_[comp]) out.push_back(leads_[idx].mono);
    return out;
  }

 private:
  struct Lead {
    Monomial mono;
    std::uint32_t comp;
    std::uint32_t mask;
  };
  struct Pair {
    std::uint32_t i, j, comp;
    Monomial lcm;
  };

  std::ptrdiff_t find_reducer(const Monomial& m, std::uint32_t comp, const std::vector<char>* allowed) const {
    const std::uint32_t mask = m.support_mask();
    for (auto idx : by_comp_[comp]) {
      if (allowed && !(*allowed)[idx]) continue;
      const Lead& l = leads_[idx];
      if ((l.mask & ~mask) == 0 && l.mono.divides(m)) return static_cast<std::ptrdiff_t>(idx);
    }
    return -1;
  }

  Column<K> spoly(const Pair& p) const {
    const Monomial mi = p.lcm / leads_[p.i].mono;
    const Monomial mj = p.lcm / leads_[p.j].mono;
    Column<K> a = column::monomial_times(elements_[p.i], K(1), mi);
    return column::axpy(order_, a, 0, K(-1), mj, elements_[p.j]);
  }

  int pair_degree(const Pair& p) const { return p.lcm.degree() + order_.generator_degree(p.comp); }

  void insert_reduced(Column<K> h) {
    if (h.is_zero()) return;
    h = column::make_monic(std::move(h));
    if constexpr (std::is_same_v<K, Rational>) {
      if (guard_)
        for (const auto& t : h.terms)
          if (mpz_sizeinbase(t.coef.value().get_num_mpz_t(), 2) > detail::kSwellBits ||
              mpz_sizeinbase(t.coef.value().get_den_mpz_t(), 2) > detail::kSwellBits)
            throw detail::CoefficientSwell{};
    }
    const auto t = static_cast<std::uint32_t>(elements_.size());
    const Lead lt{h.lead().mono, h.lead().comp, h.lead().mono.support_mask()};

    // Chain criterion on pairs already queued.
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      auto& vec = it->second;
      std::erase_if(vec, [&](const Pair& p) {
        return p.comp == lt.comp && lt.mono.divides(p.lcm) && !(ring_.lcm(leads_[p.i].mono, lt.mono) == p.lcm) &&
               !(ring_.lcm(leads_[p.j].mono, lt.mono) == p.lcm);
      });
      it = vec.empty() ? pairs_.erase(it) : std::next(it);
    }

    std::vector<Pair> cand;
    std::vector<bool> coprime;
    for (auto i : by_comp_[lt.comp]) {
      cand.push_back({i, t, lt.comp, ring_.lcm(leads_[i].mono, lt.mono)});
      coprime.push_back(ideal_case_ && ring_.coprime(leads_[i].mono, lt.mono));
    }
    std::vector<bool> keep(cand.size(), true);
    for (std::size_t a = 0; a < cand.size(); ++a)
      for (std::size_t b = 0; b < cand.size() && keep[a]; ++b)
        if (a != b && cand[b].lcm.divides(cand[a].lcm) && !(cand[b].lcm == cand[a].lcm)) keep[a] = false;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (!keep[a]) continue;
      bool group_coprime = coprime[a];
      for (std::size_t b = a + 1; b < cand.size(); ++b) {
        if (keep[b] && cand[b].lcm == cand[a].lcm) {
          keep[b] = false;
          group_coprime = group_coprime || coprime[b];
        }
      }
      if (group_coprime) keep[a] = false;
    }
    for (std::size_t a = 0; a < cand.size(); ++a)
      if (keep[a]) pairs_[pair_degree(cand[a])].push_back(cand[a]);

    by_comp_[lt.comp].push_back(t);
    leads_.push_back(lt);
    elements_.push_back(std::move(h));
  }

  WeightedRing ring_;
  ModuleOrder order_;
  std::vector<Column<K>> elements_;
  std::vector<Lead> leads_;
  std::vector<std::vector<std::uint32_t>> by_comp_;
  std::map<int, std::vector<Column<K>>> inputs_;
  std::map<int, std::vector<Pair>> pairs_;
  bool ideal_case_;
  bool guard_ = false;
  int modular_runs_ = 0;
};

namespace detail {

// Reduced truncated basis of <gens> over F_p for successive primes, combined
// by CRT until rational reconstruction is stable for two primes in a row.
// A prime whose leads disagree restarts the accumulation. The result is a
// candidate only; the caller verifies it.
template <class Unused>
std::optional<std::vector<Column<Rational>>> modular_basis(const WeightedRing& ring, const ModuleOrder& order,
                                                           const std::vector<Column<Rational>>& gens, int through) {
  constexpr std::size_t kMaxPrimes = 400;
  constexpr int kMaxRestarts = 4;

  std::vector<std::vector<mpz_class>> ints;
  for (const auto& g : gens) {
    mpz_class den = 1;
    for (const auto& t : g.terms) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.value().get_den_mpz_t());
    std::vector<mpz_class> row;
    for (const auto& t : g.terms) row.push_back(t.coef.value().get_num() * (den / t.coef.value().get_den()));
    ints.push_back(std::move(row));
  }

  struct Acc {
    Monomial mono;
    std::uint32_t comp;
    mpz_class res;
  };
  std::vector<std::vector<Acc>> acc;
  mpz_class modulus;
  std::optional<std::vector<Column<Rational>>> previous;
  int restarts = 0;

  auto residue = [](const Fp& c, std::uint32_t p) {
    const std::int64_t r = c.raw() % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
  };
  auto same_key = [](const Acc& a, const ColumnTerm<Fp>& b) { return a.comp == b.comp && a.mono == b.mono; };

  for (std::size_t pi = 0; pi < kMaxPrimes; ++pi) {
    const std::uint32_t p = modular::prime(pi);
    GroebnerEngine<Fp> engine(ring, order);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Column<Fp> c;
      for (std::size_t k = 0; k < gens[i].terms.size(); ++k) {
        const auto r = static_cast<long>(mpz_fdiv_ui(ints[i][k].get_mpz_t(), p));
        if (r != 0) c.terms.push_back({gens[i].terms[k].mono, gens[i].terms[k].comp, Fp(r, p)});
      }
      if (!c.is_zero()) engine.add(std::move(c));
    }
    engine.complete(through);
    auto basis = engine.reduced();
    std::sort(basis.begin(), basis.end(), [&](const Column<Fp>& a, const Column<Fp>& b) {
      return order.compare(a.lead().mono, a.lead().comp, b.lead().mono, b.lead().comp) > 0;
    });

    bool leads_match = !acc.empty() && acc.size() == basis.size();
    for (std::size_t i = 0; leads_match && i < basis.size(); ++i) leads_match = same_key(acc[i][0], basis[i].lead());
    if (!leads_match) {
      if (!acc.empty() && ++restarts > kMaxRestarts) return std::nullopt;
      acc.clear();
      previous.reset();
      for (const auto& b : basis) {
        std::vector<Acc> row;
        for (const auto& t : b.terms) row.push_back({t.mono, t.comp, mpz_class(residue(t.coef, p))});
        acc.push_back(std::move(row));
      }
      modulus = p;
      continue;
    }

    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto& old = acc[i];
      const auto& nt = basis[i].terms;
      std::vector<Acc> merged;
      std::size_t a = 0, b = 0;
      while (a < old.size() || b < nt.size()) {
        int cmp;
        if (a == old.size()) cmp = -1;
        else if (b == nt.size()) cmp = 1;
        else cmp = order.compare(old[a].mono, old[a].comp, nt[b].mono, nt[b].comp);
        if (cmp > 0) {
          merged.push_back({old[a].mono, old[a].comp, modular::crt(old[a].res, modulus, 0, p)});
          ++a;
        } else if (cmp < 0) {
          const auto r = residue(nt[b].coef, p);
          merged.push_back({nt[b].mono, nt[b].comp, modular::crt(mpz_class(0), modulus, r, p)});
          ++b;
        } else {
          const auto r = residue(nt[b].coef, p);
          merged.push_back({old[a].mono, old[a].comp, modular::crt(old[a].res, modulus, r, p)});
          ++a;
          ++b;
        }
      }
      acc[i] = std::move(merged);
    }
    modulus *= p;

    std::vector<Column<Rational>> lifted;
    bool ok = true;
    for (std::size_t i = 0; ok && i < acc.size(); ++i) {
      Column<Rational> c;
      for (const auto& t : acc[i]) {
        auto q = modular::reconstruct(t.res, modulus);
        if (!q) {
          ok = false;
          break;
        }
        if (!q->is_zero()) c.terms.push_back({t.mono, t.comp, std::move(*q)});
      }
      ok = ok && !c.is_zero() && c.lead().comp == acc[i][0].comp && c.lead().mono == acc[i][0].mono &&
           c.lead().coef.is_one();
      lifted.push_back(std::move(c));
    }
    if (!ok) {
      previous.reset();
      continue;
    }
    if (previous && *previous == lifted) return lifted;
    previous = std::move(lifted);
  }
  return std::nullopt;
}

}  // namespace detail

/// A completed Gröbner basis of a homogeneous submodule.
template <Scalar K>
class GroebnerBasis {
 public:
  GroebnerBasis(WeightedRing ring, ModuleOrder order, std::span<const Column<K>> generators)
      : engine_(std::make_shared<GroebnerEngine<K>>(std::move(ring), std::move(order))) {
    for (const auto& g : generators) engine_->add(g);
    engine_->complete();
  }

  const ModuleOrder& order() const { return engine_->order(); }
  const std::vector<Column<K>>& elements() const { return engine_->elements(); }
  std::vector<Column<K>> reduced() const { return engine_->reduced(); }
  std::size_t size() const { return engine_->elements().size(); }
  Column<K> normal_form(const Column<K>& v) const { return engine_->reduce(v); }
  bool contains(const Column<K>& v) const { return normal_form(v).is_zero(); }
  std::vector<Monomial> leads_on(std::uint32_t comp) const { return engine_->leads_on(comp); }
  int modular_runs() const { return engine_->modular_runs(); }

 private:
  std::shared_ptr<GroebnerEngine<K>> engine_;
};

template <Scalar K>
GroebnerBasis<K> module_gb(const FreeModule& ambient, std::span<const Column<K>> generators) {
  return GroebnerBasis<K>(ambient.ring(), ModuleOrder(ambient.degrees()), generators);
}

/// Remainder of v modulo G; zero iff v lies in the submodule.
template <Scalar K>
Column<K> normal_form(const Column<K>& v, const GroebnerBasis<K>& G) {
  return G.normal_form(v);
}

/// The span of columns c_1..c_s of a free module F modulo a submodule N,
/// with its relations.
///
/// Backed by a Gröbner basis of the graph {(c_i, e_i)} ∪ {(n, 0)} in F ⊕ G
/// under an order eliminating F, where G is the free module on the column
/// indices. Elements whose F-part vanishes generate { a : sum a_i c_i ∈ N };
/// reducing (v, 0) yields a witness expressing v through the c_i.
template <Scalar K>
class LinearSystem {
 public:
  LinearSystem(const WeightedRing& ring, const ModuleOrder& target, std::vector<int> source_degrees,
               std::span<const Column<K>> columns, std::span<const Column<K>> modulo = {})
      : source_(source_degrees),
        rank_(static_cast<std::uint32_t>(target.rank())),
        engine_(ring, augmented_order(target, source_degrees)) {
    assert(columns.size() == source_degrees.size());
    for (const auto& n : modulo) engine_.add(n);
    for (std::uint32_t i = 0; i < columns.size(); ++i) {
      std::vector<ColumnTerm<K>> t = columns[i].terms;
      t.push_back({Monomial(), rank_ + i, K(1)});
      engine_.add(column::from_terms(engine_.order(), std::move(t)));
    }
  }

  const ModuleOrder& source_order() const { return source_; }

  /// Generators of { a : sum a_i c_i = 0 }, as columns over the source.
  std::vector<Column<K>> syzygies() {
    engine_.complete();
    std::vector<Column<K>> out;
    const auto hi = static_cast<std::uint32_t>(rank_ + source_.rank());
    for (const auto& g : engine_.reduced())
      if (g.lead().comp >= rank_) out.push_back(column::slice(source_, g, rank_, hi));
    return out;
  }

  /// Coefficients a with sum a_i c_i = v, or nullopt when v is not in the span.
  std::optional<Column<K>> lift(const Column<K>& v) {
    if (v.is_zero()) return Column<K>{};
    engine_.complete(v.degree(engine_.order()));
    Column<K> rem = engine_.reduce(v);
    if (!rem.is_zero() && rem.lead().comp < rank_) return std::nullopt;
    const auto hi = static_cast<std::uint32_t>(rank_ + source_.rank());
    return column::scaled(column::slice(source_, rem, rank_, hi), K(-1));
  }

  bool contains(const Column<K>& v) {
    if (v.is_zero()) return true;
    engine_.complete(v.degree(engine_.order()));
    Column<K> rem = engine_.reduce(v);
    return rem.is_zero() || rem.lead().comp >= rank_;
  }

 private:
  static ModuleOrder augmented_order(const ModuleOrder& target, const std::vector<int>& source_degrees) {
    std::vector<int> deg = target.degrees();
    std::vector<int> blocks(deg.size(), 0);
    deg.insert(deg.end(), source_degrees.begin(), source_degrees.end());
    blocks.resize(deg.size(), 1);
    return ModuleOrder(std::move(deg), std::move(blocks));
  }

  ModuleOrder source_;
  std::uint32_t rank_;
  GroebnerEngine<K> engine_;
};

/// Generators of the first syzygy module of the given homogeneous columns.
/// `degrees[i]` is the degree of column i (needed when a column is zero).
template <Scalar K>
std::vector<Column<K>> syzygies(const FreeModule& ambient, std::span<const Column<K>> columns, std::vector<int> degrees) {
  LinearSystem<K> sys(ambient.ring(), ModuleOrder(ambient.degrees()), std::move(degrees), columns);
  return sys.syzygies();
}

/// Generators of { a : sum a_i c_i ∈ N }.
template <Scalar K>
std::vector<Column<K>> syzygies_modulo(const FreeModule& ambient, std::span<const Column<K>> columns,
                                       std::vector<int> degrees, std::span<const Column<K>> modulo) {
  LinearSystem<K> sys(ambient.ring(), ModuleOrder(ambient.degrees()), std::move(degrees), columns, modulo);
  return sys.syzygies();
}

template <Scalar K>
std::vector<Column<K>> syzygies(const FreeModule& ambient, std::span<const Column<K>> columns) {
  const ModuleOrder order(ambient.degrees());
  std::vector<int> degrees;
  for (const auto& c : columns) {
    if (c.is_zero()) throw PreconditionError("syzygies: zero column needs an explicit degree");
    degrees.push_back(c.degree(order));
  }
  return syzygies(ambient, columns, std::move(degrees));
}

/// True when the columns are certainly independent over A (no syzygies).
/// Over Q this is decided modulo one prime: rank can only drop mod p, so
/// independence there implies independence over Q. A false answer may,
/// with negligible probability, be an unlucky prime.
template <Scalar K>
bool columns_independent(const FreeModule& ambient, std::span<const Column<K>> columns, std::vector<int> degrees) {
  if constexpr (std::is_same_v<K, Rational>) {
    const std::uint32_t p = modular::prime(0);
    std::vector<Column<Fp>> reduced;
    for (const auto& c : columns) {
      mpz_class den = 1;
      for (const auto& t : c.terms) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.value().get_den_mpz_t());
      Column<Fp> r;
      for (const auto& t : c.terms) {
        const mpz_class v = t.coef.value().get_num() * (den / t.coef.value().get_den());
        const auto x = static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), p));
        if (x != 0) r.terms.push_back({t.mono, t.comp, Fp(x, p)});
      }
      reduced.push_back(std::move(r));
    }
    LinearSystem<Fp> sys(ambient.ring(), ModuleOrder(ambient.degrees()), std::move(degrees), reduced);
    return sys.syzygies().empty();
  } else {
    LinearSystem<K> sys(ambient.ring(), ModuleOrder(ambient.degrees()), std::move(degrees), columns);
    return sys.syzygies().empty();
  }
}

/// Indices of a minimal generating subset of `gens` modulo the submodule
/// generated by `ambient`, chosen greedily in order of degree.
template <Scalar K>
std::vector<std::size_t> minimal_generator_indices(const WeightedRing& ring, const ModuleOrder& order,
                                                   std::span<const Column<K>> gens,
                                                   std::span<const Column<K>> ambient = {}) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!gens[i].is_zero()) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return gens[a].degree(order) < gens[b].degree(order); });
  GroebnerEngine<K> engine(ring, order);
  for (const auto& a : ambient) engine.add(a);
  std::vector<std::size_t> kept;
  for (auto i : idx) {
    if (engine.contains(gens[i])) continue;
    kept.push_back(i);
    engine.add(gens[i]);
  }
  return kept;
}

}  // namespace wps
