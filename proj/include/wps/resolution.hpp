#pragma once

#include <algorithm>
#include <vector>

#include "wps/gmodule.hpp"

namespace wps {

/// A submodule P of a free module modulo a submodule R ⊆ P, presented on
/// the retained generators of P. `generators[i]` is the i-th generator as a
/// column of the ambient free module.
template <Scalar K>
struct Subquotient {
  Presentation<K> module;
  std::vector<Column<K>> generators;
};

/// Presents (P + R) / R for P, R ⊆ F. Generators of P that are redundant
/// modulo R are dropped.
template <Scalar K>
Subquotient<K> subquotient(const FreeModule& ambient, std::span<const Column<K>> P, std::span<const Column<K>> R) {
  const ModuleOrder order(ambient.degrees());
  const auto keep = minimal_generator_indices<K>(ambient.ring(), order, P, R);
  // Generators are stored as normal forms modulo R, which keeps
  // coefficients from compounding through repeated constructions.
  const GroebnerBasis<K> rb(ambient.ring(), order, R);
  std::vector<Column<K>> gens;
  std::vector<int> degrees;
  for (auto i : keep) {
    degrees.push_back(P[i].degree(order));
    gens.push_back(column::make_monic(rb.normal_form(P[i])));
  }
  const ModuleOrder gen_order(degrees);
  std::vector<Column<K>> rels;
  for (auto& s : syzygies_modulo<K>(ambient, gens, degrees, R))
    if (!s.is_zero()) rels.push_back(std::move(s));
  FreeModule cover(ambient.ring(), std::move(degrees));
  // Keep only a minimal generating subset of the relations.
  const auto min_rels = minimal_generator_indices<K>(ambient.ring(), gen_order, rels);
  std::vector<Column<K>> kept;
  for (auto i : min_rels) kept.push_back(rels[i]);
  return Subquotient<K>{Presentation<K>(std::move(cover), std::move(kept)), std::move(gens)};
}

/// Columns generating { v ∈ cover(M) : φ(v) ∈ relations(N) }.
template <Scalar K>
std::vector<Column<K>> preimage_of_relations(const GradedMap<K>& phi) {
  const auto& src = phi.source();
  const auto& tgt = phi.target();
  std::vector<int> degrees;
  for (std::size_t i = 0; i < src.num_generators(); ++i) degrees.push_back(src.generator_degree(i));
  return syzygies_modulo<K>(tgt.cover(), phi.images(), std::move(degrees), tgt.relations());
}

template <Scalar K>
struct Kernel {
  Presentation<K> module;
  GradedMap<K> inclusion;
};

/// ker φ with its inclusion into the source.
template <Scalar K>
Kernel<K> kernel(const GradedMap<K>& phi) {
  const auto P = preimage_of_relations(phi);
  auto sq = subquotient<K>(phi.source().cover(), P, phi.source().relations());
  auto inc = GradedMap<K>::unchecked(sq.module, phi.source(), std::move(sq.generators));
  return Kernel<K>{std::move(sq.module), std::move(inc)};
}

/// coker φ = target cover / (target relations + images).
template <Scalar K>
Presentation<K> cokernel(const GradedMap<K>& phi) {
  std::vector<Column<K>> rels = phi.target().relations();
  for (const auto& v : phi.images())
    if (!v.is_zero()) rels.push_back(v);
  return Presentation<K>(phi.target().cover(), std::move(rels));
}

/// The image of φ, presented as a submodule of the target.
template <Scalar K>
Subquotient<K> image(const GradedMap<K>& phi) {
  std::vector<Column<K>> P;
  for (const auto& v : phi.images())
    if (!v.is_zero()) P.push_back(v);
  return subquotient<K>(phi.target().cover(), P, phi.target().relations());
}

/// A presentation with no relation carrying a unit entry, together with
/// mutually inverse maps to and from the original.
template <Scalar K>
struct Minimized {
  Presentation<K> module;
  GradedMap<K> to_min;    // original -> minimized
  GradedMap<K> from_min;  // minimized -> original
};

/// Eliminates generators that relations express through the others, then
/// keeps a minimal generating subset of the relations.
template <Scalar K>
Minimized<K> minimize(const Presentation<K>& M) {
  const WeightedRing& ring = M.ring();
  const std::uint32_t r = static_cast<std::uint32_t>(M.num_generators());
  const ModuleOrder& order = M.order();
  std::vector<Column<K>> rels = M.relations();
  std::vector<Column<K>> to_new;
  for (std::uint32_t i = 0; i < r; ++i) to_new.push_back(column::unit<K>(i));
  std::vector<bool> alive(r, true);

  std::vector<int> gen_degrees = M.cover().degrees();
  std::sort(gen_degrees.begin(), gen_degrees.end());
  gen_degrees.erase(std::unique(gen_degrees.begin(), gen_degrees.end()), gen_degrees.end());

  auto eliminate = [&](std::uint32_t p, const Column<K>& v) {
    // v has coefficient 1 at the constant term of e_p: e_p = -(v - e_p).
    Column<K> w = column::sub(order, column::unit<K>(p), v);
    std::vector<Column<K>> images;
    for (std::uint32_t i = 0; i < r; ++i) images.push_back(i == p ? w : column::unit<K>(i));
    auto sub = [&](const Column<K>& c) { return column::substitute(order, c, std::span<const Column<K>>(images)); };
    for (auto& c : rels) c = sub(c);
    for (auto& c : to_new) c = sub(c);
    alive[p] = false;
  };

  for (int g : gen_degrees) {
    // Spanning set of N_g and the constant coefficients on degree-g generators.
    std::vector<Column<K>> span;
    for (const auto& rel : rels) {
      if (rel.is_zero()) continue;
      const int e = rel.degree(order);
      if (e > g) continue;
      for (const auto& m : ring.basis(g - e)) span.push_back(column::monomial_times(rel, K(1), m));
    }
    // Sequential elimination on the constant parts.
    while (true) {
      std::ptrdiff_t pick = -1;
      std::uint32_t pos = 0;
      for (std::size_t s = 0; s < span.size() && pick < 0; ++s)
        for (const auto& t : span[s].terms)
          if (t.mono.is_one() && alive[t.comp]) {
            pick = static_cast<std::ptrdiff_t>(s);
            pos = t.comp;
            break;
          }
      if (pick < 0) break;
      Column<K> v = span[pick];
      K c(0);
      for (const auto& t : v.terms)
        if (t.mono.is_one() && t.comp == pos) c = t.coef;
      v = column::scaled(v, K(1) / c);
      eliminate(pos, v);
      std::vector<Column<K>> images;
      Column<K> w = column::sub(order, column::unit<K>(pos), v);
      for (std::uint32_t i = 0; i < r; ++i) images.push_back(i == pos ? w : column::unit<K>(i));
      std::vector<Column<K>> next;
      for (std::size_t s = 0; s < span.size(); ++s) {
        if (static_cast<std::ptrdiff_t>(s) == pick) continue;
        auto c = column::substitute(order, span[s], std::span<const Column<K>>(images));
        if (!c.is_zero()) next.push_back(std::move(c));
      }
      span = std::move(next);
    }
  }

  // Renumber the surviving generators.
  std::vector<std::uint32_t> map(r, 0);
  std::vector<int> degrees;
  std::vector<std::uint32_t> old_index;
  for (std::uint32_t i = 0; i < r; ++i)
    if (alive[i]) {
      map[i] = static_cast<std::uint32_t>(degrees.size());
      degrees.push_back(M.generator_degree(i));
      old_index.push_back(i);
    }
  const ModuleOrder new_order(degrees);
  std::vector<Column<K>> new_rels;
  for (const auto& c : rels)
    if (!c.is_zero()) new_rels.push_back(column::remap<K>(new_order, c, map));
  const auto keep = minimal_generator_indices<K>(ring, new_order, new_rels);
  std::vector<Column<K>> min_rels;
  for (auto i : keep) min_rels.push_back(new_rels[i]);
  Presentation<K> out(FreeModule(ring, degrees), std::move(min_rels));

  std::vector<Column<K>> fwd, back;
  for (const auto& c : to_new) fwd.push_back(column::remap<K>(new_order, c, map));
  for (auto i : old_index) back.push_back(column::unit<K>(i));
  return Minimized<K>{out, GradedMap<K>::unchecked(M, out, std::move(fwd)),
                      GradedMap<K>::unchecked(out, M, std::move(back))};
}

/// Koszul presentation of the irrelevant ideal m = (x_0..x_n), as the module
/// ⊕ A[-d_i] / (x_j e_i - x_i e_j).
/// The ideal (x_0^{a_0}, ..., x_n^{a_n}) with its Koszul relations.
template <Scalar K>
Presentation<K> power_ideal(const WeightedRing& ring, std::span<const int> powers) {
  const auto n = static_cast<std::uint32_t>(ring.num_variables());
  std::vector<int> deg;
  for (std::uint32_t i = 0; i < n; ++i) deg.push_back(powers[i] * ring.weight(i));
  const ModuleOrder order(deg);
  std::vector<Column<K>> rels;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      rels.push_back(column::from_terms<K>(
          order, {{ring.variable(j, powers[j]), i, K(1)}, {ring.variable(i, powers[i]), j, K(-1)}}));
  return Presentation<K>(FreeModule(ring, std::move(deg)), std::move(rels));
}

template <Scalar K>
Presentation<K> irrelevant_ideal(const WeightedRing& ring) {
  const std::vector<int> ones(ring.num_variables(), 1);
  return power_ideal<K>(ring, ones);
}

/// (N : m) inside F, as generating columns (N included).
template <Scalar K>
std::vector<Column<K>> colon_irrelevant(const FreeModule& F, std::span<const Column<K>> N) {
  const WeightedRing& ring = F.ring();
  const auto nv = static_cast<std::uint32_t>(ring.num_variables());
  const auto r = static_cast<std::uint32_t>(F.rank());
  const ModuleOrder order(F.degrees());
  // Block i of the target holds x_i * v; generator (i, j) gets degree
  // g_j - d_i so that v -> (x_0 v, ..., x_n v) is homogeneous.
  std::vector<int> tdeg;
  for (std::uint32_t i = 0; i < nv; ++i)
    for (std::uint32_t j = 0; j < r; ++j) tdeg.push_back(F.degree(j) - ring.weight(i));
  const ModuleOrder shifted(tdeg);
  std::vector<Column<K>> cols;
  std::vector<int> degrees;
  for (std::uint32_t j = 0; j < r; ++j) {
    std::vector<ColumnTerm<K>> t;
    for (std::uint32_t i = 0; i < nv; ++i) t.push_back({ring.variable(i), i * r + j, K(1)});
    cols.push_back(column::from_terms(shifted, std::move(t)));
    degrees.push_back(F.degree(j));
  }
  std::vector<Column<K>> blocks;
  for (std::uint32_t i = 0; i < nv; ++i) {
    std::vector<std::uint32_t> map(r);
    for (std::uint32_t j = 0; j < r; ++j) map[j] = i * r + j;
    for (const auto& v : N)
      if (!v.is_zero()) blocks.push_back(column::remap<K>(shifted, v, map));
  }
  std::vector<Column<K>> out = syzygies_modulo<K>(FreeModule(ring, tdeg), cols, std::move(degrees), blocks);
  const auto keep = minimal_generator_indices<K>(ring, order, out);
  std::vector<Column<K>> kept;
  for (auto i : keep) kept.push_back(out[i]);
  return kept;
}

/// (N : m^k) = ((N : m) : m) ... k times.
template <Scalar K>
std::vector<Column<K>> colon_power(const FreeModule& F, std::span<const Column<K>> N, int k) {
  if (k < 1) throw PreconditionError("colon_power: k must be positive");
  std::vector<Column<K>> cur(N.begin(), N.end());
  for (int i = 0; i < k; ++i) cur = colon_irrelevant<K>(F, cur);
  return cur;
}

/// True when the two columns sets generate the same submodule.
template <Scalar K>
bool same_submodule(const FreeModule& F, std::span<const Column<K>> a, std::span<const Column<K>> b) {
  const auto ga = module_gb<K>(F, a);
  const auto gb = module_gb<K>(F, b);
  for (const auto& v : b)
    if (!ga.contains(v)) return false;
  for (const auto& v : a)
    if (!gb.contains(v)) return false;
  return true;
}

/// F_s -> ... -> F_1 -> F_0 -> M. maps[i] lists the columns of F_{i+1} -> F_i.
template <Scalar K>
struct FreeResolution {
  std::vector<FreeModule> modules;
  std::vector<std::vector<Column<K>>> maps;

  std::size_t length() const { return maps.size(); }
  /// Largest generator degree over all F_i (the twists of the resolution).
  int max_twist() const {
    int m = INT_MIN;
    for (const auto& F : modules)
      for (int d : F.degrees()) m = std::max(m, d);
    return m;
  }
};

/// Free resolution by iterated syzygies, each stage minimally generated.
/// With `minimal`, the presentation of M is minimized first, which makes
/// the result a minimal resolution.
template <Scalar K>
FreeResolution<K> free_resolution(const Presentation<K>& M, std::size_t max_length = SIZE_MAX, bool minimal = false) {
  const Presentation<K> P = minimal ? minimize(M).module : M;
  const WeightedRing& ring = P.ring();
  FreeResolution<K> res;
  res.modules.push_back(P.cover());
  std::vector<Column<K>> cols = P.relations();
  {
    const auto keep = minimal_generator_indices<K>(ring, P.order(), cols);
    std::vector<Column<K>> kept;
    for (auto i : keep) kept.push_back(cols[i]);
    cols = std::move(kept);
  }
  const std::size_t bound = ring.num_variables();
  while (!cols.empty() && res.maps.size() < max_length) {
    if (res.maps.size() >= bound)
      throw ResolutionTooLong("free_resolution: syzygies persist past length " + std::to_string(bound));
    const ModuleOrder order(res.modules.back().degrees());
    std::vector<int> degrees;
    for (const auto& c : cols) degrees.push_back(c.degree(order));
    FreeModule next(ring, degrees);
    auto syz = syzygies<K>(res.modules.back(), cols, degrees);
    res.maps.push_back(std::move(cols));
    res.modules.push_back(next);
    const ModuleOrder next_order(degrees);
    const auto keep = minimal_generator_indices<K>(ring, next_order, syz);
    cols.clear();
    for (auto i : keep) cols.push_back(syz[i]);
  }
  return res;
}

}  // namespace wps
