#pragma once

#include <vector>

#include "wps/resolution.hpp"

namespace wps {

/// Hom(F, N) for F = ⊕ A[-g_i] free: ⊕_i N[g_i]. Cover generator i*s + j
/// stands for the map e_i -> f_j and has degree h_j - g_i.
template <Scalar K>
Presentation<K> hom_free(const FreeModule& F, const Presentation<K>& N) {
  const auto r = static_cast<std::uint32_t>(F.rank());
  const auto s = static_cast<std::uint32_t>(N.num_generators());
  std::vector<int> deg;
  for (std::uint32_t i = 0; i < r; ++i)
    for (std::uint32_t j = 0; j < s; ++j) deg.push_back(N.generator_degree(j) - F.degree(i));
  const ModuleOrder order(deg);
  std::vector<Column<K>> rels;
  std::vector<std::uint32_t> map(s);
  for (std::uint32_t i = 0; i < r; ++i) {
    for (std::uint32_t j = 0; j < s; ++j) map[j] = i * s + j;
    for (const auto& rel : N.relations()) rels.push_back(column::remap<K>(order, rel, map));
  }
  return Presentation<K>(FreeModule(N.ring(), std::move(deg)), std::move(rels));
}

/// The map Hom(F0, N) -> Hom(F1, N) induced by d : F1 -> F0, given by the
/// columns of d.
template <Scalar K>
GradedMap<K> hom_differential(const FreeModule& F0, std::span<const Column<K>> d, const Presentation<K>& N,
                              const Presentation<K>& hom0, const Presentation<K>& hom1) {
  const auto r0 = static_cast<std::uint32_t>(F0.rank());
  const auto s = static_cast<std::uint32_t>(N.num_generators());
  std::vector<std::vector<ColumnTerm<K>>> acc(static_cast<std::size_t>(r0) * s);
  for (std::uint32_t b = 0; b < d.size(); ++b)
    for (const auto& t : d[b].terms)
      for (std::uint32_t j = 0; j < s; ++j) acc[t.comp * s + j].push_back({t.mono, b * s + j, t.coef});
  std::vector<Column<K>> im;
  for (auto& terms : acc) im.push_back(column::from_terms(hom1.order(), std::move(terms)));
  return GradedMap<K>::unchecked(hom0, hom1, std::move(im));
}

/// Hom_A(M, N) as a submodule of Hom(F0, N) = ⊕ N[g_i].
template <Scalar K>
struct HomModule {
  Presentation<K> module;
  Presentation<K> ambient;             // Hom(F0, N)
  std::vector<Column<K>> generators;  // generators of module, as ambient columns
};

template <Scalar K>
HomModule<K> graded_hom(const Presentation<K>& M, const Presentation<K>& N) {
  if (!(M.ring() == N.ring())) throw RingMismatch("graded_hom");
  std::vector<int> rel_degrees = M.relation_degrees();
  FreeModule F1(M.ring(), rel_degrees);
  Presentation<K> hom0 = hom_free(M.cover(), N);
  Presentation<K> hom1 = hom_free(F1, N);
  auto delta = hom_differential<K>(M.cover(), M.relations(), N, hom0, hom1);
  const auto P = preimage_of_relations(delta);
  auto sq = subquotient<K>(hom0.cover(), P, hom0.relations());
  return HomModule<K>{std::move(sq.module), std::move(hom0), std::move(sq.generators)};
}

/// Lifts ambient columns into coordinates over a set of generators, modulo
/// the ambient relations.
template <Scalar K>
class Lifter {
 public:
  Lifter(const Presentation<K>& ambient, std::span<const Column<K>> gens)
      : system_(make(ambient, gens)) {}

  /// Coordinates c with sum c_i gens_i = v modulo relations; nullopt if v is
  /// not in the span.
  std::optional<Column<K>> lift(const Column<K>& v) {
    return system_.lift(v);
  }

 private:
  static std::vector<int> degrees_of(const Presentation<K>& ambient, std::span<const Column<K>> gens) {
    std::vector<int> d;
    for (const auto& g : gens) d.push_back(g.degree(ambient.order()));
    return d;
  }
  static LinearSystem<K> make(const Presentation<K>& ambient, std::span<const Column<K>> gens) {
    return LinearSystem<K>(ambient.ring(), ambient.order(), degrees_of(ambient, gens), gens, ambient.relations());
  }

  LinearSystem<K> system_;
};

/// Hom(I, T) for I = (x_i^{a_i}) together with the canonical map
/// T -> Hom(I, T), t -> (x_i^{a_i} t)_i.
template <Scalar K>
struct IrrelevantHom {
  HomModule<K> hom;
  GradedMap<K> unit;
};

template <Scalar K>
IrrelevantHom<K> hom_from_power_ideal(const Presentation<K>& T, std::span<const int> powers) {
  const WeightedRing& ring = T.ring();
  HomModule<K> H = graded_hom(power_ideal<K>(ring, powers), T);
  const auto nv = static_cast<std::uint32_t>(ring.num_variables());
  const auto s = static_cast<std::uint32_t>(T.num_generators());
  Lifter<K> lifter(H.ambient, H.generators);
  std::vector<Column<K>> images;
  for (std::uint32_t j = 0; j < s; ++j) {
    std::vector<ColumnTerm<K>> t;
    for (std::uint32_t i = 0; i < nv; ++i) t.push_back({ring.variable(i, powers[i]), i * s + j, K(1)});
    auto c = lifter.lift(column::from_terms(H.ambient.order(), std::move(t)));
    if (!c) throw PreconditionError("hom_from_power_ideal: canonical element outside Hom");
    images.push_back(std::move(*c));
  }
  auto unit = GradedMap<K>::unchecked(T, H.module, std::move(images));
  return IrrelevantHom<K>{std::move(H), std::move(unit)};
}

template <Scalar K>
IrrelevantHom<K> hom_from_irrelevant(const Presentation<K>& T) {
  const std::vector<int> ones(T.ring().num_variables(), 1);
  return hom_from_power_ideal(T, ones);
}

}  // namespace wps
