#pragma once

#include <climits>
#include <optional>
#include <vector>

#include "wps/hom.hpp"

namespace wps {

struct DegreeWindow {
  int lo = 0;
  int hi = 0;

  DegreeWindow() = default;
  DegreeWindow(int lo_, int hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw PreconditionError("degree window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is empty");
  }
  bool contains(int d) const { return lo <= d && d <= hi; }
  bool covers(const DegreeWindow& o) const { return lo <= o.lo && o.hi <= hi; }
  static DegreeWindow hull(const DegreeWindow& a, const DegreeWindow& b) {
    return DegreeWindow(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  }
  friend bool operator==(const DegreeWindow&, const DegreeWindow&) = default;
};

struct TorsionCheck {
  bool torsion = false;
  // Total K-dimension and top degree when torsion.
  std::size_t dimension = 0;
  std::optional<int> top_degree;
  // When not torsion: a degree in which the module is nonzero beyond every
  // leading-term bound (an infinite family of standard monomials).
  std::optional<int> witness_degree;
};

/// M is torsion iff it is finite dimensional over K, i.e. for every
/// generator and every variable some leading term of the relations on that
/// generator is a pure power of the variable.
template <Scalar K>
TorsionCheck check_torsion(const Presentation<K>& M) {
  TorsionCheck out;
  const WeightedRing& ring = M.ring();
  const std::size_t nv = ring.num_variables();
  const auto& gb = M.relation_basis();
  int lead_top = INT_MIN;
  for (std::uint32_t c = 0; c < M.num_generators(); ++c)
    for (const auto& l : gb.leads_on(c)) lead_top = std::max(lead_top, l.degree() + M.generator_degree(c));
  for (std::uint32_t c = 0; c < M.num_generators(); ++c) {
    const auto leads = gb.leads_on(c);
    for (std::size_t i = 0; i < nv; ++i) {
      bool found = false;
      for (const auto& l : leads)
        if ((l.support_mask() & ~(1u << i)) == 0) found = true;
      if (found) continue;
      // x_i^a e_c is standard for every a; pick a past all leading terms.
      const int g = M.generator_degree(c), w = ring.weight(i);
      int a = 1;
      if (lead_top != INT_MIN) a = std::max(a, (lead_top - g) / w + 1);
      out.witness_degree = g + w * a;
      return out;
    }
  }
  out.torsion = true;
  // Standard monomials all sit below the largest leading-term degree.
  if (M.num_generators() == 0) return out;
  int lo = INT_MAX;
  for (std::uint32_t c = 0; c < M.num_generators(); ++c) lo = std::min(lo, M.generator_degree(c));
  for (int d = lo; d <= lead_top; ++d) {
    const std::size_t h = hilbert_function(M, d);
    out.dimension += h;
    if (h) out.top_degree = d;
  }
  return out;
}

template <Scalar K>
bool is_torsion(const Presentation<K>& M) {
  return check_torsion(M).torsion;
}

template <Scalar K>
struct TorsionSplit {
  Presentation<K> torsion;          // τ(M)
  GradedMap<K> inclusion;           // τ(M) -> M
  Presentation<K> torsion_free;     // M / τ(M), on the cover of M
  GradedMap<K> projection;          // M -> M / τ(M)
  std::vector<Column<K>> saturated_relations;  // generators of (N : m^∞)
  int steps = 0;                    // colons until stable
};

/// τ(M) = (N : m^∞) / N, by single colons until the submodule stops growing.
template <Scalar K>
TorsionSplit<K> torsion_submodule(const Presentation<K>& M) {
  const FreeModule& F = M.cover();
  std::vector<Column<K>> cur = M.relations();
  int steps = 0;
  while (!cur.empty()) {
    auto next = colon_irrelevant<K>(F, cur);
    ++steps;
    const auto gb = module_gb<K>(F, cur);
    bool grew = false;
    for (const auto& v : next)
      if (!gb.contains(v)) {
        grew = true;
        break;
      }
    if (!grew) break;
    cur = std::move(next);
  }
  auto sq = subquotient<K>(F, cur, M.relations());
  auto inc = GradedMap<K>::unchecked(sq.module, M, std::move(sq.generators));
  Presentation<K> quo(F, cur);
  std::vector<Column<K>> units;
  for (std::uint32_t i = 0; i < M.num_generators(); ++i) units.push_back(column::unit<K>(i));
  auto proj = GradedMap<K>::unchecked(M, quo, std::move(units));
  return TorsionSplit<K>{std::move(sq.module), std::move(inc), std::move(quo), std::move(proj), std::move(cur), steps};
}

struct SaturationOptions {
  /// Largest k tried in the Hom(m^[k], -) colimit.
  int max_power = 64;
};

/// An object of the quotient category, represented by a torsion-free module
/// M̂ whose graded pieces agree with the saturation on `window`. When `exact`
/// is set, M̂ is the saturation itself.
template <Scalar K>
struct SheafRep {
  Presentation<K> module;
  DegreeWindow window;
  std::vector<std::size_t> saturated_dims;  // degrees window.lo .. window.hi
  bool torsion_free = true;
  bool exact = false;
  int steps = 0;  // Hom(I_k, -) computations performed

  std::size_t dim(int d) const {
    if (!window.contains(d)) throw WindowTooSmall("degree " + std::to_string(d) + " outside the certified window");
    return saturated_dims[static_cast<std::size_t>(d - window.lo)];
  }
  const WeightedRing& ring() const { return module.ring(); }
};

template <Scalar K>
struct Saturation {
  SheafRep<K> sheaf;
  GradedMap<K> unit;  // M -> M̂, kernel τ(M), torsion cokernel
};

/// Default window: [-(l + maxgen + 2), reg + l + 2], widened to contain
/// [-(l-1), 0]. reg is the largest twist in a free resolution of M.
template <Scalar K>
DegreeWindow default_window(const Presentation<K>& M) {
  const int l = M.ring().lcm_weights();
  int maxgen = 0;
  for (std::size_t i = 0; i < M.num_generators(); ++i)
    maxgen = i == 0 ? M.generator_degree(i) : std::max(maxgen, M.generator_degree(i));
  int reg = maxgen;
  if (M.num_generators() > 0) reg = std::max(reg, free_resolution(M).max_twist());
  const int lo = std::min(-(l + maxgen + 2), -(l - 1));
  const int hi = std::max(reg + l + 2, 0);
  return DegreeWindow(lo, hi);
}

namespace detail {

template <Scalar K>
std::vector<std::size_t> dims_on(const Presentation<K>& M, const DegreeWindow& W) {
  return hilbert_window(M, W.lo, W.hi);
}

/// depth >= 2 (hence saturated) when pd(T) <= #vars - 2, by Auslander-Buchsbaum.
template <Scalar K>
bool depth_at_least_two(const Presentation<K>& T) {
  const std::size_t nv = T.ring().num_variables();
  if (T.relations().empty()) return true;
  if (nv < 3) return false;
  // Walk a minimal resolution; pd(T) <= nv - 2 iff stage nv - 1 is empty.
  const WeightedRing& ring = T.ring();
  FreeModule F = T.cover();
  std::vector<Column<K>> cols;
  for (auto i : minimal_generator_indices<K>(ring, T.order(), T.relations())) cols.push_back(T.relations()[i]);
  for (std::size_t stage = 1; stage + 1 < nv; ++stage) {
    const ModuleOrder order(F.degrees());
    std::vector<int> degrees;
    for (const auto& c : cols) degrees.push_back(c.degree(order));
    if (stage + 2 == nv) return columns_independent<K>(F, cols, std::move(degrees));
    auto syz = syzygies<K>(F, cols, degrees);
    if (syz.empty()) return true;
    F = FreeModule(ring, degrees);
    cols.clear();
    for (auto i : minimal_generator_indices<K>(ring, ModuleOrder(degrees), syz)) cols.push_back(syz[i]);
  }
  return cols.empty();
}

/// True when every generator of the target lies in the image modulo relations.
template <Scalar K>
bool is_surjective(const GradedMap<K>& phi) {
  return cokernel(phi).is_zero_module();
}

}  // namespace detail

/// Sat(M) as the colimit of Hom(I_k, T) over k = 1, 2, 4, ..., where
/// T = minimal M/τ(M) and I_k = (x_i^{k l / d_i}) is cofinal with the powers
/// of m. Every Hom is taken from T itself, so presentations do not compound.
///
/// Each candidate is torsion-free and sits between T and Sat(M). It is
/// exactly Sat(M) once it has depth >= 2 or the next one is no larger. When
/// Sat(M) is not finitely generated (zero-dimensional components on the
/// stack) the colimit only grows in low degrees, and iteration stops once
/// two consecutive candidates agree on the window.
template <Scalar K>
Saturation<K> saturate(const Presentation<K>& M, const DegreeWindow& W, const SaturationOptions& opt = {}) {
  const WeightedRing& ring = M.ring();
  if (ring.num_variables() < 2) throw PreconditionError("saturation needs at least two variables");
  {
    // Depth >= 2 already means torsion-free and saturated.
    auto mini = minimize(M);
    if (detail::depth_at_least_two(mini.module)) {
      SheafRep<K> rep{mini.module, W, detail::dims_on(mini.module, W), true, true, 0};
      return Saturation<K>{std::move(rep), std::move(mini.to_min)};
    }
  }
  auto split = torsion_submodule(M);
  auto mini = minimize(split.torsion_free);
  const Presentation<K> T0 = mini.module;
  const GradedMap<K> unit0 = compose(mini.to_min, split.projection);

  if (detail::depth_at_least_two(T0)) {
    SheafRep<K> rep{T0, W, detail::dims_on(T0, W), true, true, 0};
    return Saturation<K>{std::move(rep), unit0};
  }

  // Candidates only grow, so equal Hilbert series means T_k = T_{2k}. Then
  // T_k = Hom(I_k, T_k) since I_{2k} ⊆ I_k^2, and T_k is saturated.
  const int l = ring.lcm_weights();
  Presentation<K> prev = T0;
  GradedMap<K> prev_unit = unit0;
  auto prev_series = hilbert_numerator(T0);
  std::vector<std::size_t> dims = detail::dims_on(T0, W);
  int steps = 0;
  for (int k = 1;; k *= 2) {
    if (k > opt.max_power)
      throw StabilizationBudgetExceeded("saturation did not stabilize for k <= " + std::to_string(opt.max_power));
    std::vector<int> powers;
    for (std::size_t i = 0; i < ring.num_variables(); ++i) powers.push_back(k * l / ring.weight(i));
    auto ih = hom_from_power_ideal(T0, powers);
    ++steps;
    auto next = minimize(ih.hom.module);
    GradedMap<K> unit = compose(compose(next.to_min, ih.unit), unit0);
    const Presentation<K>& T = next.module;
    auto series = hilbert_numerator(T);
    if (series == prev_series) {
      SheafRep<K> rep{prev, W, std::move(dims), true, true, steps};
      return Saturation<K>{std::move(rep), std::move(prev_unit)};
    }
    auto next_dims = detail::dims_on(T, W);
    const bool deep = detail::depth_at_least_two(T);
    if (deep || next_dims == dims) {
      SheafRep<K> rep{T, W, std::move(next_dims), true, deep, steps};
      return Saturation<K>{std::move(rep), std::move(unit)};
    }
    prev = T;
    prev_unit = std::move(unit);
    prev_series = std::move(series);
    dims = std::move(next_dims);
  }
}

template <Scalar K>
Saturation<K> saturate(const Presentation<K>& M) {
  return saturate(M, default_window(M));
}

/// Wraps a module known to be saturated (e.g. A[k] with at least two
/// variables) without running the Hom chain.
template <Scalar K>
SheafRep<K> saturated_rep(const Presentation<K>& M, const DegreeWindow& W) {
  return SheafRep<K>{M, W, detail::dims_on(M, W), true, true, 0};
}

struct EpiCheck {
  bool holds = false;
  std::optional<int> failure_degree;
};

/// φ is an epimorphism of sheaves iff coker φ is torsion.
template <Scalar K>
EpiCheck is_epi_sheaf(const GradedMap<K>& phi) {
  const auto t = check_torsion(cokernel(phi));
  return EpiCheck{t.torsion, t.witness_degree};
}

template <Scalar K>
bool is_mono_sheaf(const GradedMap<K>& phi) {
  return is_torsion(kernel(phi).module);
}

template <Scalar K>
bool is_iso_sheaf(const GradedMap<K>& phi) {
  return is_epi_sheaf(phi).holds && is_mono_sheaf(phi);
}

}  // namespace wps
