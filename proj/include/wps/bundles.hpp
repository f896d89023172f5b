#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wps/sheafops.hpp"

namespace wps {

template <Scalar K>
struct ExtResult {
  int index = 0;
  Presentation<K> module;
  bool is_torsion = false;
};

/// Ext^i(M, N) from a given free resolution of M: homology of
/// Hom(F_{i-1}, N) -> Hom(F_i, N) -> Hom(F_{i+1}, N) at the middle.
template <Scalar K>
ExtResult<K> ext_from_resolution(const FreeResolution<K>& res, const Presentation<K>& N, int i) {
  const WeightedRing& ring = N.ring();
  if (i < 0) throw PreconditionError("Ext index must be non-negative");
  const auto idx = static_cast<std::size_t>(i);
  if (idx >= res.modules.size()) {
    auto zero = Presentation<K>::zero(ring);
    return ExtResult<K>{i, zero, true};
  }
  const FreeModule& Fi = res.modules[idx];
  const FreeModule Fnext = idx < res.maps.size() ? res.modules[idx + 1] : FreeModule(ring, {});
  const std::vector<Column<K>> none;
  const auto& d_next = idx < res.maps.size() ? res.maps[idx] : none;

  auto hom_i = hom_free(Fi, N);
  auto hom_next = hom_free(Fnext, N);
  auto delta = hom_differential<K>(Fi, d_next, N, hom_i, hom_next);
  const auto P = preimage_of_relations(delta);

  std::vector<Column<K>> R = hom_i.relations();
  if (idx > 0) {
    auto hom_prev = hom_free(res.modules[idx - 1], N);
    auto delta_prev = hom_differential<K>(res.modules[idx - 1], res.maps[idx - 1], N, hom_prev, hom_i);
    for (const auto& v : delta_prev.images())
      if (!v.is_zero()) R.push_back(v);
  }
  auto sq = subquotient<K>(hom_i.cover(), P, R);
  const bool tors = is_torsion(sq.module);
  return ExtResult<K>{i, std::move(sq.module), tors};
}

template <Scalar K>
ExtResult<K> graded_ext(const Presentation<K>& M, const Presentation<K>& N, int i, bool minimal = true) {
  if (!(M.ring() == N.ring())) throw RingMismatch("graded_ext");
  if (i < 0) throw PreconditionError("Ext index must be non-negative");
  const auto res = free_resolution(M, static_cast<std::size_t>(i) + 1, minimal);
  return ext_from_resolution(res, N, i);
}

struct VectorBundleCheck {
  bool holds = true;
  std::optional<int> first_failure;
};

/// Locally free iff Ext^i(M, A) is torsion for i = 1..n+1.
template <Scalar K>
VectorBundleCheck is_vector_bundle(const Presentation<K>& M) {
  const WeightedRing& ring = M.ring();
  const auto A = Presentation<K>::free(ring, {0});
  const int top = static_cast<int>(ring.num_variables());
  const auto res = free_resolution(M, static_cast<std::size_t>(top) + 1, true);
  VectorBundleCheck out;
  for (int i = 1; i <= top; ++i) {
    if (static_cast<std::size_t>(i) >= res.modules.size()) break;
    if (!ext_from_resolution(res, A, i).is_torsion) {
      out.holds = false;
      out.first_failure = i;
      break;
    }
  }
  return out;
}

template <Scalar K>
VectorBundleCheck is_vector_bundle(const SheafRep<K>& M) {
  return is_vector_bundle(M.module);
}

template <Scalar K>
struct EulerSequence {
  GradedMap<K> first;   // O -> ⊕ O(a_j), 1 -> (x_0, ..., x_n)
  GradedMap<K> second;  // ⊕ O(a_j) -> T
  Presentation<K> cokernel;
  SheafRep<K> tangent;
};

/// 0 -> O -> ⊕ O(a_j) -> T -> 0 with T the saturated cokernel.
template <Scalar K>
EulerSequence<K> euler_tangent(const WeightedRing& ring, std::optional<DegreeWindow> W = std::nullopt) {
  const auto nv = static_cast<std::uint32_t>(ring.num_variables());
  std::vector<int> deg;
  for (std::uint32_t j = 0; j < nv; ++j) deg.push_back(-ring.weight(j));
  auto O = Presentation<K>::free(ring, {0});
  auto target = Presentation<K>::free(ring, deg);
  std::vector<ColumnTerm<K>> t;
  for (std::uint32_t j = 0; j < nv; ++j) t.push_back({ring.variable(j), j, K(1)});
  auto first = GradedMap<K>(O, target, {column::from_terms(target.order(), std::move(t))});
  auto C = cokernel(first);
  auto sat = saturate(C, W ? *W : default_window(C));
  std::vector<Column<K>> units;
  for (std::uint32_t j = 0; j < nv; ++j) units.push_back(column::unit<K>(j));
  auto to_coker = GradedMap<K>::unchecked(target, C, std::move(units));
  auto second = compose(sat.unit, to_coker);
  return EulerSequence<K>{std::move(first), std::move(second), std::move(C), std::move(sat.sheaf)};
}

template <Scalar K>
struct AmpleProbe {
  std::vector<bool> wgg;  // entry n-1 for n = 1..n_max
  std::optional<int> n0;
  std::optional<int> last_failure;  // largest n in [1, n_max] that fails
};

/// Scans n = 1..n_max for wgg of F ⊗ Sym^n(M) and reports the least n0
/// from which every n up to n_max passes. Evidence only: the tail n > n_max
/// is not examined.
template <Scalar K>
AmpleProbe<K> ample_probe(const SheafRep<K>& M, const SheafRep<K>& F, int n_max) {
  if (n_max < 1) throw PreconditionError("ample_probe needs n_max >= 1");
  AmpleProbe<K> out;
  for (int n = 1; n <= n_max; ++n) {
    auto S = sheaf_sym(M, static_cast<std::uint32_t>(n));
    auto G = sheaf_tensor(F, S);
    const bool ok = wgg_check(G).verdict;
    out.wgg.push_back(ok);
    if (!ok) out.last_failure = n;
  }
  const int start = out.last_failure ? *out.last_failure + 1 : 1;
  if (start <= n_max) out.n0 = start;
  return out;
}

template <Scalar K>
struct TangentAmpleReport {
  bool success = false;
  VectorBundleCheck bundle;
  std::vector<AmpleProbe<K>> probes;  // one per test sheaf
  std::string failure;
};

template <Scalar K>
TangentAmpleReport<K> verify_tangent_ample(const WeightedRing& ring, const std::vector<SheafRep<K>>& tests,
                                           int n_max) {
  TangentAmpleReport<K> report;
  const auto euler = euler_tangent<K>(ring);
  report.bundle = is_vector_bundle(euler.tangent);
  if (!report.bundle.holds) {
    report.failure = "tangent sheaf fails the vector-bundle test at Ext^" + std::to_string(*report.bundle.first_failure);
    return report;
  }
  report.success = true;
  for (std::size_t f = 0; f < tests.size(); ++f) {
    report.probes.push_back(ample_probe(euler.tangent, tests[f], n_max));
    if (!report.probes.back().n0 && report.success) {
      report.success = false;
      report.failure = "no n0 for test sheaf " + std::to_string(f) + " (last failing n = " +
                       std::to_string(*report.probes.back().last_failure) + ")";
    }
  }
  return report;
}

}  // namespace wps
