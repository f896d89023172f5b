#pragma once

#include <numeric>
#include <vector>

#include "wps/quotient.hpp"

namespace wps {

/// O(k) = Sat(A[k]); A[k] is already saturated once there are two variables.
template <Scalar K>
SheafRep<K> structure_twist(const WeightedRing& ring, int k, std::optional<DegreeWindow> W = std::nullopt) {
  if (ring.num_variables() < 2) throw PreconditionError("O(k) needs at least two variables");
  auto M = shifted_ring<K>(ring, k);
  return saturated_rep(M, W ? *W : default_window(M));
}

/// Sat(M ⊗ N). A free factor tensored with a saturated module stays
/// saturated, so that case skips the Hom chain.
template <Scalar K>
SheafRep<K> sheaf_tensor(const SheafRep<K>& M, const SheafRep<K>& N) {
  if (!(M.ring() == N.ring())) throw RingMismatch("sheaf_tensor");
  const DegreeWindow W = DegreeWindow::hull(M.window, N.window);
  auto T = tensor_presentation(M.module, N.module);
  const bool free_m = M.module.relations().empty();
  const bool free_n = N.module.relations().empty();
  if ((free_m && N.exact) || (free_n && M.exact)) return saturated_rep(T, W);
  return saturate(T, W).sheaf;
}

/// Sat(S^n(M)).
template <Scalar K>
SheafRep<K> sheaf_sym(const SheafRep<K>& M, std::uint32_t n) {
  auto S = sym_presentation(M.module, n);
  if (M.module.relations().empty()) return saturated_rep(S, M.window);
  return saturate(S, M.window).sheaf;
}

template <Scalar K>
struct WggGenerator {
  int twist;         // j in [0, l-1]: a map O(j) -> M
  Column<K> element; // the corresponding element of M̂ in degree -j
};

template <Scalar K>
struct WggCertificate {
  bool verdict = false;
  std::vector<WggGenerator<K>> generators_used;
  std::optional<int> failure_degree;
};

/// Weighted global generation: the map from ⊕_{j<l} O(j)^{dim Sat(M)_{-j}}
/// given by all sections in those degrees is an epimorphism of sheaves.
template <Scalar K>
WggCertificate<K> wgg_check(const SheafRep<K>& M) {
  const int l = M.ring().lcm_weights();
  if (!M.window.covers(DegreeWindow(-(l - 1), 0)))
    throw WindowTooSmall("wgg_check needs the window to cover [" + std::to_string(-(l - 1)) + ", 0]");
  WggCertificate<K> cert;
  std::vector<int> source_degrees;
  std::vector<Column<K>> images;
  for (int j = 0; j < l; ++j)
    for (auto& v : standard_basis(M.module, -j)) {
      source_degrees.push_back(-j);
      images.push_back(v);
      cert.generators_used.push_back({j, std::move(v)});
    }
  auto source = Presentation<K>::free(M.ring(), std::move(source_degrees));
  auto phi = GradedMap<K>::unchecked(std::move(source), M.module, std::move(images));
  const auto epi = is_epi_sheaf(phi);
  cert.verdict = epi.holds;
  cert.failure_degree = epi.failure_degree;
  return cert;
}

/// The map O(r)^{n+1} -> O(k), e_j -> x_j^{a l / d_j}, where k = a l + r.
template <Scalar K>
GradedMap<K> twist_epi(const WeightedRing& ring, int k) {
  if (k < 0) throw PreconditionError("twist_epi needs k >= 0");
  const int l = ring.lcm_weights();
  const int a = k / l, r = k % l;
  const std::size_t nv = ring.num_variables();
  auto source = Presentation<K>::free(ring, std::vector<int>(nv, -r));
  auto target = shifted_ring<K>(ring, k);
  std::vector<Column<K>> images;
  for (std::size_t j = 0; j < nv; ++j) {
    Column<K> v;
    v.terms.push_back({ring.variable(j, a * l / ring.weight(j)), 0, K(1)});
    images.push_back(std::move(v));
  }
  return GradedMap<K>(std::move(source), std::move(target), std::move(images));
}

/// The map ⊕_{i,j} O(r_i) -> F(n), (i, j) -> x_j^{a_i l / d_j} f_i, where
/// f_i has degree ρ_i and n - ρ_i = a_i l + r_i. Source generators are
/// ordered by i, then j.
template <Scalar K>
GradedMap<K> lemma_epi(const Presentation<K>& F, std::span<const Column<K>> gens, int n) {
  const WeightedRing& ring = F.ring();
  const int l = ring.lcm_weights();
  const std::size_t nv = ring.num_variables();
  std::vector<int> rho;
  for (const auto& f : gens) {
    if (f.is_zero()) throw PreconditionError("lemma_epi: zero generator");
    if (!column::is_homogeneous(F.order(), f)) throw PreconditionError("lemma_epi: inhomogeneous generator");
    rho.push_back(f.degree(F.order()));
  }
  const int max_rho = rho.empty() ? 0 : *std::max_element(rho.begin(), rho.end());
  if (n < max_rho)
    throw DegreeTooSmall("lemma_epi: n = " + std::to_string(n) + " is below the top generator degree " +
                         std::to_string(max_rho));
  auto target = twist(F, n);
  std::vector<int> source_degrees;
  std::vector<Column<K>> images;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int a = (n - rho[i]) / l, r = (n - rho[i]) % l;
    for (std::size_t j = 0; j < nv; ++j) {
      source_degrees.push_back(-r);
      images.push_back(column::monomial_times(gens[i], K(1), ring.variable(j, a * l / ring.weight(j))));
    }
  }
  auto source = Presentation<K>::free(ring, std::move(source_degrees));
  return GradedMap<K>(std::move(source), std::move(target), std::move(images));
}

/// lemma_epi with the generators of the presentation.
template <Scalar K>
GradedMap<K> lemma_epi(const Presentation<K>& F, int n) {
  std::vector<Column<K>> gens;
  for (std::uint32_t i = 0; i < F.num_generators(); ++i) gens.push_back(column::unit<K>(i));
  return lemma_epi(F, std::span<const Column<K>>(gens), n);
}

}  // namespace wps
