#include <gtest/gtest.h>

#include "support.hpp"

namespace wps::testing {
namespace {

Presentation<Q> residue_field(const WeightedRing& R) {
  std::vector<std::vector<const char*>> rels;
  static const char* names[] = {"x0", "x1", "x2", "x3", "x4", "x5"};
  for (std::size_t i = 0; i < R.num_variables(); ++i) rels.push_back({names[i]});
  return module_of(R, {0}, rels);
}

/// The inclusion m -> A where m carries its Koszul presentation.
GradedMap<Q> irrelevant_inclusion(const WeightedRing& R) {
  auto m = irrelevant_ideal<Q>(R);
  auto A = Presentation<Q>::free(R, {0});
  std::vector<Column<Q>> images;
  for (std::size_t i = 0; i < R.num_variables(); ++i) {
    Column<Q> v;
    v.terms.push_back({R.variable(i), 0, Q(1)});
    images.push_back(v);
  }
  return GradedMap<Q>(m, A, images);
}

/// ⊕_j M(-d_j) -> M, the j-th copy multiplied by x_j.
GradedMap<Q> multiplication_cover(const Presentation<Q>& M) {
  const auto& R = M.ring();
  Presentation<Q> src = Presentation<Q>::zero(R);
  for (std::size_t j = 0; j < R.num_variables(); ++j) src = direct_sum(src, twist(M, -R.weight(j))).sum;
  std::vector<Column<Q>> images;
  for (std::size_t j = 0; j < R.num_variables(); ++j)
    for (std::uint32_t i = 0; i < M.num_generators(); ++i) {
      Column<Q> v;
      v.terms.push_back({R.variable(j), i, Q(1)});
      images.push_back(v);
    }
  return GradedMap<Q>(src, M, images);
}

// Oracle for dim τ(M)_d: v ∈ F_d is torsion mod N iff x_i^{k_i} v ∈ N for
// every i, once every x_i^{k_i} v lands above the top torsion degree.
std::size_t oracle_torsion_dim(const Presentation<Q>& M, int d, int top) {
  const auto& R = M.ring();
  const auto& deg = M.cover().degrees();
  DenseCoordinates src(R, deg, d);
  if (src.size() == 0) return 0;
  std::vector<DenseCoordinates> blocks;
  std::vector<std::vector<Column<Q>>> rel_rows;
  std::vector<Monomial> powers;
  std::size_t width = 0;
  std::vector<std::size_t> offset;
  for (std::size_t i = 0; i < R.num_variables(); ++i) {
    int k = 1;
    while (d + k * R.weight(i) <= top) ++k;
    powers.push_back(R.variable(i, k));
    const int t = d + k * R.weight(i);
    blocks.emplace_back(R, deg, t);
    rel_rows.push_back(multiples_in_degree(R, M.order(), M.relations(), t));
    offset.push_back(width);
    width += blocks.back().size();
  }
  std::vector<std::vector<Q>> S, all;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (const auto& r : rel_rows[i]) {
      std::vector<Q> row(width, Q(0));
      const auto x = blocks[i](r);
      std::copy(x.begin(), x.end(), row.begin() + static_cast<std::ptrdiff_t>(offset[i]));
      S.push_back(row);
    }
  all = S;
  for (std::uint32_t c = 0; c < deg.size(); ++c)
    for (const auto& m : R.basis(d - deg[c])) {
      Column<Q> e;
      e.terms.push_back({m, c, Q(1)});
      std::vector<Q> row(width, Q(0));
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto x = blocks[i](column::monomial_times(e, Q(1), powers[i]));
        std::copy(x.begin(), x.end(), row.begin() + static_cast<std::ptrdiff_t>(offset[i]));
      }
      all.push_back(row);
    }
  const std::size_t rank_map = dense_rank(all) - dense_rank(S);
  const std::size_t preimage = src.size() - rank_map;
  return preimage - span_dimension(R, deg, M.relations(), d);
}

TEST(IsTorsion, Examples) {
  auto R = ring_of({1, 1});
  EXPECT_TRUE(is_torsion(residue_field(R)));
  auto line = check_torsion(module_of(R, {0}, {{"x0"}}));
  EXPECT_FALSE(line.torsion);
  ASSERT_TRUE(line.witness_degree.has_value());
  EXPECT_GT(hilbert_function(module_of(R, {0}, {{"x0"}}), *line.witness_degree), 0u);
  auto fat = check_torsion(module_of(R, {0}, {{"x0^3"}, {"x1^2"}}));
  EXPECT_TRUE(fat.torsion);
  EXPECT_EQ(fat.dimension, 6u);
  EXPECT_EQ(fat.top_degree, 3);
  EXPECT_TRUE(is_torsion(Presentation<Q>::zero(R)));
  EXPECT_FALSE(is_torsion(Presentation<Q>::free(R, {0})));
}

TEST(IsTorsion, MatchesFiniteDimensionOnRandomModules) {
  Random rnd(201);
  auto R = ring_of({1, 2});
  for (int trial = 0; trial < 15; ++trial) {
    auto M = rnd.presentation(R, 2, 4, 1, 4);
    const auto t = check_torsion(M);
    if (t.torsion) {
      std::size_t total = 0;
      for (int d = -2; d <= 30; ++d) total += oracle_dim(M, d);
      EXPECT_EQ(total, t.dimension);
    } else {
      ASSERT_TRUE(t.witness_degree.has_value());
      // A non-torsion module is nonzero in arbitrarily high degrees: along the
      // witness direction the dimension never drops to zero.
      EXPECT_GT(oracle_dim(M, *t.witness_degree), 0u);
    }
  }
}

TEST(TorsionSubmodule, Examples) {
  auto R = ring_of({1, 1});
  auto M = module_of(R, {0}, {{"x0^2"}, {"x0*x1"}});
  auto split = torsion_submodule(M);
  for (int d = -1; d <= 6; ++d) EXPECT_EQ(hilbert_function(split.torsion, d), d == 1 ? 1u : 0u) << d;
  EXPECT_TRUE(same_dims(split.torsion_free, module_of(R, {0}, {{"x0"}}), -1, 8));
  ASSERT_EQ(split.inclusion.images().size(), split.torsion.num_generators());
  EXPECT_EQ(column::make_monic(split.inclusion.images()[0]), col(M, {"x0"}));

  EXPECT_TRUE(torsion_submodule(Presentation<Q>::free(R, {0, 2})).torsion.is_zero_module());

  auto KA = direct_sum(residue_field(R), Presentation<Q>::free(R, {0})).sum;
  auto t = torsion_submodule(KA);
  for (int d = -1; d <= 5; ++d) EXPECT_EQ(hilbert_function(t.torsion, d), d == 0 ? 1u : 0u);
  EXPECT_TRUE(same_dims(t.torsion_free, Presentation<Q>::free(R, {0}), -1, 6));
}

TEST(TorsionSubmodule, MatchesLinearAlgebraOracle) {
  Random rnd(203);
  auto R = ring_of({1, 1, 2});
  for (int trial = 0; trial < 6; ++trial) {
    auto M = rnd.presentation(R, 2, 4, 1, 4);
    auto split = torsion_submodule(M);
    const auto t = check_torsion(split.torsion);
    ASSERT_TRUE(t.torsion);
    const int top = std::max(t.top_degree.value_or(0), 2) + 1;
    for (int d = 0; d <= 4; ++d)
      EXPECT_EQ(hilbert_function(split.torsion, d), oracle_torsion_dim(M, d, top)) << "trial " << trial << " d " << d;
    // M / τ(M) is torsion-free.
    EXPECT_TRUE(torsion_submodule(split.torsion_free).torsion.is_zero_module());
  }
}

TEST(Saturate, IrrelevantIdealSaturatesToA) {
  auto R = ring_of({1, 1});
  auto m = irrelevant_ideal<Q>(R);
  auto sat = saturate(m, DegreeWindow(-2, 4));
  EXPECT_EQ(sat.sheaf.saturated_dims, (std::vector<std::size_t>{0, 0, 1, 2, 3, 4, 5}));
  EXPECT_TRUE(sat.sheaf.exact);
  EXPECT_TRUE(is_iso_sheaf(sat.unit));
}

TEST(Saturate, FreeAndTorsion) {
  auto R = ring_of({1, 2, 3});
  auto A = Presentation<Q>::free(R, {0});
  auto sat = saturate(A, DegreeWindow(-3, 8));
  EXPECT_TRUE(sat.sheaf.exact);
  EXPECT_EQ(sat.sheaf.steps, 0);
  for (int d = -3; d <= 8; ++d) EXPECT_EQ(sat.sheaf.dim(d), hilbert_function(A, d));
  EXPECT_THROW(sat.sheaf.dim(9), WindowTooSmall);

  auto T = module_of(R, {0}, {{"x0^2"}, {"x1"}, {"x2^2"}});
  auto z = saturate(T, DegreeWindow(-3, 8));
  for (int d = -3; d <= 8; ++d) EXPECT_EQ(z.sheaf.dim(d), 0u);
  EXPECT_TRUE(z.sheaf.module.is_zero_module());
}

TEST(Saturate, EulerCokernelFillsInDegreeMinusTwo) {
  auto R = ring_of({1, 1});
  auto src = Presentation<Q>::free(R, {0});
  auto tgt = Presentation<Q>::free(R, {-1, -1});
  auto C = cokernel(GradedMap<Q>(src, tgt, {col(tgt, {"x0", "x1"})}));
  EXPECT_EQ(hilbert_function(C, -2), 0u);
  auto sat = saturate(C, DegreeWindow(-3, 3));
  for (int d = -3; d <= 3; ++d) EXPECT_EQ(sat.sheaf.dim(d), hilbert_function(Presentation<Q>::free(R, {0}), d + 2));
}

TEST(Saturate, LineWithZeroDimensionalSupportIsWindowCertified) {
  // On P(1,1), Sat(A/(x0)) is K[x1, 1/x1]: one dimension in every degree.
  auto R = ring_of({1, 1});
  auto M = module_of(R, {0}, {{"x0"}});
  auto sat = saturate(M, DegreeWindow(-6, 6));
  EXPECT_FALSE(sat.sheaf.exact);
  for (int d = -6; d <= 6; ++d) EXPECT_EQ(sat.sheaf.dim(d), 1u);
  SaturationOptions tight;
  tight.max_power = 2;
  EXPECT_THROW(saturate(M, DegreeWindow(-6, 6), tight), StabilizationBudgetExceeded);
}

TEST(Saturate, RejectsSingleVariable) {
  // Rings with one variable cannot even be built.
  EXPECT_THROW(ring_of({2}), PreconditionError);
}

/// The four-term sequence, torsion-freeness and idempotence for one module.
void check_saturation_invariants(const Presentation<Q>& M, const DegreeWindow& W) {
  auto sat = saturate(M, W);
  const auto& Mhat = sat.sheaf.module;
  // ker(M -> M̂) = τ(M) as submodules of the cover modulo relations.
  auto split = torsion_submodule(M);
  auto ker = kernel(sat.unit);
  std::vector<Column<Q>> a = M.relations(), b = M.relations();
  for (const auto& v : ker.inclusion.images()) a.push_back(v);
  for (const auto& v : split.inclusion.images()) b.push_back(v);
  EXPECT_TRUE(same_submodule<Q>(M.cover(), a, b));
  // coker torsion
  EXPECT_TRUE(is_epi_sheaf(sat.unit).holds);
  // M̂ torsion-free
  EXPECT_TRUE(torsion_submodule(Mhat).torsion.is_zero_module());
  // idempotent on the window
  auto again = saturate(Mhat, W);
  EXPECT_EQ(again.sheaf.saturated_dims, sat.sheaf.saturated_dims);
  EXPECT_TRUE(is_iso_sheaf(again.unit));
  // maps into the saturation kill τ(M)
  const auto comp = compose(sat.unit, split.inclusion);
  for (const auto& v : comp.images()) EXPECT_TRUE(Mhat.is_zero_element(v));
}

TEST(Saturate, InvariantsOnRandomModules) {
  Random rnd(207);
  auto R = ring_of({1, 1, 2});
  for (int trial = 0; trial < 8; ++trial) {
    SCOPED_TRACE(trial);
    check_saturation_invariants(rnd.presentation(R, 3, 4, 2, 6, 0.5, 2), DegreeWindow(-6, 12));
  }
  auto R2 = ring_of({1, 2});
  for (int trial = 0; trial < 6; ++trial) {
    SCOPED_TRACE(100 + trial);
    check_saturation_invariants(rnd.presentation(R2, 2, 3, 2, 5, 0.5, 2), DegreeWindow(-6, 10));
  }
}

TEST(EpiMono, Examples) {
  auto R = ring_of({1, 1});
  auto inc = irrelevant_inclusion(R);
  EXPECT_TRUE(is_epi_sheaf(inc).holds);
  EXPECT_TRUE(is_mono_sheaf(inc));
  EXPECT_TRUE(is_iso_sheaf(inc));

  auto A = Presentation<Q>::free(R, {0});
  auto z = is_epi_sheaf(zero_map(Presentation<Q>::zero(R), A));
  EXPECT_FALSE(z.holds);
  ASSERT_TRUE(z.failure_degree.has_value());
  EXPECT_GE(*z.failure_degree, 0);

  auto R23 = ring_of({2, 3});
  auto src = Presentation<Q>::free(R23, {-1, -1});
  auto tgt = shifted_ring<Q>(R23, 7);
  EXPECT_TRUE(is_epi_sheaf(GradedMap<Q>(src, tgt, {col(tgt, {"x0^3"}), col(tgt, {"x1^2"})})).holds);

  Random rnd(211);
  auto M = rnd.presentation(R, 2, 2, 1, 3);
  EXPECT_TRUE(is_iso_sheaf(identity_map(M)));

  auto AA = direct_sum(A, A);
  EXPECT_FALSE(is_mono_sheaf(AA.project_first));
  EXPECT_TRUE(is_epi_sheaf(AA.project_first).holds);
  EXPECT_FALSE(is_iso_sheaf(AA.project_first));
}

TEST(EpiMono, CompositionOfEpis) {
  Random rnd(213);
  for (const auto& w : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {1, 1, 2}}) {
    auto R = ring_of(w);
    for (int trial = 0; trial < 4; ++trial) {
      auto M = rnd.presentation(R, 2, 2, 1, 3);
      auto f = multiplication_cover(M);
      auto g = multiplication_cover(f.source());
      ASSERT_TRUE(is_epi_sheaf(f).holds);
      ASSERT_TRUE(is_epi_sheaf(g).holds);
      EXPECT_TRUE(is_epi_sheaf(compose(f, g)).holds);
    }
  }
}

TEST(DegreeWindow, Validation) {
  EXPECT_THROW(DegreeWindow(3, 2), PreconditionError);
  DegreeWindow W(-2, 5);
  EXPECT_TRUE(W.contains(-2));
  EXPECT_FALSE(W.contains(6));
  EXPECT_TRUE(W.covers(DegreeWindow(0, 5)));
  EXPECT_EQ(DegreeWindow::hull(W, DegreeWindow(4, 9)), DegreeWindow(-2, 9));
  auto R = ring_of({2, 3});
  auto Wd = default_window(Presentation<Q>::free(R, {0}));
  EXPECT_TRUE(Wd.covers(DegreeWindow(-5, 0)));
}

}  // namespace
}  // namespace wps::testing
