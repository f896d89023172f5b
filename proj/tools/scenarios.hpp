#pragma once

// Scenario runner behind `verify-paper`. Each scenario names a check kind,
// its parameters and the rings it runs on; see scenarios.json.

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "documents.hpp"

namespace wps::cli {

using Q = Rational;

/// Random homogeneous presentations with small integer coefficients.
class RandomModules {
 public:
  explicit RandomModules(unsigned seed) : gen_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Column<Q> column(const WeightedRing& R, const std::vector<int>& degrees, int d, double density, int max_terms) {
    const ModuleOrder order(degrees);
    std::vector<ColumnTerm<Q>> t;
    for (std::uint32_t c = 0; c < degrees.size(); ++c) {
      if (std::uniform_real_distribution<double>(0, 1)(gen_) > density) continue;
      const auto& basis = R.basis(d - degrees[c]);
      if (basis.empty()) continue;
      const int k = uniform(1, max_terms);
      for (int i = 0; i < k; ++i) {
        int coef = uniform(-3, 3);
        if (coef == 0) coef = 1;
        t.push_back({basis[static_cast<std::size_t>(uniform(0, static_cast<int>(basis.size()) - 1))], c, Q(coef)});
      }
    }
    return column::from_terms(order, std::move(t));
  }

  Presentation<Q> presentation(const WeightedRing& R, int max_gens, int max_rels, int max_gen_deg, int max_rel_deg,
                               double density, int max_terms) {
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

 private:
  std::mt19937 gen_;
};

/// Failed checks of one scenario run; empty means pass.
struct Checks {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

inline int param(const json& p, const char* key, int fallback) { return p.contains(key) ? p.at(key).get<int>() : fallback; }

inline SheafRep<Q> sheaf_of(const Presentation<Q>& M) {
  const int l = M.ring().lcm_weights();
  return saturate(M, DegreeWindow(-(l + 4), 10)).sheaf;
}

namespace scenario {

inline void membership(const WeightedRing& R, const json& p, Checks& out) {
  RandomModules rnd(static_cast<unsigned>(param(p, "seed", 1)));
  for (int trial = 0; trial < param(p, "trials", 20); ++trial) {
    auto M = rnd.presentation(R, 2, 3, 2, 6, 0.7, 3);
    const int d = rnd.uniform(0, param(p, "max_degree", 8));
    Column<Q> v = rnd.column(R, M.cover().degrees(), d, 0.7, 3);
    if (trial % 2 == 0)
      for (const auto& r : M.relations())
        for (const auto& m : R.basis(d - r.degree(M.order())))
          v = column::axpy(M.order(), v, 0, Q(rnd.uniform(-2, 2)), m, r);
    const bool engine = M.normal_form(v).is_zero();
    out.expect(engine == component_basis(M, d).is_zero(v), "membership trial " + std::to_string(trial));
  }
}

inline void saturation(const WeightedRing& R, const json& p, Checks& out) {
  RandomModules rnd(static_cast<unsigned>(param(p, "seed", 2)));
  const DegreeWindow W(param(p, "lo", -6), param(p, "hi", 12));
  for (int trial = 0; trial < param(p, "trials", 10); ++trial) {
    const std::string t = "saturation trial " + std::to_string(trial);
    auto M = rnd.presentation(R, 3, 4, 2, 6, 0.5, 2);
    auto sat = saturate(M, W);
    auto split = torsion_submodule(M);
    auto ker = kernel(sat.unit);
    std::vector<Column<Q>> a = M.relations(), b = M.relations();
    for (const auto& v : ker.inclusion.images()) a.push_back(v);
    for (const auto& v : split.inclusion.images()) b.push_back(v);
    out.expect(same_submodule<Q>(M.cover(), a, b), t + ": kernel is the torsion");
    out.expect(is_epi_sheaf(sat.unit).holds, t + ": torsion cokernel");
    out.expect(saturate(sat.sheaf.module, W).sheaf.saturated_dims == sat.sheaf.saturated_dims, t + ": idempotent");
  }
}

inline void gp(const WeightedRing& R, const json& p, Checks& out) {
  RandomModules rnd(static_cast<unsigned>(param(p, "seed", 3)));
  for (int trial = 0; trial < param(p, "trials", 5); ++trial) {
    auto M = rnd.presentation(R, 2, 3, 1, 4, 0.5, 2);
    auto N = rnd.presentation(R, 2, 3, 1, 4, 0.5, 2);
    auto sM = saturate(M, DegreeWindow(-4, 8));
    auto sN = saturate(N, DegreeWindow(-4, 8));
    out.expect(is_iso_sheaf(tensor_map(sM.unit, sN.unit)), "pair " + std::to_string(trial));
  }
}

inline void twists(const WeightedRing& R, const json& p, Checks& out) {
  for (int k = 0; k <= param(p, "max_k", 10); ++k) {
    out.expect(wgg_check(structure_twist<Q>(R, k)).verdict, "O(" + std::to_string(k) + ") wgg");
    out.expect(is_epi_sheaf(twist_epi<Q>(R, k)).holds, "twist_epi(" + std::to_string(k) + ")");
  }
  out.expect(!wgg_check(structure_twist<Q>(R, -1)).verdict, "O(-1) not wgg");
}

inline void lemma(const WeightedRing& R, const json& p, Checks& out) {
  const std::vector<std::vector<Polynomial<Q>>> rels = {{parse_polynomial<Q>(R, "x0^2")}};
  for (const auto& F : {Presentation<Q>::free(R, {0}), present<Q>(FreeModule(R, {0}), rels)})
    for (int n = 0; n <= param(p, "extra", 4); ++n)
      out.expect(is_epi_sheaf(lemma_epi(F, n)).holds, "lemma_epi n=" + std::to_string(n));
}

inline void euler(const WeightedRing& R, const json& p, Checks& out) {
  const DegreeWindow W(param(p, "lo", -6), param(p, "hi", 10));
  auto e = euler_tangent<Q>(R, W);
  out.expect(is_mono_sheaf(e.first), "Euler map mono");
  out.expect(is_epi_sheaf(e.second).holds, "projection epi");
  const auto zero = compose(e.second, e.first);
  for (const auto& v : zero.images()) out.expect(e.tangent.module.is_zero_element(v), "composite zero");
  auto ker = kernel(e.second).module;
  auto im = image(e.first).module;
  out.expect(hilbert_window(ker, W.lo, W.hi) == hilbert_window(im, W.lo, W.hi), "kernel equals image");
  out.expect(is_vector_bundle(e.tangent).holds, "tangent locally free");
  auto ext1 = graded_ext(e.tangent.module, Presentation<Q>::free(R, {0}), 1);
  const auto t = check_torsion(ext1.module);
  // On a line T = O(a0 + a1) is free; from three variables on the Euler
  // cokernel is already saturated and its Ext^1 is the residue field.
  if (R.num_variables() > 2) out.expect(t.torsion && t.dimension == 1, "Ext^1(T, A) = K");
  if (R.num_variables() == 2) {
    out.expect(ext1.module.is_zero_module(), "Ext^1(T, A) = 0");
    const auto O = shifted_ring<Q>(R, R.weight(0) + R.weight(1));
    for (int d = W.lo; d <= W.hi; ++d)
      out.expect(e.tangent.dim(d) == hilbert_function(O, d), "T = O(a0 + a1) in degree " + std::to_string(d));
  }
}

inline void tangent_ample(const WeightedRing& R, const json& p, Checks& out) {
  std::vector<SheafRep<Q>> tests;
  const auto against = p.contains("against") ? p.at("against").get<std::vector<int>>() : std::vector<int>{0, -5};
  for (int k : against) tests.push_back(structure_twist<Q>(R, k));
  auto rep = verify_tangent_ample<Q>(R, tests, param(p, "n_max", 8));
  out.expect(rep.success, "tangent ample: " + rep.failure);
}

inline void coarse_contrast(const WeightedRing& R, const json& p, Checks& out) {
  // dim A_{a+Lk} = dim A_{b+Lk}, L = product of the weights.
  const int a = param(p, "a", 2), b = param(p, "b", -1);
  int L = 1;
  for (std::size_t i = 0; i < R.num_variables(); ++i) L *= R.weight(i);
  for (int k = 0; k <= param(p, "periods", 10); ++k)
    out.expect(R.basis(a + L * k).size() == (b + L * k < 0 ? 0 : R.basis(b + L * k).size()),
               "period " + std::to_string(k));
  for (int f : {0, -5})
    out.expect(ample_probe(structure_twist<Q>(R, a), structure_twist<Q>(R, f), param(p, "n_max", 8)).n0.has_value(),
               "probe O(" + std::to_string(a) + ") against O(" + std::to_string(f) + ")");
}

inline void closure(const WeightedRing& R, const json& p, Checks& out) {
  RandomModules rnd(static_cast<unsigned>(param(p, "seed", 9)));
  for (int trial = 0; trial < param(p, "trials", 10); ++trial) {
    const std::string t = "closure trial " + std::to_string(trial);
    auto M = rnd.presentation(R, 2, 2, 1, 3, 0.5, 2);
    auto N = rnd.presentation(R, 2, 2, 1, 3, 0.5, 2);
    auto sM = sheaf_of(M), sN = sheaf_of(N);
    const bool wM = wgg_check(sM).verdict, wN = wgg_check(sN).verdict;
    std::vector<Column<Q>> rels = M.relations();
    rels.push_back(rnd.column(R, M.cover().degrees(), 2 + rnd.uniform(0, 1), 0.6, 2));
    if (wM) out.expect(wgg_check(sheaf_of(Presentation<Q>(M.cover(), rels))).verdict, t + ": quotient");
    if (wM && wN) {
      auto sum = saturated_rep(direct_sum(sM.module, sN.module).sum, DegreeWindow::hull(sM.window, sN.window));
      out.expect(wgg_check(sum).verdict, t + ": direct sum");
      out.expect(wgg_check(sheaf_tensor(sM, sN)).verdict, t + ": tensor");
    }
    for (std::uint32_t a = 1; a <= 2; ++a)
      for (std::uint32_t b = 1; a + b <= 3; ++b)
        out.expect(is_epi_sheaf(sym_multiplication(sM.module, a, b)).holds, t + ": Sym multiplication");
  }
}

}  // namespace scenario

using ScenarioFn = std::function<void(const WeightedRing&, const json&, Checks&)>;

inline const std::map<std::string, ScenarioFn>& scenario_kinds() {
  static const std::map<std::string, ScenarioFn> kinds = {
      {"membership", scenario::membership}, {"saturation", scenario::saturation},
      {"gp", scenario::gp},                 {"twists", scenario::twists},
      {"lemma_epi", scenario::lemma},       {"euler", scenario::euler},
      {"tangent_ample", scenario::tangent_ample}, {"coarse_contrast", scenario::coarse_contrast},
      {"closure", scenario::closure},
  };
  return kinds;
}

/// Runs every scenario of `doc`. With `weights` set, scenarios marked
/// "generic" run on those weights instead of their own list and the others
/// are skipped. Timings go to `log`, never into the result document.
inline json run_scenarios(const json& doc, const std::optional<std::vector<int>>& weights, std::ostream& log) {
  require_keys(doc, "scenario file", {"schema_version", "scenarios"});
  if (doc.at("schema_version") != kSchemaVersion) throw SchemaError("scenario file schema_version mismatch");
  json results = json::array();
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& s : doc.at("scenarios")) {
    require_keys(s, "scenario", {"name", "kind", "weights"}, {"params", "generic"});
    const auto name = get_as<std::string>(s, "name", "scenario");
    const auto kind = get_as<std::string>(s, "kind", "scenario");
    const auto it = scenario_kinds().find(kind);
    if (it == scenario_kinds().end()) throw SchemaError("unknown scenario kind '" + kind + "'");
    const json params = s.value("params", json::object());
    const bool generic = s.value("generic", false);
    std::vector<std::vector<int>> rings = get_as<std::vector<std::vector<int>>>(s, "weights", "scenario");
    if (weights) {
      if (!generic) {
        results.push_back(json{{"name", name}, {"kind", kind}, {"status", "skipped"}});
        ++skipped;
        continue;
      }
      rings = {*weights};
    }
    for (const auto& w : rings) {
      Checks checks;
      const auto start = std::chrono::steady_clock::now();
      try {
        it->second(WeightedRing(FieldSpec::rationals(), w), params, checks);
      } catch (const BudgetError& e) {
        checks.failures.push_back(std::string("budget exceeded: ") + e.what());
      } catch (const PreconditionError& e) {
        checks.failures.push_back(std::string("precondition: ") + e.what());
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const bool ok = checks.failures.empty();
      (ok ? passed : failed) += 1;
      log << (ok ? "PASS " : "FAIL ") << name << " on P" << json(w).dump() << " (" << secs << " s)\n";
      json r{{"name", name}, {"kind", kind}, {"weights", w}, {"status", ok ? "pass" : "fail"}};
      if (!ok) r["failures"] = checks.failures;
      results.push_back(std::move(r));
    }
  }
  return json{{"scenarios", results}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}};
}

}  // namespace wps::cli
