// Tangent sheaf of a weighted projective line or plane, and a scan for the
// twist of Sym^n T that becomes weighted globally generated.
//
//   tangent_sheaf 1 2 3

#include <cstdlib>
#include <iostream>
#include <vector>

#include "wps/wps.hpp"

using namespace wps;

int main(int argc, char** argv) {
  std::vector<int> weights;
  for (int i = 1; i < argc; ++i) weights.push_back(std::atoi(argv[i]));
  if (weights.empty()) weights = {1, 2, 3};
  try {
    const WeightedRing R(FieldSpec::rationals(), weights);
    const auto euler = euler_tangent<Rational>(R);
    const auto& T = euler.tangent;

    std::cout << "T: " << T.module.num_generators() << " generators, " << T.module.relations().size()
              << " relations, window [" << T.window.lo << ", " << T.window.hi << "]"
              << (T.exact ? ", exact" : ", window-certified") << "\n";
    std::cout << "dims:";
    for (auto d : T.saturated_dims) std::cout << ' ' << d;
    std::cout << "\n";

    const auto vb = is_vector_bundle(euler.tangent);
    std::cout << "locally free: " << (vb.holds ? "yes" : "no") << "\n";

    for (int k : {0, -5}) {
      const auto probe = ample_probe(T, structure_twist<Rational>(R, k), 8);
      std::cout << "O(" << k << ") ⊗ Sym^n T wgg for n >= ";
      if (probe.n0)
        std::cout << *probe.n0 << "\n";
      else
        std::cout << "? (fails at n = " << *probe.last_failure << ")\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  }
}
