// Saturation of a module with torsion, then its sheaf Hilbert function.
// On P(1,1,2) the class of x0 in A/(x0^2, x0*x1, x0*x2) is killed by every
// variable, so the sheaf is the structure sheaf of {x0 = 0}, with sections
// K[x1, x2].

#include <iostream>

#include "wps/wps.hpp"

using namespace wps;

int main() {
  const WeightedRing R(FieldSpec::rationals(), {1, 1, 2});
  std::vector<std::vector<Polynomial<Rational>>> rels;
  for (const char* r : {"x0^2", "x0*x1", "x0*x2"}) rels.push_back({parse_polynomial<Rational>(R, r)});
  const auto M = present<Rational>(FreeModule(R, {0}), rels);

  const auto split = torsion_submodule(M);
  std::cout << "torsion: " << hilbert_function(split.torsion, 1) << "-dimensional in degree 1, "
            << split.steps << " colon steps\n";

  const auto sat = saturate(M, DegreeWindow(-4, 8));
  std::cout << "degree  dim M  dim Sat(M)\n";
  for (int d = -4; d <= 8; ++d)
    std::cout << d << "\t" << hilbert_function(M, d) << "\t" << sat.sheaf.saturated_dims[d + 4] << "\n";
  std::cout << (sat.sheaf.exact ? "exact" : "window-certified") << " after " << sat.sheaf.steps << " steps\n";
}
