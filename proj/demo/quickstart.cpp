// Scattering length of a step potential, the bounds it implies for a dilute
// gas, and a condensation certificate on a modular surface.
#include <cstdio>

#include "hypgas/hypgas.hpp"

int main() {
  using namespace hypgas;

  const Dimension d(2);
  const auto V = Potential::piecewise({{0.02, 30.0}, {0.05, 5.0}});
  const auto s = scattering_length(V, ScatteringParams(1.0, d));
  const auto s3 = scattering_length(V, ScatteringParams(1.0, Dimension(3)));
  // Soft potentials scatter exponentially weakly in two dimensions.
  std::printf("R0 = %.2f  a(d=2) = %.6e  a(d=3) = %.6e\n", V.support_radius(), s.a, s3.a);

  BoundInputs in;
  in.d = 2;
  in.rho = 1e-3;
  in.a = s.a;
  in.R0 = V.support_radius();
  const auto b = evaluate_bounds(in);
  std::printf("Y = %.4e  Y0 = %.4e  E/N <= %.4e  fraction >= %.4f\n", b.Y, b.y0, *b.energy_upper_per_particle,
              *b.fraction_lower);

  const ManifoldModel m(ModularSurface{50});
  for (long N : {200L, 2000L}) {
    const auto c = certify_bec(m, N, V, 1.0, 0.1);
    std::printf("L = 50, N = %ld: %s, fraction >= %.4f\n", N, c.certified ? "certified" : "not certified",
                c.fraction_lower);
  }
}
