#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"

#include "hypgas/bounds.hpp"

using namespace hypgas;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const Dimension D2(2);
const Dimension D3(3);
}  // namespace

TEST_CASE("diluteness parameter") {
  CHECK(diluteness_Y(D2, 0.3, 0.0) == 0.0);
  CHECK(diluteness_Y(D3, 0.3, 0.0) == 0.0);
  CHECK_THAT(diluteness_Y(D3, 0.01, 1.0), WithinAbs(0.0076159, 1e-7));
  CHECK_THAT(diluteness_Y(D2, 0.01, 0.5), WithinAbs(0.0071082, 1e-7));
  CHECK_THAT(*diluteness_Y_printed_d2(0.01, 0.5), WithinRel(0.01 * std::log(1.0 / std::tanh(0.25)), 1e-14));
  CHECK_FALSE(diluteness_Y_printed_d2(0.01, 0.0).has_value());
  CHECK_THROWS_AS(diluteness_Y(D2, 0.0, 0.5), DomainError);
}

TEST_CASE("Y0 threshold examples") {
  CHECK_THAT(y0_threshold(D2, 1.0, 1.0, 1.0), WithinRel(1.0 / (32.0 * kPi), 1e-14));
  CHECK_THAT(y0_threshold(D2, 1.0, 1.0, 1.0), WithinAbs(0.009947, 1e-6));
  const auto small = y0_components(D2, 0.01, 1.0, 1.0);
  CHECK(small.eps_branch_active());
  CHECK_THAT(small.value, WithinRel(1.98e-4, 5e-3));
  CHECK_THAT(small.value, WithinRel(3.0 * (std::sqrt(1.0 + 0.02 / 3.0) - 1.0) / (16.0 * kPi), 1e-12));
  CHECK_THAT(y0_threshold(D3, 1e12, 1.0, 1.0), WithinRel(1.0 / (32.0 * std::exp(2.0)), 1e-14));
  CHECK_THAT(y0_threshold(D3, 1e12, 1.0, 1.0), WithinAbs(0.004230, 1e-6));
  CHECK_THROWS_AS(y0_threshold(D2, 0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("I and K closed-form estimates") {
  CHECK_THAT(i_bound(D2, 0.5, 2.0), WithinAbs(20.77, 0.01));
  CHECK_THAT(i_bound(D2, 0.5, 2.0), WithinRel(2.0 * kPi * 3.75 / std::log(std::tanh(1.0) / std::tanh(0.25)), 1e-14));
  CHECK_THAT(i_bound(D3, 0.5, 2.0), WithinAbs(41.82698, 1e-5));
  CHECK_THAT(k_bound(D2, 0.5, 2.0), WithinAbs(11.077, 1e-3));
  CHECK_THAT(k_bound(D3, 0.5, 2.0), WithinAbs(22.30772, 1e-5));
  CHECK_THAT(k_bound_without_radius(D3, 0.5, 2.0), WithinRel(k_bound(D3, 0.5, 2.0) / 2.0, 1e-14));
  // (R^2 - a^2) / f_inf(R) stays bounded as a -> R: the limit is 2 R sinh R.
  const double near = i_bound(D2, 2.0 - 1e-9, 2.0);
  CHECK(std::isfinite(near));
  CHECK_THAT(near, WithinRel(2.0 * kPi * 4.0 * std::sinh(2.0), 1e-6));
  CHECK_THROWS_AS(i_bound(D2, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(k_bound(D3, 0.0, 1.0), DomainError);
}

TEST_CASE("quadrature of the minimiser against the estimates") {
  const GasParameters gas(D2, 0.01, 1.0);
  CHECK(trial_energy_bound(gas, {0.0, 0.0, 0.0}) == 0.0);

  const auto zero = minimizer_profile(Potential::zero(0.5), ScatteringParams(1.0, D2), 2.0);
  const auto q0 = quad_integrals(zero, Potential::zero(0.5), 1.0, D2);
  CHECK_THAT(q0.I, WithinAbs(0.0, 1e-12));
  CHECK_THAT(q0.J, WithinAbs(0.0, 1e-12));
  CHECK_THAT(q0.K, WithinAbs(0.0, 1e-12));

  const auto core = Potential::hardcore(0.5);
  const auto f = minimizer_profile(core, ScatteringParams(1.0, D2), 2.0);
  const auto q = quad_integrals(f, core, 1.0, D2);
  CHECK_THAT(q.J, WithinRel(5.538346174, 1e-4));
  CHECK(q.I < i_bound(D2, 0.5, 2.0));
  CHECK(q.K <= k_bound(D2, 0.5, 2.0) + 1e-10);

  for (const Dimension d : {D2, D3}) {
    for (double a : {0.25, 0.5, 1.0}) {
      for (double gap : {0.5, 1.0, 2.0}) {
        const double R = a + gap;
        const auto c = Potential::hardcore(a);
        const auto g = minimizer_profile(c, ScatteringParams(1.0, d), R);
        const auto t = quad_integrals(g, c, 1.0, d);
        CHECK(t.I <= i_bound(d, a, R) + 1e-10);
        CHECK(t.K <= k_bound(d, a, R) + 1e-10);
        const GasParameters small(d, 1e-3, 1.0);
        if (small.rho * t.I < 1.0) {
          const double e = trial_energy_bound(small, t);
          CHECK(e >= 0.0);
          CHECK(std::isfinite(e));
        }
      }
    }
  }
}

TEST_CASE("hard-core radius off the profile grid is rejected") {
  const RadialProfile f({0.0, 0.3, 0.7, 1.0}, {0.0, 0.0, 0.5, 1.0});
  CHECK_THROWS_AS(quad_integrals(f, Potential::hardcore(0.5), 1.0, D2), DomainError);
}

TEST_CASE("trial energy bound") {
  const GasParameters gas(D2, 0.01, 1.0);
  const double expect = (0.055 + 2.0 / 3.0 * 0.11 * 0.11) / 0.64;
  CHECK_THAT(trial_energy_bound(gas, {20.0, 5.5, 11.0}), WithinRel(expect, 1e-14));
  CHECK_THAT(trial_energy_bound(gas, {20.0, 5.5, 11.0}), WithinAbs(0.0986, 5e-4));
  CHECK_THROWS_AS(trial_energy_bound(gas, {100.0, 1.0, 1.0}), RegimeError);
  CHECK_THAT(trial_energy_total(GasParameters(D2, 0.01, 1.0, 10), {20.0, 5.5, 11.0}), WithinRel(10 * expect, 1e-14));
  CHECK_THROWS_AS(trial_energy_total(gas, {1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(GasParameters(D2, 0.01, 1.0, 1), DomainError);
}

TEST_CASE("explicit-R energy upper bound") {
  CHECK(energy_upper_bound(D2, 0.1, 0.0, 1.0, 2.0) == 0.0);
  for (const Dimension d : {D2, D3}) {
    const double a = 0.5;
    const double R = 1.5;
    const double q = k_bound_without_radius(d, a, R);
    const double p = 1e-3 * q * (R * R - a * a);
    const double expect = 1e-3 * q / ((1 - p) * (1 - p)) * (1 + 2.0 / 3.0 * 1e-3 * q);
    CHECK_THAT(energy_upper_bound(d, 1e-3, a, 1.0, R), WithinRel(expect, 1e-14));
    const auto core = Potential::hardcore(a);
    const auto f = minimizer_profile(core, ScatteringParams(1.0, d), R);
    const auto t = quad_integrals(f, core, 1.0, d);
    CHECK(trial_energy_bound(GasParameters(d, 1e-3, 1.0), t) <= energy_upper_bound(d, 1e-3, a, 1.0, R));
  }
  CHECK_THROWS_AS(energy_upper_bound(D2, 10.0, 0.5, 1.0, 1.5), RegimeError);
}

TEST_CASE("simplified bound and its chain with the explicit bound") {
  CHECK(simplified_upper_bound(D2, 0.0, 1.0, 1.0) == 0.0);
  CHECK_THAT(simplified_upper_bound(D2, 0.005, 1.0, 1.0),
             WithinRel(16 * kPi * 0.005 * (1 + 8 * kPi * 0.005 / 3), 1e-14));
  CHECK_THAT(simplified_upper_bound(D2, 0.005, 1.0, 1.0), WithinAbs(0.2619, 1e-4));
  CHECK_THROWS_AS(simplified_upper_bound(D2, std::nextafter(1.0 / (32.0 * kPi), 1.0), 1.0, 1.0), RegimeError);

  for (const Dimension d : {D2, D3}) {
    for (double a : {0.01, 0.1, 0.25, 0.5, 1.0}) {
      for (double R0 : {a, 2.0 * a, a + 1.5}) {
        for (double rho : {1e-6, 1e-4, 1e-3}) {
          const double Y = diluteness_Y(d, rho, a);
          const double R = std::max(R0, a + 1.0);
          if (Y > y_cap(d, R0) || !(energy_upper_proviso(d, rho, a, R) < 1.0)) continue;
          CHECK(energy_upper_bound(d, rho, a, 1.0, R) <= simplified_upper_bound(d, Y, 1.0, R0) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("Y0 soundness and the quadratic-root identity") {
  for (const Dimension d : {D2, D3}) {
    for (double eps : {0.01, 0.1, 1.0}) {
      for (double mu : {0.5, 1.0, 2.0}) {
        for (double R0 : {0.5, 1.0}) {
          const auto y0 = y0_components(d, eps, mu, R0);
          for (int i = 0; i < 100; ++i) {
            const double Y = y0.value * static_cast<double>(i) / 99.0;
            CHECK(simplified_upper_bound(d, Y, mu, R0) <= eps + 1e-12);
          }
          if (y0.eps_branch_active()) {
            const auto c = simplified_coefficients(d, mu, R0);
            CHECK_THAT(c.linear * y0.value * (1.0 + c.quadratic * y0.value), WithinRel(eps, 1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("monotonicity of the simplified bound and the fraction") {
  for (const Dimension d : {D2, D3}) {
    double prev = -1.0;
    const double cap = y_cap(d, 0.5);
    for (int i = 0; i <= 50; ++i) {
      const double e = simplified_upper_bound(d, cap * i / 50.0, 1.0, 0.5);
      CHECK(e > prev);
      prev = e;
    }
  }
  CHECK(condensate_fraction_lower(0.0, 0.3) == 1.0);
  CHECK_THAT(condensate_fraction_lower(0.1, 975.0 / 4096.0), WithinAbs(1.0 - 0.1 * 4096.0 / 975.0, 1e-15));
  CHECK_THAT(condensate_fraction_lower(0.1, 975.0 / 4096.0), WithinAbs(0.5799, 1e-4));
  CHECK(condensate_fraction_lower(1.0, 0.5) == -1.0);
  CHECK(condensate_fraction_lower(0.2, 0.5) < condensate_fraction_lower(0.1, 0.5));
  CHECK(condensate_fraction_lower(0.1, 0.6) > condensate_fraction_lower(0.1, 0.5));
  CHECK_THROWS_AS(condensate_fraction_lower(0.1, 0.0), DomainError);
}

TEST_CASE("full bound evaluation") {
  BoundInputs free;
  free.rho = 0.01;
  free.a = 0.0;
  free.R0 = 0.5;
  const auto r0 = evaluate_bounds(free);
  CHECK(r0.Y == 0.0);
  CHECK(*r0.energy_upper_per_particle == 0.0);
  CHECK(*r0.explicit_energy_upper == 0.0);
  CHECK(*r0.fraction_lower == 1.0);
  CHECK_FALSE(r0.printed_variant.at("Y_product_form").has_value());

  BoundInputs in;
  in.d = 3;
  in.rho = 1e-4;
  in.a = 0.3;
  in.R0 = 0.3;
  in.gap = 0.75;
  const auto r = evaluate_bounds(in);
  CHECK(r.R_used == 1.3);
  CHECK(r.y_threshold_ok);
  CHECK(r.proviso_ok);
  CHECK(*r.explicit_energy_upper <= *r.energy_upper_per_particle + 1e-12);
  CHECK(r.printed_variant.count("E_R_with_a") == 1);
  CHECK(r.provenance.count("Y") == 1);

  in.rho = 10.0;
  const auto bad = evaluate_bounds(in);
  CHECK_FALSE(bad.y_threshold_ok);
  CHECK_FALSE(bad.energy_upper_per_particle.has_value());
  CHECK_FALSE(bad.warnings.empty());

  in.a = 0.5;
  CHECK_THROWS_AS(evaluate_bounds(in), DomainError);
}
