#include <cmath>

#include "catch_amalgamated.hpp"

#include "hypgas/oracles.hpp"

using namespace hypgas;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const Dimension D2(2);
const Dimension D3(3);
}  // namespace

TEST_CASE("free functional: constant minimiser, zero energy") {
  for (const Dimension d : {D2, D3}) {
    const auto r = discrete_minimizer(Potential::zero(0.5), ScatteringParams(1.0, d), 2.0, 1e-3);
    for (double v : r.profile.values()) CHECK_THAT(v, WithinAbs(1.0, 1e-10));
    CHECK_THAT(r.energy, WithinAbs(0.0, 1e-18));
  }
}

TEST_CASE("preconditions") {
  const ScatteringParams p(1.0, D2);
  CHECK_THROWS_AS(discrete_minimizer(Potential::hardcore(0.5), p, 0.5, 1e-3), DomainError);
  CHECK_THROWS_AS(discrete_minimizer(Potential::hardcore(0.5), p, 2.0, 0.03), DomainError);
  CHECK_THROWS_AS(discrete_minimizer(Potential::hardcore(0.5), p, 2.0, 0.0), DomainError);
}

TEST_CASE("extrapolated oracle energy reproduces the closed form") {
  for (const Dimension d : {D2, D3}) {
    const auto r = discrete_minimizer_converged(Potential::hardcore(0.5), ScatteringParams(1.0, d), 2.0, 1e-3);
    const double exact = scattering_energy(d, 0.5, 1.0, 2.0);
    CHECK_THAT(*r.extrapolated_energy, WithinRel(exact, 1e-4));
    REQUIRE(r.convergence.size() == 3);
    CHECK(r.convergence[0].energy >= r.convergence[1].energy);
    CHECK(r.convergence[1].energy >= r.convergence[2].energy);
    CHECK(order_at_least(r.estimated_order, 2.0));
  }
  CHECK_THAT(scattering_energy(D2, 0.5, 1.0, 2.0), WithinAbs(5.538, 1e-3));
}

TEST_CASE("energy inversion") {
  for (const Dimension d : {D2, D3}) {
    for (double a : {0.1, 0.5, 1.5}) {
      const double e = scattering_energy(d, a, 1.3, a + 0.7);
      CHECK_THAT(scattering_length_from_energy(d, e, 1.3, a + 0.7), WithinRel(a, 1e-12));
    }
    CHECK(scattering_length_from_energy(d, 0.0, 1.0, 2.0) == 0.0);
  }
}

TEST_CASE("oracle scattering length of the d = 3 step potential") {
  // V = 4 on [0, 1), mu = 1: the frozen value also used in test_scattering.
  constexpr double kGoldenA = 0.39258647763;
  const auto V = Potential::constant(1.0, 4.0);
  const auto r = discrete_minimizer_converged(V, ScatteringParams(1.0, D3), 3.0, 1e-3);
  CHECK(order_at_least(r.estimated_order, 2.0));
  CHECK_THAT(scattering_length_from_energy(D3, *r.extrapolated_energy, 1.0, 3.0), WithinAbs(kGoldenA, 1e-7));
  CHECK_THAT(scattering_length(V, ScatteringParams(1.0, D3)).a, WithinAbs(kGoldenA, 1e-9));
}

TEST_CASE("oracle grid: energy, order and profile") {
  for (const auto& cs : default_oracle_grid()) {
    const auto r = check_oracle_case(cs);
    INFO("d=" << cs.d << " a=" << cs.a << " R=" << cs.R << " order=" << r.order.value_or(-1.0));
    CHECK(r.rel_error <= 1e-4);
    CHECK(r.profile_deviation <= 1e-4);
    CHECK(order_at_least(r.order, 2.0));
    CHECK(r.passed);
  }
}

TEST_CASE("soft potential profiles agree with the solver") {
  const auto V = Potential::piecewise({{0.3, 20.0}, {0.8, 2.0}});
  for (const Dimension d : {D2, D3}) {
    const ScatteringParams p(0.7, d);
    const auto fd = discrete_minimizer(V, p, 2.0, 1e-4);
    const auto ode = minimizer_profile(V, p, 2.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < fd.profile.size(); ++i) {
      dev = std::max(dev, std::abs(fd.profile.values()[i] - ode(fd.profile.grid()[i])));
    }
    CHECK(dev <= 1e-4);
  }
}

TEST_CASE("inequality report") {
  const auto empty = inequality_report({});
  CHECK(empty.cases.empty());
  CHECK(empty.passed);

  const auto skipped = inequality_report({{2, 0.5, 0.5, 1e-3, 1.0, 0.5}});
  REQUIRE(skipped.cases.size() == 1);
  CHECK(skipped.cases[0].skipped);
  CHECK_FALSE(skipped.cases[0].reason.empty());
  CHECK(skipped.passed);

  const auto grid = default_inequality_grid();
  CHECK(grid.size() == 18);
  const auto rep = inequality_report(grid);
  CHECK(rep.passed);
  for (const auto& c : rep.cases) {
    CHECK_FALSE(c.skipped);
    for (const auto& k : c.checks) {
      INFO(k.name << " d=" << c.input.d << " a=" << c.input.a << " R=" << c.input.R << " slack=" << k.slack);
      if (!k.informational) CHECK(k.slack >= -1e-10);
    }
  }
}
