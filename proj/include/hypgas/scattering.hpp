#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "hypgas/error.hpp"
#include "hypgas/geometry.hpp"
#include "hypgas/potential.hpp"

/**
 * @file scattering.hpp
 * @brief Zero-energy two-body problem on H^d and the hyperbolic scattering length.
 *
 * The radial equation is
 *
 *     -mu (f'' + (d-1) coth(r) f') + V(r) f / 2 = 0,
 *
 * whose exterior (V = 0) solutions are alpha + beta F_d(r) with
 * F_2(r) = ln tanh(r/2) and F_3(r) = -coth r, both satisfying
 * F_d'(r) sinh^{d-1}(r) = 1. The scattering length a is the zero of the matched
 * exterior solution, so that the normalised exterior profile is
 * f_inf(r) / f_inf(R).
 */
namespace hypgas {

/// Kinetic coefficient and dimension of the two-body problem.
struct ScatteringParams {
  ScatteringParams(double mu_, Dimension d_) : mu(mu_), d(d_) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
  }

  double mu;
  Dimension d;

  friend bool operator==(const ScatteringParams&, const ScatteringParams&) = default;
};

/// Radial profile sampled on a strictly increasing grid over [0, R].
class RadialProfile {
 public:
  RadialProfile(std::vector<double> grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() < 2 || grid_.size() != values_.size()) {
      throw DomainError("profile needs matching grid and values with at least two nodes");
    }
    if (grid_.front() < 0.0) throw DomainError("profile grid starts below zero");
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) throw DomainError("profile grid must be strictly increasing");
    }
  }

  [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] double outer_radius() const noexcept { return grid_.back(); }
  [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

  /// Linear interpolation; the profile is continued by 1 beyond R.
  [[nodiscard]] double operator()(double r) const {
    if (r >= grid_.back()) return 1.0;
    if (r <= grid_.front()) return values_.front();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    const double t = (r - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
  }

  /// 0 <= f <= 1, non-decreasing and f(R) = 1, each up to @p tol.
  [[nodiscard]] bool satisfies_invariants(double tol = 1e-12) const {
    if (std::abs(values_.back() - 1.0) > tol) return false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] < -tol || values_[i] > 1.0 + tol) return false;
      if (i > 0 && values_[i] < values_[i - 1] - tol) return false;
    }
    return true;
  }

  friend bool operator==(const RadialProfile&, const RadialProfile&) = default;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Solver knobs. The integrator is an adaptive Dormand-Prince 5(4) pair.
struct SolverOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Regular-solution series start away from the coordinate singularity at 0.
  double start_radius = 1e-6;
  /// Minimum number of grid cells in a returned profile.
  int min_cells = 4096;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

/// Exterior harmonic function F_d with F_d'(r) sinh^{d-1}(r) = 1.
[[nodiscard]] inline double harmonic_F(Dimension d, double r) {
  if (!(r > 0.0)) throw DomainError("harmonic_F needs r > 0");
  return d.is2() ? std::log(std::tanh(r / 2.0)) : -1.0 / std::tanh(r);
}

/// f_inf(r): the exterior solution vanishing at r = a.
[[nodiscard]] inline double f_infinity(Dimension d, double a, double r) {
  if (!(a > 0.0)) throw DomainError("f_infinity needs a > 0");
  if (!(r > 0.0)) throw DomainError("f_infinity needs r > 0");
  if (d.is2()) {
    // Weak potentials give a down to the subnormal range, where the ratio overflows.
    const double ratio = std::tanh(r / 2.0) / std::tanh(a / 2.0);
    if (std::isfinite(ratio)) return std::log(ratio);
    return std::log(std::tanh(r / 2.0)) - std::log(std::tanh(a / 2.0));
  }
  return 1.0 - std::tanh(a) / std::tanh(r);
}

/// f_inf'(r), equal to C_d(a) / sinh^{d-1}(r).
[[nodiscard]] inline double f_infinity_derivative(Dimension d, double a, double r) {
  if (!(a > 0.0) || !(r > 0.0)) throw DomainError("f_infinity_derivative needs a, r > 0");
  const double s = std::sinh(r);
  return d.is2() ? 1.0 / s : std::tanh(a) / (s * s);
}

/// C_d(a) = f_inf'(r) sinh^{d-1}(r), independent of r: 1 in d = 2, tanh a in d = 3.
[[nodiscard]] inline double c_d(Dimension d, double a) {
  if (!(a >= 0.0)) throw DomainError("c_d needs a >= 0");
  return d.is2() ? 1.0 : std::tanh(a);
}

/// Two-body energy E_R of the normalised minimiser on the ball of radius R.
/// mu C_d(a) vol(S^{d-1}) / f_inf(R); zero without scattering.
[[nodiscard]] inline double scattering_energy(Dimension d, double a, double mu, double R) {
  if (!(a >= 0.0)) throw DomainError("scattering_energy needs a >= 0");
  if (!(mu > 0.0)) throw DomainError("scattering_energy needs mu > 0");
  if (!(R > 0.0) || !(R > a)) throw DomainError("scattering_energy needs R > a");
  if (a == 0.0) return 0.0;
  return mu * c_d(d, a) * sphere_area(d) / f_infinity(d, a, R);
}

/// The d = 3 closed form as typeset with a in place of tanh a. Reported only.
[[nodiscard]] inline double scattering_energy_printed_d3(double a, double mu, double R) {
  if (a == 0.0) return 0.0;
  return 4.0 * std::numbers::pi * mu * a / (1.0 - std::tanh(a) / std::tanh(R));
}

/// Raw output of the radial integration, normalised to f(r_max) = 1.
struct ZeroEnergySolution {
  RadialProfile profile;
  /// Exterior form f(r) = alpha + beta F_d(r) for r >= R0, matched at R0.
  double alpha;
  double beta;
  double r_max;
};

namespace detail {

using OdeState = std::array<double, 2>;

// Nodes per segment between consecutive breakpoints; every breakpoint is a node.
inline std::vector<double> profile_grid(const std::vector<double>& cuts, int min_cells) {
  const double r_max = cuts.back();
  const double h = r_max / static_cast<double>(std::max(min_cells, 2));
  std::vector<double> grid{cuts.front()};
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = cuts[k - 1];
    const double hi = cuts[k];
    auto n = static_cast<long>(std::ceil((hi - lo) / h - 1e-9));
    n = std::max<long>(n, 2);
    if (n % 2 != 0) ++n;
    for (long j = 1; j < n; ++j) grid.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n));
    grid.push_back(hi);
  }
  return grid;
}

}  // namespace detail

/**
 * @brief Regular solution of the zero-energy radial equation on (0, r_max].
 *
 * Step potentials are integrated cell by cell, restarting the stepper at every
 * discontinuity of V. Near the origin the regular branch starts from the
 * series f = 1 + k r^2 / (2d), f' = k r / d with k = V(0) / (2 mu). A hard
 * core imposes f = 0 on [0, R0] and starts the exterior from f(R0) = 0.
 */
[[nodiscard]] inline ZeroEnergySolution integrate_zero_energy(const Potential& V,
                                                              const ScatteringParams& params,
                                                              double r_max,
                                                              const SolverOptions& opts = {}) {
  namespace ode = boost::numeric::odeint;
  const double R0 = V.support_radius();
  if (!(r_max >= R0) || !std::isfinite(r_max)) throw DomainError("r_max must not be below the support radius");
  if (V.is_hardcore() && !(r_max > R0)) throw DomainError("r_max must exceed the hard-core radius");
  const Dimension d = params.d;
  const double dm1 = static_cast<double>(d.value() - 1);

  std::vector<double> cuts{0.0};
  for (double b : V.breakpoints()) cuts.push_back(b);
  if (r_max > R0) cuts.push_back(r_max);
  const std::vector<double> grid = detail::profile_grid(cuts, opts.min_cells);
  std::vector<double> values(grid.size(), 0.0);

  detail::OdeState x{};
  std::size_t node = 0;
  // Stored values are true values times exp(log_scale); rescaling keeps the linear ODE in range.
  double log_scale = 0.0;

  auto integrate_cell = [&](double v, double lo, double hi) {
    const double kappa = v / (2.0 * params.mu);
    auto rhs = [&](const detail::OdeState& s, detail::OdeState& ds, double r) {
      ds[0] = s[1];
      ds[1] = -dm1 / std::tanh(r) * s[1] + kappa * s[0];
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<detail::OdeState>>(opts.abs_tol, opts.rel_tol);
    double t = lo;
    while (node + 1 < grid.size() && grid[node + 1] <= hi) {
      const double t_next = grid[node + 1];
      if (t_next > t) {
        try {
          ode::integrate_adaptive(stepper, rhs, x, t, t_next, t_next - t);
        } catch (const std::exception& e) {
          throw NumericError(std::string("radial integration failed: ") + e.what());
        }
      }
      if (!std::isfinite(x[0]) || !std::isfinite(x[1])) throw NumericError("radial integration diverged");
      t = t_next;
      values[++node] = x[0];
      const double m = std::max(std::abs(x[0]), std::abs(x[1]));
      if (m > 1e100) {
        for (std::size_t j = 0; j <= node; ++j) values[j] /= m;
        x[0] /= m;
        x[1] /= m;
        log_scale -= std::log(m);
        stepper.reset();
      }
    }
  };

  if (V.is_hardcore()) {
    while (node + 1 < grid.size() && grid[node + 1] <= R0) values[++node] = 0.0;
    x = {0.0, 1.0};
  } else {
    const double kappa0 = V(0.0) / (2.0 * params.mu);
    const double rs = std::min(opts.start_radius, cuts[1] / 4.0);
    const double dd = static_cast<double>(d.value());
    values[0] = 1.0;
    // Nodes inside the series region take the series value directly.
    while (node + 1 < grid.size() && grid[node + 1] <= rs) {
      const double r = grid[++node];
      values[node] = 1.0 + kappa0 * r * r / (2.0 * dd);
    }
    x = {1.0 + kappa0 * rs * rs / (2.0 * dd), kappa0 * rs / dd};
    double lo = rs;
    for (const auto& piece : V.pieces()) {
      integrate_cell(piece.value, lo, piece.radius);
      lo = piece.radius;
    }
  }

  // Matching at R0: continuity of f and f'.
  const double beta_at_match = x[1] * sinh_power(d, R0);
  const double alpha_at_match = x[0] - beta_at_match * harmonic_F(d, R0);
  const double log_scale_at_match = log_scale;

  if (r_max > R0) integrate_cell(0.0, R0, r_max);
  if (node + 1 != grid.size()) throw NumericError("radial integration did not reach r_max");

  const double f_end = values.back();
  if (!(f_end > 0.0)) throw NumericError("zero-energy solution is not positive at r_max");
  for (double& v : values) v /= f_end;
  values.back() = 1.0;
  const double to_final = std::exp(log_scale - log_scale_at_match) / f_end;
  const double alpha = alpha_at_match * to_final;
  const double beta = beta_at_match * to_final;
  return {RadialProfile(grid, std::move(values)), alpha, beta, r_max};
}

/// Regular radial solution normalised to f(r_max) = 1.
[[nodiscard]] inline RadialProfile solve_zero_energy(const Potential& V, const ScatteringParams& params,
                                                     double r_max, const SolverOptions& opts = {}) {
  return integrate_zero_energy(V, params, r_max, opts).profile;
}

/// Scattering length and everything needed to audit it.
struct ScatteringSolution {
  double a;
  double alpha;
  double beta;
  double c_d;
  RadialProfile profile;
  ScatteringParams params;
  Potential potential;
  double r_max;
};

/// Zero of the exterior solution alpha + beta F_d; 0 when beta = 0.
[[nodiscard]] inline double scattering_length_from_matching(Dimension d, double alpha, double beta, double R0) {
  if (beta == 0.0) return 0.0;
  if (!(beta > 0.0)) throw NumericError("matching failure: negative exterior flux");
  double a = 0.0;
  if (d.is2()) {
    // alpha + beta ln tanh(a/2) = 0
    const double x = std::exp(-alpha / beta);
    if (!(x < 1.0)) throw NumericError("matching failure: no root of the exterior solution");
    a = 2.0 * std::atanh(x);
  } else {
    // alpha - beta coth a = 0
    const double t = beta / alpha;
    if (!(alpha > 0.0) || !(t < 1.0)) throw NumericError("matching failure: no root of the exterior solution");
    a = std::atanh(t);
  }
  // Only rounding may push a hard-core root past R0.
  if (a > R0 * (1.0 + 1e-10)) throw NumericError("matching failure: root beyond the support radius");
  return std::min(a, R0);
}

/// Hyperbolic scattering length of V. The profile is computed to r_max,
/// by default R0 + 1; a itself does not depend on r_max.
[[nodiscard]] inline ScatteringSolution scattering_length(const Potential& V, const ScatteringParams& params,
                                                          const SolverOptions& opts = {}, double r_max = 0.0) {
  if (r_max <= 0.0) r_max = V.support_radius() + 1.0;
  ZeroEnergySolution z = integrate_zero_energy(V, params, r_max, opts);
  const double a = scattering_length_from_matching(params.d, z.alpha, z.beta, V.support_radius());
  return {a, z.alpha, z.beta, c_d(params.d, a), std::move(z.profile), params, V, r_max};
}

/// Normalised minimiser f_R of the two-body functional on the ball of radius R.
[[nodiscard]] inline RadialProfile minimizer_profile(const Potential& V, const ScatteringParams& params, double R,
                                                     const SolverOptions& opts = {}) {
  if (!(R > V.support_radius())) throw DomainError("minimizer_profile needs R > R0");
  return solve_zero_energy(V, params, R, opts);
}

}  // namespace hypgas
