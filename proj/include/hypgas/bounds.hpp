#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hypgas/error.hpp"
#include "hypgas/geometry.hpp"
#include "hypgas/potential.hpp"
#include "hypgas/scattering.hpp"

/**
 * @file bounds.hpp
 * @brief Explicit energy upper bounds and condensate-fraction lower bounds.
 *
 * Everything here is a scalar inequality evaluated in closed form, plus the
 * radial quadratures I, J, K of a trial profile f:
 *
 *     I(f) = int (1 - f^2),   J(f) = int (mu f'^2 + V f^2 / 2),   K(f) = int f f'
 *
 * over H^d with the radial measure vol(S^{d-1}) sinh^{d-1}(r) dr.
 */
namespace hypgas {

inline constexpr double kPi = std::numbers::pi;

struct GasParameters {
  GasParameters(Dimension d_, double rho_, double mu_, std::optional<long> n_ = std::nullopt)
      : d(d_), rho(rho_), mu(mu_), N(n_) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("density must be positive");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
    if (N && *N < 2) throw DomainError("particle number must be at least 2");
  }

  Dimension d;
  double rho;
  double mu;
  std::optional<long> N;
};

struct IntegralTriple {
  double I = 0.0;
  double J = 0.0;
  double K = 0.0;

  friend bool operator==(const IntegralTriple&, const IntegralTriple&) = default;
};

/// Diluteness parameter: rho / ln(coth(a/2)) in d = 2, rho tanh a in d = 3; 0 for a = 0.
[[nodiscard]] inline double diluteness_Y(Dimension d, double rho, double a) {
  if (!(rho > 0.0)) throw DomainError("diluteness_Y needs rho > 0");
  if (!(a >= 0.0)) throw DomainError("diluteness_Y needs a >= 0");
  if (a == 0.0) return 0.0;
  if (d.is2()) return rho / -std::log(std::tanh(a / 2.0));
  return rho * std::tanh(a);
}

/// The d = 2 parameter as typeset, rho ln(coth(a/2)). Reported for audit; nullopt at a = 0.
[[nodiscard]] inline std::optional<double> diluteness_Y_printed_d2(double rho, double a) {
  if (a == 0.0) return std::nullopt;
  return rho * -std::log(std::tanh(a / 2.0));
}

/// Largest Y for which the simplified bound is valid.
[[nodiscard]] inline double y_cap(Dimension d, double R0) {
  if (!(R0 > 0.0)) throw DomainError("y_cap needs R0 > 0");
  const double s = (R0 + 1.0) * (R0 + 1.0);
  return d.is2() ? 1.0 / (8.0 * kPi * s) : 1.0 / (8.0 * std::exp(2.0 * R0) * s);
}

/// Coefficients of the simplified bound written as c1 Y (1 + c2 Y).
struct SimplifiedCoefficients {
  double linear;
  double quadratic;
};

[[nodiscard]] inline SimplifiedCoefficients simplified_coefficients(Dimension d, double mu, double R0) {
  const double s = d.is2() ? 1.0 : std::exp(2.0 * R0);
  return {16.0 * kPi * mu * s, 8.0 * kPi / 3.0 * s};
}

struct Y0Threshold {
  double eps_branch;
  double cap;
  double value;

  [[nodiscard]] bool eps_branch_active() const noexcept { return eps_branch <= cap; }
};

/// Both branches of Y0(eps); value is their minimum.
[[nodiscard]] inline Y0Threshold y0_components(Dimension d, double eps, double mu, double R0) {
  if (!(eps > 0.0) || !(mu > 0.0) || !(R0 > 0.0)) throw DomainError("y0_threshold needs eps, mu, R0 > 0");
  const double denom = d.is2() ? 16.0 * kPi : 16.0 * kPi * std::exp(2.0 * R0);
  // sqrt(1 + x) - 1 written as x / (sqrt(1 + x) + 1) to keep digits for small eps.
  const double x = 2.0 * eps / (3.0 * mu);
  const double eps_branch = 3.0 * (x / (std::sqrt(x + 1.0) + 1.0)) / denom;
  const double cap = y_cap(d, R0);
  return {eps_branch, cap, std::min(eps_branch, cap)};
}

/// Y0(eps): diluteness below which the per-particle energy bound is at most eps.
[[nodiscard]] inline double y0_threshold(Dimension d, double eps, double mu, double R0) {
  return y0_components(d, eps, mu, R0).value;
}

/// Closed-form upper estimate of I(f_R).
[[nodiscard]] inline double i_bound(Dimension d, double a, double R) {
  if (!(a > 0.0) || !(R > a)) throw DomainError("i_bound needs R > a > 0");
  return c_d(d, a) * sphere_area(d) / f_infinity(d, a, R) * (R * R - a * a);
}

/// Closed-form upper estimate of K(f_R), carrying the factor R.
[[nodiscard]] inline double k_bound(Dimension d, double a, double R) {
  if (!(a > 0.0) || !(R > a)) throw DomainError("k_bound needs R > a > 0");
  return c_d(d, a) * sphere_area(d) * R / f_infinity(d, a, R);
}

/// C_d(a) vol(S^{d-1}) / f_inf(R): the K estimate without the factor R. Valid
/// when int_a^R f_inf <= f_inf(R), which holds at least for R - a <= 1.
[[nodiscard]] inline double k_bound_without_radius(Dimension d, double a, double R) {
  if (!(a > 0.0) || !(R > a)) throw DomainError("k_bound_without_radius needs R > a > 0");
  return c_d(d, a) * sphere_area(d) / f_infinity(d, a, R);
}

/// Per-particle trial-state energy (1 - rho I)^{-2} (rho J + 2/3 mu (rho K)^2).
[[nodiscard]] inline double trial_energy_bound(const GasParameters& gas, const IntegralTriple& t) {
  const double rho_i = gas.rho * t.I;
  if (!(rho_i < 1.0)) throw RegimeError("trial energy bound needs rho * I < 1", rho_i, 1.0);
  const double rho_k = gas.rho * t.K;
  const double one_minus = 1.0 - rho_i;
  return (gas.rho * t.J + 2.0 / 3.0 * gas.mu * rho_k * rho_k) / (one_minus * one_minus);
}

/// N times the per-particle trial bound.
[[nodiscard]] inline double trial_energy_total(const GasParameters& gas, const IntegralTriple& t) {
  if (!gas.N) throw DomainError("trial_energy_total needs a particle number");
  return static_cast<double>(*gas.N) * trial_energy_bound(gas, t);
}

/// Smallness quantity rho * i_bound(a, R) that must stay below 1.
[[nodiscard]] inline double energy_upper_proviso(Dimension d, double rho, double a, double R) {
  if (a == 0.0) return 0.0;
  return rho * i_bound(d, a, R);
}

/**
 * Per-particle energy upper bound at explicit R >= R0, R > a:
 *
 *     rho mu q / (1 - rho q (R^2 - a^2))^2 * (1 + 2/3 rho q),  q = C_d(a) vol(S^{d-1}) / f_inf(R).
 *
 * Throws RegimeError when rho q (R^2 - a^2) >= 1.
 */
[[nodiscard]] inline double energy_upper_bound(Dimension d, double rho, double a, double mu, double R) {
  if (!(rho > 0.0) || !(mu > 0.0)) throw DomainError("energy_upper_bound needs rho, mu > 0");
  if (!(a >= 0.0) || !(R > a)) throw DomainError("energy_upper_bound needs R > a >= 0");
  if (a == 0.0) return 0.0;
  const double q = k_bound_without_radius(d, a, R);
  const double p = rho * q * (R * R - a * a);
  if (!(p < 1.0)) throw RegimeError("energy upper bound proviso violated", p, 1.0);
  return rho * mu * q / ((1.0 - p) * (1.0 - p)) * (1.0 + 2.0 / 3.0 * rho * q);
}

/// c1 Y (1 + c2 Y); throws RegimeError beyond y_cap(d, R0).
[[nodiscard]] inline double simplified_upper_bound(Dimension d, double Y, double mu, double R0) {
  if (!(Y >= 0.0) || !(mu > 0.0)) throw DomainError("simplified_upper_bound needs Y >= 0, mu > 0");
  const double cap = y_cap(d, R0);
  if (Y > cap) throw RegimeError("diluteness above the simplified-bound threshold", Y, cap);
  const auto c = simplified_coefficients(d, mu, R0);
  return c.linear * Y * (1.0 + c.quadratic * Y);
}

/// 1 - E/(N Xi); unclamped.
[[nodiscard]] inline double condensate_fraction_lower(double energy_per_particle, double gap) {
  if (!(gap > 0.0)) throw DomainError("spectral gap must be positive");
  if (!(energy_per_particle >= 0.0)) throw DomainError("energy per particle must be nonnegative");
  return 1.0 - energy_per_particle / gap;
}

namespace detail {

// Second-order derivative on nodes [i0, i1] of a possibly non-uniform grid.
inline void segment_derivative(const std::vector<double>& x, const std::vector<double>& y, std::size_t i0,
                               std::size_t i1, std::vector<double>& dy) {
  if (i1 - i0 == 1) {
    const double s = (y[i1] - y[i0]) / (x[i1] - x[i0]);
    dy[i0] = dy[i1] = s;
    return;
  }
  for (std::size_t i = i0 + 1; i < i1; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    dy[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = x[i0 + 1] - x[i0];
    const double h2 = x[i0 + 2] - x[i0 + 1];
    dy[i0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[i0] + (h1 + h2) / (h1 * h2) * y[i0 + 1] -
             h1 / (h2 * (h1 + h2)) * y[i0 + 2];
  }
  {
    const double h1 = x[i1 - 1] - x[i1 - 2];
    const double h2 = x[i1] - x[i1 - 1];
    dy[i1] = h2 / (h1 * (h1 + h2)) * y[i1 - 2] - (h1 + h2) / (h1 * h2) * y[i1 - 1] +
             (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[i1];
  }
}

// Composite Simpson over nodes [i0, i1] (non-uniform pairs; odd tail by the last parabola).
inline double segment_simpson(const std::vector<double>& x, const std::vector<double>& y, std::size_t i0,
                              std::size_t i1) {
  if (i1 - i0 == 1) return 0.5 * (x[i1] - x[i0]) * (y[i0] + y[i1]);
  double sum = 0.0;
  std::size_t i = i0;
  for (; i + 2 <= i1; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    sum += (h0 + h1) / 6.0 *
           ((2.0 - h1 / h0) * y[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
  }
  if (i < i1) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    sum += y[i + 1] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) +
           y[i] * (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0) - y[i - 1] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  }
  return sum;
}

}  // namespace detail

/**
 * @brief Radial quadratures I, J, K of a monotone profile with values in [0, 1].
 *
 * The grid is split at nodes that coincide with potential breakpoints so that
 * derivative kinks (e.g. at a hard core) are never differenced across.
 * Integrands vanish beyond the profile's outer radius, where f = 1.
 */
[[nodiscard]] inline IntegralTriple quad_integrals(const RadialProfile& profile, const Potential& V, double mu,
                                                   Dimension d) {
  const auto& x = profile.grid();
  const auto& f = profile.values();
  const double R0 = V.support_radius();
  if (profile.outer_radius() < R0) throw DomainError("profile does not cover the potential support");
  if (!(mu > 0.0)) throw DomainError("quad_integrals needs mu > 0");

  std::vector<std::size_t> cuts{0};
  for (double b : V.breakpoints()) {
    const auto it = std::lower_bound(x.begin(), x.end(), b * (1.0 - 1e-12));
    if (it != x.end() && std::abs(*it - b) <= 1e-9 * std::max(1.0, b)) {
      const auto idx = static_cast<std::size_t>(it - x.begin());
      if (idx > cuts.back() && idx < x.size() - 1) cuts.push_back(idx);
    } else if (V.is_hardcore()) {
      throw DomainError("hard-core radius is not a node of the profile grid");
    }
  }
  cuts.push_back(x.size() - 1);

  std::vector<double> df(x.size(), 0.0);
  std::vector<double> wi(x.size());
  std::vector<double> wj(x.size());
  std::vector<double> wk(x.size());
  IntegralTriple out;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const std::size_t i0 = cuts[s];
    const std::size_t i1 = cuts[s + 1];
    detail::segment_derivative(x, f, i0, i1, df);
    const double mid = 0.5 * (x[i0] + x[i1]);
    const bool inside_core = V.is_hardcore() && mid < R0;
    const double v = (V.is_hardcore() || mid >= R0) ? 0.0 : V(mid);
    for (std::size_t i = i0; i <= i1; ++i) {
      const double w = radial_weight(d, x[i]);
      const double fi = inside_core ? 0.0 : f[i];
      const double dfi = inside_core ? 0.0 : df[i];
      wi[i] = (1.0 - fi * fi) * w;
      wj[i] = (mu * dfi * dfi + 0.5 * v * fi * fi) * w;
      wk[i] = fi * dfi * w;
    }
    out.I += detail::segment_simpson(x, wi, i0, i1);
    out.J += detail::segment_simpson(x, wj, i0, i1);
    out.K += detail::segment_simpson(x, wk, i0, i1);
  }
  return out;
}

/// Inputs to a full bound evaluation for a gas of density rho.
struct BoundInputs {
  int d = 2;
  double rho = 0.0;
  double mu = 1.0;
  double eps = 0.1;
  double gap = 975.0 / 4096.0;
  double a = 0.0;
  double R0 = 1.0;
  /// Radius for the explicit-R bound; default max(R0, a + 1).
  std::optional<double> R;

  friend bool operator==(const BoundInputs&, const BoundInputs&) = default;
};

/// Diluteness, thresholds, energy upper bounds and the condensate-fraction lower bound.
struct BoundReport {
  BoundInputs inputs;
  double Y = 0.0;
  double y0 = 0.0;
  double y_cap = 0.0;
  double R_used = 0.0;
  double proviso_value = 0.0;
  bool y_threshold_ok = false;
  bool proviso_ok = false;
  /// Simplified bound c1 Y (1 + c2 Y); present iff y_threshold_ok.
  std::optional<double> energy_upper_per_particle;
  /// Explicit-R bound; present iff proviso_ok.
  std::optional<double> explicit_energy_upper;
  /// 1 - energy_upper_per_particle / gap, unclamped; present iff y_threshold_ok.
  std::optional<double> fraction_lower;
  /// Typeset formula variants that differ from the implemented ones.
  std::map<std::string, std::optional<double>> printed_variant;
  std::map<std::string, std::string> provenance;
  std::vector<std::string> warnings;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

[[nodiscard]] inline std::map<std::string, std::string> bound_provenance(Dimension d) {
  if (d.is2()) {
    return {{"Y", "rho / ln(coth(a/2))"},
            {"y0", "min{3 (sqrt(2 eps/(3 mu) + 1) - 1) / (16 pi), 1 / (8 pi (R0+1)^2)}"},
            {"energy_upper_per_particle", "16 pi mu Y (1 + 8 pi Y / 3)"},
            {"explicit_energy_upper", "rho mu q / (1 - rho q (R^2-a^2))^2 (1 + 2 rho q / 3), q = 2 pi / ln(tanh(R/2)/tanh(a/2))"},
            {"fraction_lower", "1 - E_N / (N gap)"}};
  }
  return {{"Y", "rho tanh a"},
          {"y0", "min{3 (sqrt(2 eps/(3 mu) + 1) - 1) / (16 pi e^{2 R0}), 1 / (8 e^{2 R0} (R0+1)^2)}"},
          {"energy_upper_per_particle", "16 pi mu e^{2 R0} Y (1 + 8 pi e^{2 R0} Y / 3)"},
          {"explicit_energy_upper", "rho mu q / (1 - rho q (R^2-a^2))^2 (1 + 2 rho q / 3), q = 4 pi tanh a tanh R / (tanh R - tanh a)"},
          {"fraction_lower", "1 - E_N / (N gap)"}};
}

[[nodiscard]] inline BoundReport evaluate_bounds(const BoundInputs& in) {
  const Dimension d(in.d);
  if (!(in.gap > 0.0)) throw DomainError("spectral gap must be positive");
  if (!(in.a >= 0.0) || !(in.a <= in.R0)) throw DomainError("scattering length must lie in [0, R0]");
  BoundReport rep;
  rep.inputs = in;
  rep.Y = diluteness_Y(d, in.rho, in.a);
  const auto y0 = y0_components(d, in.eps, in.mu, in.R0);
  rep.y0 = y0.value;
  rep.y_cap = y0.cap;
  rep.R_used = in.R.value_or(std::max(in.R0, in.a + 1.0));
  if (!(rep.R_used >= in.R0) || !(rep.R_used > in.a)) throw DomainError("R must satisfy R >= R0 and R > a");
  rep.provenance = bound_provenance(d);

  rep.y_threshold_ok = rep.Y <= rep.y_cap;
  if (rep.y_threshold_ok) {
    rep.energy_upper_per_particle = simplified_upper_bound(d, rep.Y, in.mu, in.R0);
    rep.fraction_lower = condensate_fraction_lower(*rep.energy_upper_per_particle, in.gap);
  } else {
    rep.warnings.push_back("Y exceeds the threshold of the simplified bound; energy and fraction omitted");
  }

  rep.proviso_value = energy_upper_proviso(d, in.rho, in.a, rep.R_used);
  rep.proviso_ok = rep.proviso_value < 1.0;
  if (rep.proviso_ok) {
    rep.explicit_energy_upper = energy_upper_bound(d, in.rho, in.a, in.mu, rep.R_used);
  } else {
    rep.warnings.push_back("explicit-R bound proviso rho * I_bound < 1 violated");
  }
  if (rep.Y >= rep.y0) rep.warnings.push_back("Y is not below Y0(eps)");

  if (d.is2()) {
    rep.printed_variant["Y_product_form"] = diluteness_Y_printed_d2(in.rho, in.a);
  } else {
    rep.printed_variant["E_R_with_a"] =
        in.a > 0.0 ? std::optional<double>(scattering_energy_printed_d3(in.a, in.mu, rep.R_used)) : std::nullopt;
  }
  return rep;
}

}  // namespace hypgas
