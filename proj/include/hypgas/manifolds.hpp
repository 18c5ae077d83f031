#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hypgas/bounds.hpp"
#include "hypgas/error.hpp"
#include "hypgas/geometry.hpp"
#include "hypgas/potential.hpp"
#include "hypgas/scattering.hpp"

namespace hypgas {

/// H^2 / Gamma(L), principal congruence subgroup of level L.
struct ModularSurface {
  long L = 1;
  friend bool operator==(const ModularSurface&, const ModularSurface&) = default;
};

/// H^3 / Gamma_3(L). No closed index formula is used: both the index of
/// Gamma_3(L) and vol(X_1) are supplied by the caller.
struct CongruenceQuotient3 {
  long L = 1;
  double vol_x1 = 1.0;
  long index = 1;
  friend bool operator==(const CongruenceQuotient3&, const CongruenceQuotient3&) = default;
};

/// Compact genus-g surface drawn from the set where lambda_1 >= 3/16 - alpha.
struct RandomSurface {
  long g = 2;
  double alpha = 1.0 / 16.0;
  friend bool operator==(const RandomSurface&, const RandomSurface&) = default;
};

struct CustomManifold {
  int d = 2;
  double volume = 1.0;
  double gap = 0.25;
  friend bool operator==(const CustomManifold&, const CustomManifold&) = default;
};

enum class GapPolicy { kim_sarnak, selberg_3_16, dim3_standard, random_3_16_minus_alpha, mirzakhani, custom };

[[nodiscard]] inline std::string_view to_string(GapPolicy p) noexcept {
  switch (p) {
    case GapPolicy::kim_sarnak: return "kim_sarnak";
    case GapPolicy::selberg_3_16: return "selberg_3_16";
    case GapPolicy::dim3_standard: return "dim3_standard";
    case GapPolicy::random_3_16_minus_alpha: return "random_3_16_minus_alpha";
    case GapPolicy::mirzakhani: return "mirzakhani";
    case GapPolicy::custom: return "custom";
  }
  return "?";
}

[[nodiscard]] inline GapPolicy gap_policy_from_string(std::string_view s) {
  for (auto p : {GapPolicy::kim_sarnak, GapPolicy::selberg_3_16, GapPolicy::dim3_standard,
                 GapPolicy::random_3_16_minus_alpha, GapPolicy::mirzakhani, GapPolicy::custom}) {
    if (to_string(p) == s) return p;
  }
  throw DomainError("unknown gap policy '" + std::string(s) + "'");
}

/// 1/4 - (7/64)^2 for congruence quotients of H^2.
inline constexpr double kKimSarnakGap = 975.0 / 4096.0;
inline constexpr double kSelbergGap = 3.0 / 16.0;
/// (2d - 3)/4 at d = 3.
inline constexpr double kDim3Gap = 3.0 / 4.0;

[[nodiscard]] inline double mirzakhani_gap() {
  const double l2 = std::numbers::ln2;
  const double q = l2 / (2.0 * std::numbers::pi + l2);
  return 0.25 * q * q;
}

/// Distinct prime divisors of n, memoised; safe to call concurrently.
[[nodiscard]] inline std::vector<long> prime_divisors(long n) {
  if (n < 1) throw DomainError("prime_divisors needs n >= 1");
  static std::mutex mu;
  static std::unordered_map<long, std::vector<long>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  std::vector<long> primes;
  long m = n;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) primes.push_back(m);
  std::lock_guard lock(mu);
  cache.emplace(n, primes);
  return primes;
}

/// [SL_2(Z) : Gamma(L)] = L^3 prod_{p | L} (1 - p^-2), exact in integers.
[[nodiscard]] inline std::uint64_t sl2z_index(long L) {
  if (L < 1) throw DomainError("level L must be at least 1");
  if (L > 2'000'000) throw DomainError("level L too large for exact index arithmetic");
  auto idx = static_cast<std::uint64_t>(L) * static_cast<std::uint64_t>(L) * static_cast<std::uint64_t>(L);
  for (long p : prime_divisors(L)) {
    const auto p2 = static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p);
    idx = idx / p2 * (p2 - 1);
  }
  return idx;
}

class ManifoldModel {
 public:
  using Family = std::variant<ModularSurface, CongruenceQuotient3, RandomSurface, CustomManifold>;

  explicit ManifoldModel(Family family, std::optional<GapPolicy> policy = std::nullopt)
      : family_(std::move(family)), policy_(policy.value_or(default_policy(family_))) {
    validate();
  }

  [[nodiscard]] static GapPolicy default_policy(const Family& f) {
    switch (f.index()) {
      case 0: return GapPolicy::kim_sarnak;
      case 1: return GapPolicy::dim3_standard;
      case 2: return GapPolicy::random_3_16_minus_alpha;
      default: return GapPolicy::custom;
    }
  }

  [[nodiscard]] const Family& family() const noexcept { return family_; }
  [[nodiscard]] GapPolicy policy() const noexcept { return policy_; }

  [[nodiscard]] Dimension dimension() const {
    if (const auto* c = std::get_if<CustomManifold>(&family_)) return Dimension(c->d);
    return Dimension(std::holds_alternative<CongruenceQuotient3>(family_) ? 3 : 2);
  }

  [[nodiscard]] std::string_view family_name() const noexcept {
    constexpr std::string_view names[] = {"modular", "congruence3", "random", "custom"};
    return names[family_.index()];
  }

  friend bool operator==(const ManifoldModel&, const ManifoldModel&) = default;

 private:
  void validate() const {
    std::visit(
        [this](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ModularSurface>) {
            if (m.L < 1) throw DomainError("modular surface level L must be at least 1");
            require(policy_ == GapPolicy::kim_sarnak || policy_ == GapPolicy::selberg_3_16);
          } else if constexpr (std::is_same_v<T, CongruenceQuotient3>) {
            if (m.L < 1) throw DomainError("congruence level L must be at least 1");
            if (m.index < 1) throw DomainError("subgroup index must be at least 1");
            if (!(m.vol_x1 > 0.0) || !std::isfinite(m.vol_x1)) throw DomainError("vol(X_1) must be positive");
            require(policy_ == GapPolicy::dim3_standard);
          } else if constexpr (std::is_same_v<T, RandomSurface>) {
            if (m.g < 2) throw DomainError("genus must be at least 2");
            if (!(m.alpha > 0.0) || !(m.alpha <= kSelbergGap)) throw DomainError("alpha must lie in (0, 3/16]");
            require(policy_ == GapPolicy::random_3_16_minus_alpha || policy_ == GapPolicy::mirzakhani);
            if (policy_ == GapPolicy::random_3_16_minus_alpha && !(kSelbergGap - m.alpha > 0.0)) {
              throw DomainError("alpha = 3/16 leaves no spectral gap");
            }
          } else {
            (void)Dimension(m.d);
            if (!(m.volume > 0.0) || !std::isfinite(m.volume)) throw DomainError("volume must be positive");
            if (!(m.gap > 0.0) || !std::isfinite(m.gap)) throw DomainError("gap must be positive");
            require(policy_ == GapPolicy::custom);
          }
        },
        family_);
  }

  void require(bool ok) const {
    if (!ok) {
      throw DomainError("gap policy " + std::string(to_string(policy_)) + " is not valid for a " +
                        std::string(family_name()) + " manifold");
    }
  }

  Family family_;
  GapPolicy policy_;
};

[[nodiscard]] inline double volume(const ManifoldModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ModularSurface>) {
          return static_cast<double>(sl2z_index(m.L)) * std::numbers::pi / 3.0;
        } else if constexpr (std::is_same_v<T, CongruenceQuotient3>) {
          return static_cast<double>(m.index) * m.vol_x1;
        } else if constexpr (std::is_same_v<T, RandomSurface>) {
          // Gauss-Bonnet.
          return 2.0 * std::numbers::pi * (2.0 * static_cast<double>(m.g) - 2.0);
        } else {
          return m.volume;
        }
      },
      model.family());
}

/// Lower bound Xi on the first nonzero Laplace eigenvalue, per the model's policy.
[[nodiscard]] inline double spectral_gap(const ManifoldModel& model) {
  switch (model.policy()) {
    case GapPolicy::kim_sarnak: return kKimSarnakGap;
    case GapPolicy::selberg_3_16: return kSelbergGap;
    case GapPolicy::dim3_standard: return kDim3Gap;
    case GapPolicy::random_3_16_minus_alpha:
      return kSelbergGap - std::get<RandomSurface>(model.family()).alpha;
    case GapPolicy::mirzakhani: return mirzakhani_gap();
    case GapPolicy::custom: return std::get<CustomManifold>(model.family()).gap;
  }
  throw DomainError("unknown gap policy");
}

[[nodiscard]] inline std::string gap_citation(GapPolicy p) {
  switch (p) {
    case GapPolicy::kim_sarnak: return "Kim-Sarnak: lambda_1 >= 1/4 - (7/64)^2 = 975/4096 for congruence quotients";
    case GapPolicy::selberg_3_16: return "Selberg: lambda_1 >= 3/16 for congruence quotients";
    case GapPolicy::dim3_standard: return "lambda_1 >= (2d-3)/4 = 3/4 for congruence quotients of H^3";
    case GapPolicy::random_3_16_minus_alpha: return "lambda_1 >= 3/16 - alpha with Weil-Petersson probability -> 1";
    case GapPolicy::mirzakhani: return "Mirzakhani: lambda_1 >= (1/4)(ln 2/(2 pi + ln 2))^2 with probability -> 1";
    case GapPolicy::custom: return "user-supplied gap";
  }
  return {};
}

/// Audit trail from (model, N, V, mu, eps) to a guaranteed condensate fraction.
struct CondensateCertificate {
  ManifoldModel model;
  long N = 0;
  Potential potential;
  double mu = 1.0;
  double eps = 0.1;

  double volume = 0.0;
  double rho = 0.0;
  double a = 0.0;
  double R0 = 0.0;
  double Y = 0.0;
  double gap = 0.0;
  /// Y0(gap * eps), the corollary threshold.
  double y0 = 0.0;
  double y_cap = 0.0;
  bool y_threshold_ok = false;
  bool corollary_condition_met = false;
  /// Simplified energy bound; present iff y_threshold_ok.
  std::optional<double> energy_upper{};
  /// max(0, 1 - energy_upper / gap); 0 when no energy bound is available.
  double fraction_lower = 0.0;
  bool direct_route_certified = false;
  bool certified = false;
  std::optional<std::string> failure_reason{};
  std::map<std::string, std::optional<double>> printed_variant{};
  std::map<std::string, std::string> provenance{};

  friend bool operator==(const CondensateCertificate&, const CondensateCertificate&) = default;
};

/**
 * @brief Certify condensation of at least 1 - eps for N particles on @p model.
 *
 * Both routes are evaluated: the direct route bounds the fraction by
 * 1 - simplified_upper_bound(Y) / Xi, the corollary route checks
 * Y < Y0(Xi eps). A regime failure yields certified = false with a reason.
 */
[[nodiscard]] inline CondensateCertificate certify_bec(const ManifoldModel& model, long N, const Potential& V,
                                                       double mu, double eps, const SolverOptions& opts = {}) {
  if (N < 2) throw DomainError("certify_bec needs N >= 2");
  if (!(mu > 0.0)) throw DomainError("certify_bec needs mu > 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("certify_bec needs eps > 0");
  const Dimension d = model.dimension();

  CondensateCertificate c{.model = model, .N = N, .potential = V, .mu = mu, .eps = eps};
  c.volume = volume(model);
  c.rho = static_cast<double>(N) / c.volume;
  c.a = scattering_length(V, ScatteringParams(mu, d), opts).a;
  c.R0 = V.support_radius();
  c.Y = diluteness_Y(d, c.rho, c.a);
  c.gap = spectral_gap(model);
  c.y0 = y0_threshold(d, c.gap * eps, mu, c.R0);
  c.y_cap = y_cap(d, c.R0);
  c.y_threshold_ok = c.Y <= c.y_cap;
  c.corollary_condition_met = c.Y < c.y0;

  if (c.y_threshold_ok) {
    c.energy_upper = simplified_upper_bound(d, c.Y, mu, c.R0);
    c.fraction_lower = std::max(0.0, condensate_fraction_lower(*c.energy_upper, c.gap));
    c.direct_route_certified = c.fraction_lower >= 1.0 - eps;
  }
  c.certified = c.direct_route_certified;
  if (!c.y_threshold_ok) {
    c.failure_reason = "diluteness Y exceeds the validity threshold of the energy bound";
  } else if (!c.certified) {
    c.failure_reason = "energy bound too large: guaranteed fraction below 1 - eps";
  }

  const double tail = c.a > 0.0 ? std::log(std::tanh(c.a)) : 0.0;
  if (c.a > 0.0) {
    // Corollary conditions as typeset: rho ln(coth a) in d = 2, rho ln tanh a in d = 3.
    c.printed_variant["corollary_Y"] = d.is2() ? -c.rho * tail : c.rho * tail;
  } else {
    c.printed_variant["corollary_Y"] = std::nullopt;
  }
  if (d.is2()) c.printed_variant["Y_product_form"] = diluteness_Y_printed_d2(c.rho, c.a);

  c.provenance = bound_provenance(d);
  c.provenance["gap"] = gap_citation(model.policy());
  c.provenance["volume"] = std::holds_alternative<ModularSurface>(model.family())
                               ? "[SL2(Z):Gamma(L)] pi/3, index L^3 prod_{p|L}(1 - p^-2)"
                           : std::holds_alternative<RandomSurface>(model.family()) ? "Gauss-Bonnet 2 pi (2g - 2)"
                           : std::holds_alternative<CongruenceQuotient3>(model.family()) ? "index * vol(X_1), both supplied"
                                                                                         : "supplied";
  c.provenance["corollary"] = "certified iff Y < Y0(gap * eps)";
  return c;
}

}  // namespace hypgas
