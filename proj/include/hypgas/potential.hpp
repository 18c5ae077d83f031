#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypgas/error.hpp"

namespace hypgas {

enum class PotentialKind { hardcore, piecewise_constant, sampled };

[[nodiscard]] inline std::string_view to_string(PotentialKind k) noexcept {
  switch (k) {
    case PotentialKind::hardcore: return "hardcore";
    case PotentialKind::piecewise_constant: return "piecewise";
    case PotentialKind::sampled: return "sampled";
  }
  return "?";
}

[[nodiscard]] inline PotentialKind potential_kind_from_string(std::string_view s) {
  if (s == "hardcore") return PotentialKind::hardcore;
  if (s == "piecewise" || s == "piecewise_constant") return PotentialKind::piecewise_constant;
  if (s == "sampled") return PotentialKind::sampled;
  throw DomainError("unknown potential kind '" + std::string(s) + "'");
}

/// One cell of a step potential: V = value on [previous radius, radius).
struct PotentialPiece {
  double radius;
  double value;

  friend bool operator==(const PotentialPiece&, const PotentialPiece&) = default;
};

/**
 * @brief Radial, compactly supported, nonnegative two-body interaction.
 *
 * Step potentials are stored as cells [r_{i-1}, r_i) with r_{-1} = 0; the last
 * radius is the support radius R0 and V vanishes from R0 on. A hardcore
 * potential stores no values: it is the constraint f = 0 on [0, R0].
 */
class Potential {
 public:
  static Potential hardcore(double r0) {
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw DomainError("hardcore radius must be positive");
    return Potential(PotentialKind::hardcore, r0, {});
  }

  static Potential piecewise(std::vector<PotentialPiece> pieces) {
    return from_pieces(PotentialKind::piecewise_constant, std::move(pieces));
  }

  static Potential sampled(std::vector<PotentialPiece> samples) {
    return from_pieces(PotentialKind::sampled, std::move(samples));
  }

  /// V = value on [0, r0).
  static Potential constant(double r0, double value) { return piecewise({{r0, value}}); }

  /// V identically zero, nominal support radius r0.
  static Potential zero(double r0) { return constant(r0, 0.0); }

  static Potential from_pieces(PotentialKind kind, std::vector<PotentialPiece> pieces) {
    if (kind == PotentialKind::hardcore) {
      throw DomainError("hardcore potentials carry no pieces; use Potential::hardcore");
    }
    if (pieces.empty()) throw DomainError("step potential needs at least one piece");
    double prev = 0.0;
    for (const auto& p : pieces) {
      if (!std::isfinite(p.radius) || !(p.radius > prev)) {
        throw DomainError("potential radii must be positive and strictly increasing");
      }
      if (!std::isfinite(p.value) || p.value < 0.0) {
        throw DomainError("potential values must be finite and nonnegative");
      }
      prev = p.radius;
    }
    const double r0 = pieces.back().radius;
    return Potential(kind, r0, std::move(pieces));
  }

  [[nodiscard]] PotentialKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_hardcore() const noexcept { return kind_ == PotentialKind::hardcore; }
  [[nodiscard]] double support_radius() const noexcept { return r0_; }
  [[nodiscard]] const std::vector<PotentialPiece>& pieces() const noexcept { return pieces_; }

  /// True when V vanishes identically (no scattering).
  [[nodiscard]] bool is_zero() const noexcept {
    return !is_hardcore() &&
           std::all_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.value == 0.0; });
  }

  /// V(r); +infinity inside a hard core.
  [[nodiscard]] double operator()(double r) const {
    if (r < 0.0) throw DomainError("potential evaluated at negative radius");
    if (r >= r0_) return 0.0;
    if (is_hardcore()) return std::numeric_limits<double>::infinity();
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r,
                               [](double x, const PotentialPiece& p) { return x < p.radius; });
    return it->value;
  }

  /// Radii where V may jump, excluding 0 and including R0.
  [[nodiscard]] std::vector<double> breakpoints() const {
    if (is_hardcore()) return {r0_};
    std::vector<double> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) out.push_back(p.radius);
    return out;
  }

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  Potential(PotentialKind kind, double r0, std::vector<PotentialPiece> pieces)
      : kind_(kind), r0_(r0), pieces_(std::move(pieces)) {}

  PotentialKind kind_;
  double r0_;
  std::vector<PotentialPiece> pieces_;
};

}  // namespace hypgas
