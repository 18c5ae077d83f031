#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "hypgas/error.hpp"

/**
 * @file geometry.hpp
 * @brief Hyperbolic-space primitives at curvature -1.
 *
 * H^2 is represented in the upper half-plane, H^3 in the hyperboloid model
 * {z0 > 0, z0^2 - z1^2 - z2^2 - z3^2 = 1}. All lengths are dimensionless
 * hyperbolic lengths.
 */
namespace hypgas {

/// Spatial dimension; only 2 and 3 are supported.
class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d != 2 && d != 3) {
      throw DomainError("dimension must be 2 or 3, got " + std::to_string(d));
    }
  }

  [[nodiscard]] int value() const noexcept { return d_; }
  [[nodiscard]] bool is2() const noexcept { return d_ == 2; }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

/// Point of the upper half-plane, z = z1 + i z2 with z2 > 0.
class PointH2 {
 public:
  PointH2(double z1, double z2) : z1_(z1), z2_(z2) {
    if (!(z2 > 0.0) || !std::isfinite(z1) || !std::isfinite(z2)) {
      throw DomainError("half-plane point needs finite z1 and z2 > 0");
    }
  }

  [[nodiscard]] double z1() const noexcept { return z1_; }
  [[nodiscard]] double z2() const noexcept { return z2_; }

  friend bool operator==(const PointH2&, const PointH2&) = default;

 private:
  double z1_;
  double z2_;
};

/// Point of the upper sheet of the hyperboloid, rescaled onto q(z) = 1.
class PointH3 {
 public:
  PointH3(double z0, double z1, double z2, double z3) {
    const double q = z0 * z0 - z1 * z1 - z2 * z2 - z3 * z3;
    if (!(z0 > 0.0) || !(q > 0.0) || !std::isfinite(q)) {
      throw DomainError("hyperboloid point needs z0 > 0 and a timelike vector");
    }
    const double s = 1.0 / std::sqrt(q);
    z1_ = z1 * s;
    z2_ = z2 * s;
    z3_ = z3 * s;
    // z0 recomputed from the spatial part so q = 1 to rounding.
    z0_ = std::sqrt(1.0 + z1_ * z1_ + z2_ * z2_ + z3_ * z3_);
  }

  /// Lift of a spatial vector onto the hyperboloid.
  static PointH3 from_spatial(double z1, double z2, double z3) {
    if (!std::isfinite(z1) || !std::isfinite(z2) || !std::isfinite(z3)) {
      throw DomainError("hyperboloid point needs finite coordinates");
    }
    PointH3 p;
    p.z1_ = z1;
    p.z2_ = z2;
    p.z3_ = z3;
    p.z0_ = std::sqrt(1.0 + z1 * z1 + z2 * z2 + z3 * z3);
    return p;
  }

  [[nodiscard]] double z0() const noexcept { return z0_; }
  [[nodiscard]] double z1() const noexcept { return z1_; }
  [[nodiscard]] double z2() const noexcept { return z2_; }
  [[nodiscard]] double z3() const noexcept { return z3_; }

  /// Lorentz form z0^2 - z1^2 - z2^2 - z3^2.
  [[nodiscard]] double lorentz_norm() const noexcept {
    return z0_ * z0_ - z1_ * z1_ - z2_ * z2_ - z3_ * z3_;
  }

  friend bool operator==(const PointH3&, const PointH3&) = default;

 private:
  PointH3() = default;

  double z0_{1.0};
  double z1_{0.0};
  double z2_{0.0};
  double z3_{0.0};
};

using Point = std::variant<PointH2, PointH3>;

[[nodiscard]] inline double geodesic_distance(const PointH2& p, const PointH2& q) {
  // cosh d = 1 + |p - q|^2 / (2 p2 q2), rewritten through asinh for small d.
  const double dx = p.z1() - q.z1();
  const double dy = p.z2() - q.z2();
  const double chord = std::hypot(dx, dy);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.z2() * q.z2())));
}

[[nodiscard]] inline double geodesic_distance(const PointH3& p, const PointH3& q) {
  // cosh d - 1 = (|dx|^2 - dz0^2) / 2 = 2 sinh^2(d/2).
  const double d0 = p.z0() - q.z0();
  const double d1 = p.z1() - q.z1();
  const double d2 = p.z2() - q.z2();
  const double d3 = p.z3() - q.z3();
  double s = (d1 * d1 + d2 * d2 + d3 * d3 - d0 * d0) / 4.0;
  if (s < 0.0) s = 0.0;
  const double dist = 2.0 * std::asinh(std::sqrt(s));
  if (dist < 1.0) return dist;
  // Far apart the difference form squares large components; the pairing is better there.
  const double pairing = p.z0() * q.z0() - p.z1() * q.z1() - p.z2() * q.z2() - p.z3() * q.z3();
  return std::acosh(std::max(pairing, 1.0));
}

/// Distance for points carried as a model-tagged variant. Throws if either
/// point does not belong to the model of @p d.
[[nodiscard]] inline double geodesic_distance(Dimension d, const Point& p, const Point& q) {
  const std::size_t want = d.is2() ? 0 : 1;
  if (p.index() != want || q.index() != want) {
    throw DomainError("point model does not match dimension " + std::to_string(d.value()));
  }
  if (d.is2()) return geodesic_distance(std::get<PointH2>(p), std::get<PointH2>(q));
  return geodesic_distance(std::get<PointH3>(p), std::get<PointH3>(q));
}

/// vol(S^{d-1}): 2 pi for d = 2, 4 pi for d = 3.
[[nodiscard]] inline double sphere_area(Dimension d) noexcept {
  return d.is2() ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

/// sinh^{d-1}(r), the polar-coordinate Jacobian without the sphere factor.
[[nodiscard]] inline double sinh_power(Dimension d, double r) noexcept {
  const double s = std::sinh(r);
  return d.is2() ? s : s * s;
}

/// Radial volume density vol(S^{d-1}) sinh^{d-1}(r).
[[nodiscard]] inline double radial_weight(Dimension d, double r) {
  if (!(r >= 0.0)) throw DomainError("radial_weight: negative radius");
  return sphere_area(d) * sinh_power(d, r);
}

/// Volume of the geodesic ball of radius R.
[[nodiscard]] inline double ball_volume(Dimension d, double R) {
  if (!(R >= 0.0)) throw DomainError("ball_volume: negative radius");
  if (d.is2()) {
    // 2 pi (cosh R - 1) = 4 pi sinh^2(R/2), no cancellation near 0.
    const double s = std::sinh(R / 2.0);
    return 4.0 * std::numbers::pi * s * s;
  }
  if (R < 0.1) {
    // sinh x - x = x^3/3! + x^5/5! + ... with x = 2R; truncation below 1e-16 relative.
    const double x = 2.0 * R;
    const double x2 = x * x;
    const double tail = 1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (1.0 / 5040.0 + x2 * (1.0 / 362880.0 + x2 / 39916800.0)));
    return std::numbers::pi * x * x2 * tail;
  }
  return std::numbers::pi * (std::sinh(2.0 * R) - 2.0 * R);
}

}  // namespace hypgas
