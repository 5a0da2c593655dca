#pragma once

// Hypothesis sets of the reverse inequalities, expressed as signed margins
// (>= 0 means the hypothesis holds) so callers can probe boundaries.

#include <cmath>

#include "revineq/scalar_space.hpp"

namespace revineq {

/// RealAxis anchors a constraint at a, ImagAxis at i*a.
enum class Axis { Real, Imag };

inline const char* to_string(Axis a) { return a == Axis::Real ? "real" : "imag"; }

/// The set {x : |r x - s axis(a)| <= p}, a ball of center (s/r) axis(a) and
/// radius p/r.
struct DiskConstraint {
  double r;
  double s;
  double p;
  Axis axis;
  UnitVector anchor;

  DiskConstraint(double r_, double s_, double p_, Axis axis_, UnitVector anchor_)
      : r(r_), s(s_), p(p_), axis(axis_), anchor(std::move(anchor_)) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(r) || !positive(s) || !positive(p)) {
      throw StructuralError("disk constraint requires finite r, s, p > 0");
    }
  }
};

/// The set {x : Re<M axis(a) - x, x - m axis(a)> >= 0}.
struct BallConstraint {
  double m;
  double M;
  Axis axis;
  UnitVector anchor;

  BallConstraint(double m_, double M_, Axis axis_, UnitVector anchor_)
      : m(m_), M(M_), axis(axis_), anchor(std::move(anchor_)) {
    if (!std::isfinite(m) || !std::isfinite(M) || !(m > 0.0) || !(M >= m)) {
      throw StructuralError("ball constraint requires finite M >= m > 0");
    }
  }

  [[nodiscard]] double center_scale() const { return 0.5 * (m + M); }
  [[nodiscard]] double radius() const { return 0.5 * (M - m); }
};

/// Signed slack of a hypothesis.  `scale` is the magnitude of the quantities
/// compared, used to apply the relative part of a tolerance.
struct Margin {
  double value = 0.0;
  double scale = 0.0;

  [[nodiscard]] bool holds(const Tolerance& tol) const { return value >= -tol.allowance(scale, 0.0); }
};

/// a for Axis::Real, i*a for Axis::Imag.
inline Vector axis_vector(const UnitVector& anchor, Axis axis) {
  if (axis == Axis::Real) return anchor.vec();
  if (anchor.field() == Field::Real) {
    throw StructuralError("imaginary-axis constraint requires complex field");
  }
  return kImaginaryUnit * anchor.vec();
}

namespace detail {

inline void require_axis_field(const Vector& x, const UnitVector& anchor, Axis axis) {
  if (axis == Axis::Imag && x.field() == Field::Real) {
    throw StructuralError("imaginary-axis constraint requires complex field");
  }
  x.require_compatible(anchor.vec());
}

}  // namespace detail

inline Margin disk_margin(const Vector& x, const DiskConstraint& c) {
  detail::require_axis_field(x, c.anchor, c.axis);
  const double dist = norm(c.r * x - c.s * axis_vector(c.anchor, c.axis));
  return {c.p - dist, std::max(c.p, dist)};
}

inline Margin ball_margin(const Vector& x, const BallConstraint& c) {
  detail::require_axis_field(x, c.anchor, c.axis);
  const Vector ax = axis_vector(c.anchor, c.axis);
  const double value = inner(c.M * ax - x, x - c.m * ax).real();
  const double nx = norm(x);
  return {value, nx * nx + c.m * c.M};
}

/// The "or equivalently" form |x - ((m+M)/2) axis(a)| <= (M-m)/2.  Same set
/// as ball_margin, different function.
inline Margin ball_margin_equiv(const Vector& x, const BallConstraint& c) {
  detail::require_axis_field(x, c.anchor, c.axis);
  const double dist = norm(x - c.center_scale() * axis_vector(c.anchor, c.axis));
  return {c.radius() - dist, std::max(c.radius(), dist)};
}

/// Diaz-Metcalf angle condition rho <= Re<x, a>/|x|.
inline Margin dm_margin(const Vector& x, const UnitVector& a, double rho,
                        const Tolerance& tol = {}) {
  if (!std::isfinite(rho) || rho < 0.0) throw StructuralError("dm_margin requires rho >= 0");
  x.require_compatible(a.vec());
  const double nx = norm(x);
  if (nx <= tol.nonzero) throw StructuralError("dm_margin is undefined for the zero vector");
  return {inner(x, a.vec()).real() / nx - rho, 1.0};
}

/// sqrt((r alpha)^2 + s^2) - p, the slack in the admissible range of p.
inline double p_feasibility_margin(const VectorFamily& family, const DiskConstraint& c) {
  const double ra = c.r * family.alpha_min();
  return std::sqrt(ra * ra + c.s * c.s) - c.p;
}

/// p <= sqrt((r alpha)^2 + s^2), or strictly less when `strict`.  Exact
/// comparison, no tolerance.
inline bool p_feasible(const VectorFamily& family, const DiskConstraint& c, bool strict) {
  const double ra = c.r * family.alpha_min();
  const double bound = std::sqrt(ra * ra + c.s * c.s);
  return strict ? c.p < bound : c.p <= bound;
}

}  // namespace revineq
