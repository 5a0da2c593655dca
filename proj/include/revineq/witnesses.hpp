#pragma once

// Samplers for hypothesis-satisfying families, projections onto the
// constraint sets, and exact equality constructions.
//
// Randomness: std::mt19937_64 engines, one per sample index, seeded by the
// SplitMix64 finalizer applied to (seed, index).  Uniform doubles take the
// top 53 bits of a draw; normals come from the Marsaglia polar method.  Both
// transforms are written out here rather than taken from <random>
// distributions so that output is identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "revineq/bounds.hpp"
#include "revineq/constraints.hpp"
#include "revineq/scalar_space.hpp"

namespace revineq {

struct Seed {
  std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of substream `index` under `seed`; order-independent.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline constexpr int kMaxResampleAttempts = 1000;

/// Gaussian vector; isotropic over the real dimension (2*dim when complex).
inline Vector gaussian_vector(std::size_t dim, Field field, Rng& rng) {
  std::vector<Scalar> c(dim);
  for (auto& z : c) {
    const double re = rng.normal();
    const double im = field == Field::Complex ? rng.normal() : 0.0;
    z = Scalar{re, im};
  }
  return Vector(std::move(c), field);
}

inline UnitVector random_unit_vector(std::size_t dim, Field field, Rng& rng) {
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    Vector g = gaussian_vector(dim, field, rng);
    if (norm(g) > 1e-6) return UnitVector::normalized(g);
  }
  throw StructuralError("could not draw a random direction");
}

/// Uniform point in the closed ball of given center and radius.
inline Vector uniform_in_ball(const Vector& center, double radius, Rng& rng) {
  const std::size_t real_dim = center.dim() * (center.field() == Field::Complex ? 2 : 1);
  const UnitVector dir = random_unit_vector(center.dim(), center.field(), rng);
  const double rho = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(real_dim));
  return center + rho * dir.vec();
}

/// A unit vector orthogonal to a (dimension >= 2).
inline UnitVector orthogonal_unit(const UnitVector& a) {
  if (a.dim() < 2) throw StructuralError("no orthogonal direction in dimension 1");
  std::size_t j = 0;
  for (std::size_t i = 1; i < a.dim(); ++i) {
    if (std::abs(a.vec()[i]) < std::abs(a.vec()[j])) j = i;
  }
  const Vector e = Vector::basis(a.dim(), j, a.field());
  return UnitVector::normalized(e - inner(e, a.vec()) * a.vec());
}

/// Gram-Schmidt on Gaussian draws.
inline OrthonormalFrame random_orthonormal_frame(std::size_t dim, std::size_t m, Field field,
                                                 Rng& rng) {
  if (m == 0 || m > dim) throw StructuralError("frame size must be in [1, dim]");
  std::vector<UnitVector> out;
  while (out.size() < m) {
    Vector g = gaussian_vector(dim, field, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : out) g -= inner(g, u.vec()) * u.vec();
    }
    if (norm(g) > 1e-6) out.push_back(UnitVector::normalized(g));
  }
  return OrthonormalFrame(std::move(out));
}

using SampleConstraint = std::variant<DiskConstraint, BallConstraint>;

struct SampleSpec {
  std::size_t dim = 1;
  std::size_t n = 1;
  Field field = Field::Complex;
  SampleConstraint constraint;
  Seed seed;
};

namespace detail {

inline void validate_spec_shape(const SampleSpec& spec, const UnitVector& anchor) {
  if (spec.dim < 1 || spec.n < 1) throw StructuralError("sample spec requires dim >= 1 and n >= 1");
  if (anchor.dim() != spec.dim) throw StructuralError("anchor dimension differs from sample dimension");
  if (anchor.field() != spec.field) throw StructuralError("anchor field differs from sample field");
}

inline VectorFamily sample_ball_family(const SampleSpec& spec, const Vector& center, double radius,
                                       const Tolerance& tol) {
  std::vector<Vector> members;
  members.reserve(spec.n);
  for (std::size_t k = 0; k < spec.n; ++k) {
    Rng rng(derive_seed(spec.seed.value, k));
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxResampleAttempts && !accepted; ++attempt) {
      Vector x = uniform_in_ball(center, radius, rng);
      if (norm(x) > tol.nonzero) {
        members.push_back(std::move(x));
        accepted = true;
      }
    }
    if (!accepted) throw StructuralError("sampler could not draw a nonzero vector");
  }
  return VectorFamily(std::move(members), tol);
}

}  // namespace detail

/// Uniform in D = {x : |r x - s axis(a)| <= p}, the ball of center
/// (s/r) axis(a) and radius p/r.
inline VectorFamily sample_in_disk(const SampleSpec& spec, const Tolerance& tol = {}) {
  const auto* c = std::get_if<DiskConstraint>(&spec.constraint);
  if (c == nullptr) throw StructuralError("sample_in_disk requires a disk constraint");
  detail::validate_spec_shape(spec, c->anchor);
  const Vector center = (c->s / c->r) * axis_vector(c->anchor, c->axis);
  return detail::sample_ball_family(spec, center, c->p / c->r, tol);
}

/// Uniform in |x - ((m+M)/2) axis(a)| <= (M-m)/2.
inline VectorFamily sample_in_ball(const SampleSpec& spec, const Tolerance& tol = {}) {
  const auto* c = std::get_if<BallConstraint>(&spec.constraint);
  if (c == nullptr) throw StructuralError("sample_in_ball requires a ball constraint");
  detail::validate_spec_shape(spec, c->anchor);
  const Vector center = c->center_scale() * axis_vector(c->anchor, c->axis);
  return detail::sample_ball_family(spec, center, c->radius(), tol);
}

/// n-1 vectors uniform in the ball of radius `scale`, the last one their
/// negated sum.  family_sum of the result is exactly zero.
inline VectorFamily sample_zero_sum(std::size_t dim, std::size_t n, Field field, double scale,
                                    Seed seed, const Tolerance& tol = {}) {
  if (n < 2) throw StructuralError("zero-sum families need n >= 2");
  if (dim < 1) throw StructuralError("dimension must be at least 1");
  if (!std::isfinite(scale) || !(scale > 0.0)) throw StructuralError("scale must be positive");
  std::vector<Rng> streams;
  streams.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) streams.emplace_back(derive_seed(seed.value, k));
  const Vector origin = Vector::zeros(dim, field);

  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    std::vector<Vector> members;
    members.reserve(n);
    for (auto& rng : streams) members.push_back(uniform_in_ball(origin, scale, rng));
    Vector acc = members[0];
    for (std::size_t k = 1; k < members.size(); ++k) acc += members[k];
    members.push_back(-acc);
    bool nonzero = true;
    for (const auto& x : members) nonzero = nonzero && norm(x) > tol.nonzero;
    if (nonzero) return VectorFamily(std::move(members), tol);
  }
  throw StructuralError("zero-sum sampler exhausted its resampling budget");
}

/// Radial projection onto the disk set; identity inside it.
inline Vector project_to_disk(const Vector& x, const DiskConstraint& c) {
  if (disk_margin(x, c).value >= 0.0) return x;
  const Vector center = (c.s / c.r) * axis_vector(c.anchor, c.axis);
  const Vector d = x - center;
  return center + ((c.p / c.r) / norm(d)) * d;
}

/// Radial projection onto the (m, M) ball; identity inside it.
inline Vector project_to_ball(const Vector& x, const BallConstraint& c) {
  if (ball_margin_equiv(x, c).value >= 0.0) return x;
  const Vector center = c.center_scale() * axis_vector(c.anchor, c.axis);
  if (c.radius() == 0.0) return center;
  const Vector d = x - center;
  return center + (c.radius() / norm(d)) * d;
}

enum class EqualityBranch { Outer, Inner };

/// n copies of ((s +/- p)/r) a: both sit on the boundary of D and force
/// alpha_{r,s} = 1.
inline VectorFamily equality_family_thm24(const DiskConstraint& c, std::size_t n,
                                          EqualityBranch branch) {
  if (n < 1) throw StructuralError("n must be at least 1");
  if (c.axis != Axis::Real) throw StructuralError("thm24 equality family needs a real-axis disk");
  if (branch == EqualityBranch::Inner && !(c.s - c.p > 0.0)) {
    throw StructuralError("inner equality branch requires p < s");
  }
  const double lambda = branch == EqualityBranch::Outer ? (c.s + c.p) / c.r : (c.s - c.p) / c.r;
  return VectorFamily(std::vector<Vector>(n, lambda * c.anchor.vec()));
}

struct Thm22Witness {
  VectorFamily family;
  DiskConstraint c_real;
  DiskConstraint c_imag;
};

/// n copies of (1+i) a with r = r' = s = s' = p = q = 1.
inline Thm22Witness equality_family_thm22(const UnitVector& a, std::size_t n) {
  if (n < 1) throw StructuralError("n must be at least 1");
  if (a.field() != Field::Complex) {
    throw StructuralError("imaginary-axis constraint requires complex field");
  }
  return Thm22Witness{VectorFamily(std::vector<Vector>(n, Scalar{1.0, 1.0} * a.vec())),
                      DiskConstraint(1.0, 1.0, 1.0, Axis::Real, a),
                      DiskConstraint(1.0, 1.0, 1.0, Axis::Imag, a)};
}

/// n copies of rho a + sqrt(1 - rho^2) b with b a unit vector orthogonal to a.
/// Equality in Diaz-Metcalf only for rho = 1.
inline VectorFamily equality_family_dm(const UnitVector& a, double rho, std::size_t n) {
  if (n < 1) throw StructuralError("n must be at least 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw StructuralError("rho must lie in [0, 1]");
  if (rho == 1.0) return VectorFamily(std::vector<Vector>(n, a.vec()));
  const UnitVector b = orthogonal_unit(a);
  const Vector x = rho * a.vec() + std::sqrt(1.0 - rho * rho) * b.vec();
  return VectorFamily(std::vector<Vector>(n, x));
}

}  // namespace revineq
