#pragma once

// Coordinate vectors over R or C and the inner product every bound in the
// library is stated over.  Real vectors share the complex storage with the
// imaginary parts pinned to zero.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace revineq {

using Scalar = std::complex<double>;

inline constexpr Scalar kImaginaryUnit{0.0, 1.0};

/// Raised for problems with the shape of the input rather than its values:
/// dimension or field mismatches, zero vectors where a nonzero one is
/// required, non-finite coordinates, malformed frames.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Field { Real, Complex };

inline const char* to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

/// Comparison slack shared by all modules.  `a <= b` is accepted iff
/// a - b <= abs + rel * max(|a|, |b|).
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;
  double unit = 1e-9;
  double ortho = 1e-9;
  double nonzero = 1e-12;
  // Equality certificates compound several operations, so they use a looser
  // threshold than plain comparisons.
  double equality = 1e-8;

  [[nodiscard]] double allowance(double a, double b) const {
    return abs + rel * std::max(std::fabs(a), std::fabs(b));
  }
  [[nodiscard]] bool leq(double a, double b) const { return a - b <= allowance(a, b); }

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!ok(abs) || !ok(rel) || !ok(unit) || !ok(ortho) || !ok(nonzero) || !ok(equality) ||
        unit <= 0.0 || ortho <= 0.0 || nonzero <= 0.0) {
      throw StructuralError("tolerance fields must be finite and nonnegative");
    }
  }
};

class Vector {
 public:
  Vector(std::vector<Scalar> coords, Field field) : coords_(std::move(coords)), field_(field) {
    if (coords_.empty()) throw StructuralError("vector dimension must be at least 1");
    for (const auto& c : coords_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw StructuralError("vector coordinates must be finite");
      }
      if (field_ == Field::Real && c.imag() != 0.0) {
        throw StructuralError("real-field vector has a nonzero imaginary component");
      }
    }
  }

  static Vector zeros(std::size_t dim, Field field) {
    return Vector(std::vector<Scalar>(dim, Scalar{}), field);
  }

  /// The standard basis vector e_{index+1}.
  static Vector basis(std::size_t dim, std::size_t index, Field field) {
    if (index >= dim) throw StructuralError("basis index out of range");
    std::vector<Scalar> c(dim, Scalar{});
    c[index] = 1.0;
    return Vector(std::move(c), field);
  }

  static Vector real(std::initializer_list<double> values) {
    std::vector<Scalar> c(values.begin(), values.end());
    return Vector(std::move(c), Field::Real);
  }

  static Vector complex(std::initializer_list<Scalar> values) {
    return Vector(std::vector<Scalar>(values), Field::Complex);
  }

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  [[nodiscard]] Field field() const { return field_; }
  [[nodiscard]] std::span<const Scalar> coords() const { return coords_; }
  [[nodiscard]] const Scalar& operator[](std::size_t i) const { return coords_[i]; }

  /// Copy with coordinate i replaced; the field invariant is re-checked.
  [[nodiscard]] Vector with_coordinate(std::size_t i, Scalar value) const {
    std::vector<Scalar> c = coords_;
    c.at(i) = value;
    return Vector(std::move(c), field_);
  }

  /// Same coordinates, viewed in the complex field.
  [[nodiscard]] Vector as_complex() const { return Vector(coords_, Field::Complex); }

  Vector& operator+=(const Vector& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Vector& operator*=(double k) {
    for (auto& c : coords_) c *= k;
    return *this;
  }
  Vector& operator*=(Scalar k) {
    if (field_ == Field::Real && k.imag() != 0.0) {
      throw StructuralError("imaginary-axis constraint requires complex field");
    }
    if (k.imag() == 0.0) return *this *= k.real();
    for (auto& c : coords_) c *= k;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator-(Vector a) { return a *= -1.0; }
  friend Vector operator*(double k, Vector v) { return v *= k; }
  friend Vector operator*(Scalar k, Vector v) { return v *= k; }

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.field_ == b.field_ && a.coords_ == b.coords_;
  }

  void require_compatible(const Vector& o) const {
    if (dim() != o.dim()) throw StructuralError("dimension mismatch");
    if (field_ != o.field_) throw StructuralError("field mismatch");
  }

 private:
  std::vector<Scalar> coords_;
  Field field_;
};

/// Linear in the first argument, conjugate-linear in the second.
inline Scalar inner(const Vector& x, const Vector& y) {
  x.require_compatible(y);
  Scalar acc{};
  for (std::size_t i = 0; i < x.dim(); ++i) acc += x[i] * std::conj(y[i]);
  return acc;
}

inline double norm(const Vector& x) {
  double acc = 0.0;
  for (const auto& c : x.coords()) acc += std::norm(c);
  return std::sqrt(acc);
}

class UnitVector {
 public:
  explicit UnitVector(Vector v, const Tolerance& tol = {}) : inner_(std::move(v)) {
    if (std::fabs(norm(inner_) - 1.0) > tol.unit) {
      throw StructuralError("anchor is not a unit vector");
    }
  }

  /// v / |v|; v must be nonzero.
  static UnitVector normalized(const Vector& v, const Tolerance& tol = {}) {
    const double n = norm(v);
    if (n <= tol.nonzero) throw StructuralError("cannot normalize a zero vector");
    return UnitVector((1.0 / n) * v, tol);
  }

  [[nodiscard]] const Vector& vec() const { return inner_; }
  [[nodiscard]] std::size_t dim() const { return inner_.dim(); }
  [[nodiscard]] Field field() const { return inner_.field(); }

  friend bool operator==(const UnitVector& a, const UnitVector& b) { return a.inner_ == b.inner_; }

 private:
  Vector inner_;
};

/// Members share a dimension and field; orthonormality is checked separately
/// by check_frame so that malformed frames can still be represented.
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(std::vector<UnitVector> members) : members_(std::move(members)) {
    if (members_.empty()) throw StructuralError("frame must contain at least one vector");
    for (const auto& m : members_) members_.front().vec().require_compatible(m.vec());
  }

  [[nodiscard]] std::span<const UnitVector> members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] const UnitVector& operator[](std::size_t t) const { return members_[t]; }
  [[nodiscard]] std::size_t dim() const { return members_.front().dim(); }
  [[nodiscard]] Field field() const { return members_.front().field(); }

 private:
  std::vector<UnitVector> members_;
};

inline bool check_frame(const OrthonormalFrame& frame, const Tolerance& tol = {}) {
  for (std::size_t s = 0; s < frame.size(); ++s) {
    for (std::size_t t = 0; t < frame.size(); ++t) {
      const Scalar g = inner(frame[s].vec(), frame[t].vec());
      const Scalar target = s == t ? Scalar{1.0} : Scalar{};
      if (std::abs(g - target) > tol.ortho) return false;
    }
  }
  return true;
}

/// x_1..x_n, all nonzero, sharing a dimension and field.
class VectorFamily {
 public:
  explicit VectorFamily(std::vector<Vector> members, const Tolerance& tol = {})
      : members_(std::move(members)) {
    if (members_.empty()) throw StructuralError("family must contain at least one vector");
    norms_.reserve(members_.size());
    for (const auto& m : members_) {
      members_.front().require_compatible(m);
      const double n = norm(m);
      if (n <= tol.nonzero) throw StructuralError("family member is the zero vector");
      norms_.push_back(n);
    }
  }

  [[nodiscard]] std::span<const Vector> members() const { return members_; }
  [[nodiscard]] const Vector& operator[](std::size_t k) const { return members_[k]; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] std::size_t dim() const { return members_.front().dim(); }
  [[nodiscard]] Field field() const { return members_.front().field(); }

  [[nodiscard]] std::span<const double> norms() const { return norms_; }
  [[nodiscard]] double alpha_min() const { return *std::min_element(norms_.begin(), norms_.end()); }
  [[nodiscard]] double norm_sum() const {
    double acc = 0.0;
    for (double n : norms_) acc += n;
    return acc;
  }

  friend bool operator==(const VectorFamily& a, const VectorFamily& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<Vector> members_;
  std::vector<double> norms_;
};

/// Left fold x_1 + x_2 + ... + x_n.
inline Vector family_sum(const VectorFamily& f) {
  Vector acc = f[0];
  for (std::size_t k = 1; k < f.size(); ++k) acc += f[k];
  return acc;
}

}  // namespace revineq
