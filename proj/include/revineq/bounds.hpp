#pragma once

// One evaluator per reverse triangle / reverse Schwarz bound.  Every
// evaluator returns a BoundReport written in the form lhs <= rhs, so
// slack = rhs - lhs is always the amount by which the bound holds.
//
// Violated hypotheses never throw: they are reported through
// hypothesis_margins / hypotheses_ok.  StructuralError is reserved for
// malformed input (mismatched dimensions or fields, zero vectors, wrong axes).

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "revineq/constraints.hpp"
#include "revineq/scalar_space.hpp"

namespace revineq {

enum class TheoremId {
  DiazMetcalf,
  Thm21,
  Thm22,
  Cor23,
  Thm24,
  Thm25,
  Thm26,
  Thm27,
  Thm28,
  Cor29,
  Thm210,
  Schwarz31,
  Cor32,
  Cor33,
};

inline constexpr std::array<TheoremId, 14> kAllTheorems = {
    TheoremId::DiazMetcalf, TheoremId::Thm21,  TheoremId::Thm22,     TheoremId::Cor23,
    TheoremId::Thm24,       TheoremId::Thm25,  TheoremId::Thm26,     TheoremId::Thm27,
    TheoremId::Thm28,       TheoremId::Cor29,  TheoremId::Thm210,    TheoremId::Schwarz31,
    TheoremId::Cor32,       TheoremId::Cor33,
};

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::DiazMetcalf: return "dm";
    case TheoremId::Thm21: return "thm21";
    case TheoremId::Thm22: return "thm22";
    case TheoremId::Cor23: return "cor23";
    case TheoremId::Thm24: return "thm24";
    case TheoremId::Thm25: return "thm25";
    case TheoremId::Thm26: return "thm26";
    case TheoremId::Thm27: return "thm27";
    case TheoremId::Thm28: return "thm28";
    case TheoremId::Cor29: return "cor29";
    case TheoremId::Thm210: return "thm210";
    case TheoremId::Schwarz31: return "schwarz31";
    case TheoremId::Cor32: return "cor32";
    case TheoremId::Cor33: return "cor33";
  }
  return "unknown";
}

inline std::optional<TheoremId> theorem_from_string(std::string_view name) {
  for (TheoremId id : kAllTheorems) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

/// True for the two-vector reverse Schwarz bounds.
inline bool is_schwarz(TheoremId id) {
  return id == TheoremId::Schwarz31 || id == TheoremId::Cor32 || id == TheoremId::Cor33;
}

struct NamedMargin {
  std::string name;
  Margin margin;
  // Strict hypotheses (p < bound) need a strictly positive margin.
  bool strict = false;

  [[nodiscard]] bool holds(const Tolerance& tol) const {
    return strict ? margin.value > 0.0 : margin.holds(tol);
  }
};

struct EqualityCertificate {
  Vector predicted_sum;
  double residual = 0.0;
  bool auxiliary_ok = true;
  bool holds = false;
};

struct BoundReport {
  TheoremId theorem;
  std::size_t n = 0;
  std::size_t dim = 0;
  Field field = Field::Complex;
  std::vector<NamedMargin> hypothesis_margins;
  bool hypotheses_ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::map<std::string, double> coefficients;
  EqualityCertificate equality;

  /// The soundness check: a report whose hypotheses hold must not have
  /// slack below the tolerance allowance.
  [[nodiscard]] bool violates(const Tolerance& tol) const {
    return hypotheses_ok && slack < -tol.allowance(lhs, rhs);
  }
};

struct CoefficientPair {
  double r = 0.0;
  double rho = 0.0;
};

using CoefficientPairs = std::vector<CoefficientPair>;
using RadiiList = std::vector<double>;

enum class Cor23Variant {
  // Both constraints with radius s: |r x - s a| <= s, |r x - i s a| <= s.
  Corrected,
  // As printed: |r x - s a| <= r, |r x - i s a| <= s.  Unsound for r > s.
  Printed,
};

struct Thm26Options {
  // Use (m_t + M_t) instead of (l_t + L_t) in the denominator of the
  // imaginary-axis coefficient, as printed.  Off by default.
  bool printed_imag_denominator = false;
};

namespace detail {

inline std::string indexed(std::string_view stem, std::size_t k) {
  return std::string(stem) + "[" + std::to_string(k + 1) + "]";
}

inline std::string indexed(std::string_view stem, std::size_t t, std::size_t k) {
  return std::string(stem) + "[" + std::to_string(t + 1) + "," + std::to_string(k + 1) + "]";
}

/// (r^2 t^2 - p^2 + s^2) / (2 r s t), with the p/s terms grouped so that
/// p == s cancels exactly.
inline double disk_coefficient(double r, double s, double p, double t) {
  const double rt = r * t;
  return (rt * rt + (s - p) * (s + p)) / (2.0 * r * s * t);
}

/// (t^2 + m M) / ((m + M) t)
inline double ball_coefficient(double m, double M, double t) {
  return (t * t + m * M) / ((m + M) * t);
}

inline bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline void require_same_space(const VectorFamily& f, const Vector& v) {
  f[0].require_compatible(v);
}

inline void require_complex(Field f) {
  if (f != Field::Complex) {
    throw StructuralError("imaginary-axis constraint requires complex field");
  }
}

inline void require_same_anchor(const UnitVector& a, const UnitVector& b, const Tolerance& tol) {
  a.vec().require_compatible(b.vec());
  if (norm(a.vec() - b.vec()) > tol.unit) {
    throw StructuralError("constraints must share the same anchor");
  }
}

struct ReportDraft {
  TheoremId theorem;
  std::size_t n;
  std::size_t dim;
  Field field;
  std::vector<NamedMargin> margins;
  std::map<std::string, double> coefficients;
};

inline BoundReport finish(ReportDraft draft, double lhs, double rhs, const Vector& predicted,
                          const Vector& actual, bool auxiliary_ok, const Tolerance& tol) {
  BoundReport rep{draft.theorem,
                  draft.n,
                  draft.dim,
                  draft.field,
                  std::move(draft.margins),
                  true,
                  lhs,
                  rhs,
                  rhs - lhs,
                  std::move(draft.coefficients),
                  EqualityCertificate{predicted, norm(actual - predicted), auxiliary_ok, false}};
  for (const auto& m : rep.hypothesis_margins) {
    if (!m.holds(tol)) rep.hypotheses_ok = false;
  }
  rep.equality.holds = rep.equality.residual <= tol.equality && auxiliary_ok &&
                       std::fabs(rep.slack) <= tol.equality;
  return rep;
}

inline ReportDraft draft_for(TheoremId id, const VectorFamily& f) {
  return ReportDraft{id, f.size(), f.dim(), f.field(), {}, {}};
}

}  // namespace detail

/// min_k (r^2 |x_k|^2 - p^2 + s^2) / (2 r s |x_k|).  With an imaginary-axis
/// constraint the same expression gives the companion coefficient.
inline double alpha_disk(const VectorFamily& family, const DiskConstraint& c) {
  double best = std::numeric_limits<double>::infinity();
  for (double t : family.norms()) best = std::min(best, detail::disk_coefficient(c.r, c.s, c.p, t));
  return best;
}

/// min_k (|x_k|^2 + m M) / ((m + M) |x_k|).
inline double alpha_ball(const VectorFamily& family, double m, double M) {
  if (!std::isfinite(m) || !std::isfinite(M) || !(m > 0.0) || !(M >= m)) {
    throw StructuralError("alpha_ball requires finite M >= m > 0");
  }
  double best = std::numeric_limits<double>::infinity();
  for (double t : family.norms()) best = std::min(best, detail::ball_coefficient(m, M, t));
  return best;
}

/// Diaz-Metcalf with the largest admissible constant
/// r = max(0, min_k Re<x_k, a>/|x_k|).
inline BoundReport dm_evaluate(const VectorFamily& family, const UnitVector& a,
                               const Tolerance& tol = {}) {
  detail::require_same_space(family, a.vec());
  double ratio_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < family.size(); ++k) {
    ratio_min = std::min(ratio_min, inner(family[k], a.vec()).real() / family.norms()[k]);
  }
  const double r = std::max(0.0, ratio_min);

  auto draft = detail::draft_for(TheoremId::DiazMetcalf, family);
  for (std::size_t k = 0; k < family.size(); ++k) {
    draft.margins.push_back({detail::indexed("angle", k), dm_margin(family[k], a, r, tol)});
  }
  draft.coefficients["r"] = r;

  const double sum_norms = family.norm_sum();
  const Vector sum = family_sum(family);
  return detail::finish(std::move(draft), r * sum_norms, norm(sum), (r * sum_norms) * a.vec(), sum,
                        true, tol);
}

inline BoundReport thm21_evaluate(const VectorFamily& family, const OrthonormalFrame& frame,
                                  const CoefficientPairs& coeffs, const Tolerance& tol = {}) {
  if (coeffs.size() != frame.size()) {
    throw StructuralError("coefficient list length must match the frame size");
  }
  detail::require_same_space(family, frame[0].vec());
  if (!check_frame(frame, tol)) throw StructuralError("frame is not orthonormal");
  double sq = 0.0;
  for (const auto& c : coeffs) {
    if (!std::isfinite(c.r) || !std::isfinite(c.rho)) {
      throw StructuralError("coefficients must be finite");
    }
    if (c.rho != 0.0) detail::require_complex(family.field());
    sq += c.r * c.r + c.rho * c.rho;
  }

  auto draft = detail::draft_for(TheoremId::Thm21, family);
  for (std::size_t t = 0; t < frame.size(); ++t) {
    const double r = coeffs[t].r;
    const double rho = coeffs[t].rho;
    for (std::size_t k = 0; k < family.size(); ++k) {
      const double nx = family.norms()[k];
      const double re = inner(family[k], r * frame[t].vec()).real();
      draft.margins.push_back({detail::indexed("re", t, k), {re - r * r * nx, r * r * nx + std::fabs(re)}});
      if (family.field() == Field::Complex) {
        const double im = inner(family[k], rho * frame[t].vec()).imag();
        draft.margins.push_back(
            {detail::indexed("im", t, k), {im - rho * rho * nx, rho * rho * nx + std::fabs(im)}});
      }
    }
    draft.coefficients[detail::indexed("r", t)] = r;
    draft.coefficients[detail::indexed("rho", t)] = rho;
  }
  const double coefficient = std::sqrt(sq);
  draft.coefficients["coefficient"] = coefficient;

  const double sum_norms = family.norm_sum();
  Vector direction = Vector::zeros(family.dim(), family.field());
  for (std::size_t t = 0; t < frame.size(); ++t) {
    direction += Scalar{coeffs[t].r, coeffs[t].rho} * frame[t].vec();
  }
  const Vector sum = family_sum(family);
  return detail::finish(std::move(draft), coefficient * sum_norms, norm(sum), sum_norms * direction,
                        sum, true, tol);
}

inline BoundReport thm22_evaluate(const VectorFamily& family, const DiskConstraint& c_real,
                                  const DiskConstraint& c_imag, const Tolerance& tol = {}) {
  detail::require_complex(family.field());
  if (c_real.axis != Axis::Real) throw StructuralError("first constraint must use the real axis");
  if (c_imag.axis != Axis::Imag) throw StructuralError("second constraint must use the imaginary axis");
  detail::require_same_anchor(c_real.anchor, c_imag.anchor, tol);
  detail::require_same_space(family, c_real.anchor.vec());

  auto draft = detail::draft_for(TheoremId::Thm22, family);
  for (std::size_t k = 0; k < family.size(); ++k) {
    draft.margins.push_back({detail::indexed("disk_re", k), disk_margin(family[k], c_real)});
  }
  for (std::size_t k = 0; k < family.size(); ++k) {
    draft.margins.push_back({detail::indexed("disk_im", k), disk_margin(family[k], c_imag)});
  }
  draft.margins.push_back({"p_range", {p_feasibility_margin(family, c_real), c_real.p}});
  draft.margins.push_back({"q_range", {p_feasibility_margin(family, c_imag), c_imag.p}});

  const double alpha = alpha_disk(family, c_real);
  const double beta = alpha_disk(family, c_imag);
  draft.coefficients["alpha_rs"] = alpha;
  draft.coefficients["beta_rs"] = beta;
  const double coefficient = std::hypot(alpha, beta);
  draft.coefficients["coefficient"] = coefficient;

  const double sum_norms = family.norm_sum();
  const Vector sum = family_sum(family);
  const Vector predicted = (Scalar{alpha, beta} * sum_norms) * c_real.anchor.vec();
  return detail::finish(std::move(draft), coefficient * sum_norms, norm(sum), predicted, sum, true,
                        tol);
}

/// Specialization of thm22 with r' = r, s' = s where both coefficients
/// reduce to r alpha / (2 s).
inline BoundReport cor23_evaluate(const VectorFamily& family, double r, double s,
                                  const UnitVector& a,
                                  Cor23Variant variant = Cor23Variant::Corrected,
                                  const Tolerance& tol = {}) {
  detail::require_complex(family.field());
  const double p = variant == Cor23Variant::Corrected ? s : r;
  const DiskConstraint c_real(r, s, p, Axis::Real, a);
  const DiskConstraint c_imag(r, s, s, Axis::Imag, a);
  BoundReport base = thm22_evaluate(family, c_real, c_imag, tol);

  const double alpha_min = family.alpha_min();
  const double closed = r * alpha_min / (2.0 * s);
  const double coefficient = r * alpha_min / (s * std::sqrt(2.0));
  const double sum_norms = family.norm_sum();
  const double lhs = coefficient * sum_norms;
  if (variant == Cor23Variant::Corrected &&
      (!detail::close_rel(base.coefficients["alpha_rs"], closed, 1e-12) ||
       !detail::close_rel(base.coefficients["beta_rs"], closed, 1e-12) ||
       !detail::close_rel(base.lhs, lhs, 1e-12))) {
    throw std::logic_error("cor23: closed-form coefficient disagrees with thm22");
  }

  auto draft = detail::draft_for(TheoremId::Cor23, family);
  draft.margins = std::move(base.hypothesis_margins);
  draft.coefficients = std::move(base.coefficients);
  draft.coefficients["closed_form_alpha"] = closed;
  draft.coefficients["corollary_coefficient"] = coefficient;
  draft.coefficients["thm22_lhs"] = base.lhs;

  const Vector sum = family_sum(family);
  const Vector predicted = (Scalar{closed, closed} * sum_norms) * a.vec();
  return detail::finish(std::move(draft), lhs, norm(sum), predicted, sum, true, tol);
}

inline BoundReport thm24_evaluate(const VectorFamily& family, const DiskConstraint& c,
                                  const Tolerance& tol = {}) {
  if (c.axis != Axis::Real) throw StructuralError("thm24 requires a real-axis disk constraint");
  detail::require_same_space(family, c.anchor.vec());

  auto draft = detail::draft_for(TheoremId::Thm24, family);
  for (std::size_t k = 0; k < family.size(); ++k) {
    draft.margins.push_back({detail::indexed("disk", k), disk_margin(family[k], c)});
  }
  draft.margins.push_back({"p_range", {p_feasibility_margin(family, c), c.p}, true});

  const double alpha = alpha_disk(family, c);
  draft.coefficients["alpha_rs"] = alpha;
  const double sum_norms = family.norm_sum();
  const Vector sum = family_sum(family);
  return detail::finish(std::move(draft), alpha * sum_norms, norm(sum),
                        (alpha * sum_norms) * c.anchor.vec(), sum, true, tol);
}

/// Zero-sum families: sqrt(r^2 alpha^2 + s^2) <= max_k |r x_k - s a|.
inline BoundReport thm25_evaluate(const VectorFamily& family, double r, double s,
                                  const UnitVector& a, const Tolerance& tol = {}) {
  if (!std::isfinite(r) || !std::isfinite(s) || !(r > 0.0) || !(s > 0.0)) {
    throw StructuralError("thm25 requires finite r, s > 0");
  }
  detail::require_same_space(family, a.vec());
  const Vector sum = family_sum(family);
  const double sum_norm = norm(sum);

  auto draft = detail::draft_for(TheoremId::Thm25, family);
  draft.margins.push_back({"zero_sum", {-sum_norm, family.norm_sum()}});
  const double alpha_min = family.alpha_min();
  draft.coefficients["alpha_min"] = alpha_min;

  double far = 0.0;
  for (const auto& x : family.members()) far = std::max(far, norm(r * x - s * a.vec()));
  const double ra = r * alpha_min;
  return detail::finish(std::move(draft), std::sqrt(ra * ra + s * s), far,
                        Vector::zeros(family.dim(), family.field()), sum, true, tol);
}

inline BoundReport thm26_evaluate(const VectorFamily& family, const OrthonormalFrame& frame,
                                  const std::vector<BallConstraint>& balls_real,
                                  const std::vector<BallConstraint>& balls_imag,
                                  Thm26Options options = {}, const Tolerance& tol = {}) {
  if (balls_real.size() != frame.size() || balls_imag.size() != frame.size()) {
    throw StructuralError("ball lists must match the frame size");
  }
  detail::require_complex(family.field());
  detail::require_same_space(family, frame[0].vec());
  if (!check_frame(frame, tol)) throw StructuralError("frame is not orthonormal");
  for (std::size_t t = 0; t < frame.size(); ++t) {
    if (balls_real[t].axis != Axis::Real || balls_imag[t].axis != Axis::Imag) {
      throw StructuralError("thm26 needs real-axis and imaginary-axis balls per frame vector");
    }
    detail::require_same_anchor(balls_real[t].anchor, frame[t], tol);
    detail::require_same_anchor(balls_imag[t].anchor, frame[t], tol);
  }

  auto draft = detail::draft_for(TheoremId::Thm26, family);
  double sq = 0.0;
  Vector direction = Vector::zeros(family.dim(), Field::Complex);
  for (std::size_t t = 0; t < frame.size(); ++t) {
    const auto& re_ball = balls_real[t];
    const auto& im_ball = balls_imag[t];
    for (std::size_t k = 0; k < family.size(); ++k) {
      draft.margins.push_back({detail::indexed("ball_re", t, k), ball_margin(family[k], re_ball)});
      draft.margins.push_back({detail::indexed("ball_im", t, k), ball_margin(family[k], im_ball)});
    }
    const double a_re = alpha_ball(family, re_ball.m, re_ball.M);
    double a_im = alpha_ball(family, im_ball.m, im_ball.M);
    if (options.printed_imag_denominator) {
      a_im = std::numeric_limits<double>::infinity();
      for (double nx : family.norms()) {
        a_im = std::min(a_im, (nx * nx + im_ball.m * im_ball.M) / ((re_ball.m + re_ball.M) * nx));
      }
    }
    draft.coefficients[detail::indexed("alpha_re", t)] = a_re;
    draft.coefficients[detail::indexed("alpha_im", t)] = a_im;
    sq += a_re * a_re + a_im * a_im;
    direction += Scalar{a_re, a_im} * frame[t].vec();
  }
  const double coefficient = std::sqrt(sq);
  draft.coefficients["coefficient"] = coefficient;

  const double sum_norms = family.norm_sum();
  const Vector sum = family_sum(family);
  return detail::finish(std::move(draft), coefficient * sum_norms, norm(sum), sum_norms * direction,
                        sum, true, tol);
}

inline BoundReport thm27_evaluate(const VectorFamily& family, const UnitVector& a,
                                  const RadiiList& radii, const Tolerance& tol = {}) {
  if (radii.size() != family.size()) throw StructuralError("radii list length must equal n");
  detail::require_same_space(family, a.vec());

  auto draft = detail::draft_for(TheoremId::Thm27, family);
  double radii_sum = 0.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (!std::isfinite(radii[k]) || radii[k] < 0.0) {
      throw StructuralError("radii must be finite and nonnegative");
    }
    const double nx = family.norms()[k];
    const double gap = nx - inner(family[k], a.vec()).real();
    draft.margins.push_back({detail::indexed("gap", k), {radii[k] - gap, std::max(radii[k], nx)}});
    radii_sum += radii[k];
  }
  draft.coefficients["radii_sum"] = radii_sum;

  const double sum_norms = family.norm_sum();
  const Vector sum = family_sum(family);
  const bool aux = tol.leq(radii_sum, sum_norms);
  return detail::finish(std::move(draft), sum_norms - norm(sum), radii_sum,
                        (sum_norms - radii_sum) * a.vec(), sum, aux, tol);
}

namespace detail {

/// Shared tail of the additive bounds: sum|x_k| - |sum x_k| <= factor Re<sum x_k, a>.
inline BoundReport additive_bound(ReportDraft draft, const VectorFamily& family, const UnitVector& a,
                                  double factor, const Tolerance& tol) {
  const double sum_norms = family.norm_sum();
  const Vector sum = family_sum(family);
  const double rhs = factor * inner(sum, a.vec()).real();
  const bool aux = tol.leq(rhs, sum_norms);
  return finish(std::move(draft), sum_norms - norm(sum), rhs, (sum_norms - rhs) * a.vec(), sum, aux,
                tol);
}

inline double finite_or_nan(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

inline BoundReport thm28_evaluate(const VectorFamily& family, const UnitVector& a, double p,
                                  const Tolerance& tol = {}) {
  if (!std::isfinite(p)) throw StructuralError("p must be finite");
  detail::require_same_space(family, a.vec());
  const double alpha_min = family.alpha_min();

  auto draft = detail::draft_for(TheoremId::Thm28, family);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const double dist = norm(family[k] - a.vec());
    draft.margins.push_back({detail::indexed("disk", k), {p - dist, std::max(std::fabs(p), dist)}});
  }
  draft.margins.push_back({"p_positive", {p, std::fabs(p)}, true});
  draft.margins.push_back({"p_range", {std::sqrt(alpha_min * alpha_min + 1.0) - p, std::fabs(p)}, true});

  double beta = std::numeric_limits<double>::infinity();
  for (double t : family.norms()) beta = std::min(beta, detail::disk_coefficient(1.0, 1.0, p, t));
  const double factor = detail::finite_or_nan((1.0 - beta) / beta);
  draft.coefficients["beta"] = beta;
  draft.coefficients["factor"] = factor;
  return detail::additive_bound(std::move(draft), family, a, factor, tol);
}

/// thm28 at p = 1, where beta = alpha/2.
inline BoundReport cor29_evaluate(const VectorFamily& family, const UnitVector& a,
                                  const Tolerance& tol = {}) {
  BoundReport base = thm28_evaluate(family, a, 1.0, tol);
  const double alpha_min = family.alpha_min();
  const double factor = (2.0 - alpha_min) / alpha_min;
  if (!detail::close_rel(base.coefficients["beta"], alpha_min / 2.0, 1e-12)) {
    throw std::logic_error("cor29: beta differs from alpha/2");
  }

  auto draft = detail::draft_for(TheoremId::Cor29, family);
  draft.margins = std::move(base.hypothesis_margins);
  draft.coefficients = std::move(base.coefficients);
  draft.coefficients["corollary_factor"] = factor;
  draft.coefficients["thm28_rhs"] = base.rhs;
  return detail::additive_bound(std::move(draft), family, a, factor, tol);
}

inline BoundReport thm210_evaluate(const VectorFamily& family, const BallConstraint& c,
                                   const Tolerance& tol = {}) {
  if (c.axis != Axis::Real) throw StructuralError("thm210 requires a real-axis ball constraint");
  detail::require_same_space(family, c.anchor.vec());

  auto draft = detail::draft_for(TheoremId::Thm210, family);
  for (std::size_t k = 0; k < family.size(); ++k) {
    draft.margins.push_back({detail::indexed("ball", k), ball_margin(family[k], c)});
  }
  const double alpha = alpha_ball(family, c.m, c.M);
  const double factor = (1.0 - alpha) / alpha;
  draft.coefficients["alpha_mM"] = alpha;
  draft.coefficients["factor"] = factor;
  return detail::additive_bound(std::move(draft), family, c.anchor, factor, tol);
}

namespace detail {

/// Reverse Schwarz bound for x1, x2 in {x : |r x - s a| <= p}, 0 <= p <= s.
/// The Schwarz bounds have no equality characterization; the certificate
/// only records whether the bound is attained.
inline BoundReport schwarz_core(TheoremId id, const Vector& x1, const Vector& x2, double r,
                                double s, double p, const UnitVector& a, const Tolerance& tol) {
  x1.require_compatible(x2);
  x1.require_compatible(a.vec());
  const double n1 = norm(x1);
  const double n2 = norm(x2);
  if (n1 <= tol.nonzero || n2 <= tol.nonzero) {
    throw StructuralError("reverse Schwarz bounds require nonzero vectors");
  }
  if (p > s) throw StructuralError("reverse Schwarz bound requires p <= s");

  ReportDraft draft{id, 2, x1.dim(), x1.field(), {}, {}};
  const double d1 = norm(r * x1 - s * a.vec());
  const double d2 = norm(r * x2 - s * a.vec());
  draft.margins.push_back({"disk[1]", {p - d1, std::max(p, d1)}});
  draft.margins.push_back({"disk[2]", {p - d2, std::max(p, d2)}});

  const double c1 = disk_coefficient(r, s, p, n1);
  const double c2 = disk_coefficient(r, s, p, n2);
  const double alpha = std::min(c1, c2);
  draft.coefficients["c1"] = c1;
  draft.coefficients["c2"] = c2;
  draft.coefficients["alpha_rs"] = alpha;
  draft.coefficients["bound1"] = 0.5 * (1.0 - c1 * c1);
  draft.coefficients["bound2"] = 0.5 * (1.0 - c2 * c2);

  const double total = n1 + n2;
  const double lhs = (n1 * n2 - inner(x1, x2).real()) / (total * total);
  const double rhs = 0.5 * (1.0 - alpha * alpha);
  const Vector sum = x1 + x2;
  return finish(std::move(draft), lhs, rhs, sum, sum, true, tol);
}

}  // namespace detail

inline BoundReport schwarz31_evaluate(const Vector& x1, const Vector& x2, const DiskConstraint& c,
                                      const Tolerance& tol = {}) {
  if (c.axis != Axis::Real) throw StructuralError("schwarz31 requires a real-axis disk constraint");
  return detail::schwarz_core(TheoremId::Schwarz31, x1, x2, c.r, c.s, c.p, c.anchor, tol);
}

inline BoundReport cor32_evaluate(const Vector& x, const Vector& y, double r, double s,
                                  const UnitVector& a, const Tolerance& tol = {}) {
  if (!std::isfinite(r) || !std::isfinite(s) || !(r > 0.0) || !(s > 0.0)) {
    throw StructuralError("cor32 requires finite r, s > 0");
  }
  const double nx = norm(x);
  const double ny = norm(y);
  if (!(nx > tol.nonzero) || !(nx < ny)) throw StructuralError("cor32 requires 0 < |x| < |y|");

  BoundReport rep = detail::schwarz_core(TheoremId::Cor32, x, y, r, s, s, a, tol);
  const double closed = r * nx / (2.0 * s);
  if (!detail::close_rel(rep.coefficients["alpha_rs"], closed, 1e-12)) {
    throw std::logic_error("cor32: alpha differs from r|x|/(2s)");
  }
  rep.coefficients["closed_form_alpha"] = closed;
  rep.coefficients["schwarz31_rhs"] = rep.rhs;
  rep.rhs = 0.5 * (1.0 - closed * closed);
  rep.slack = rep.rhs - rep.lhs;
  rep.equality.holds = std::fabs(rep.slack) <= tol.equality;
  return rep;
}

inline BoundReport cor33_evaluate(const Vector& x1, const Vector& x2, const BallConstraint& c,
                                  const Tolerance& tol = {}) {
  if (c.axis != Axis::Real) throw StructuralError("cor33 requires a real-axis ball constraint");
  BoundReport rep = detail::schwarz_core(TheoremId::Cor33, x1, x2, 1.0, c.center_scale(), c.radius(),
                                         c.anchor, tol);
  const VectorFamily pair({x1, x2}, tol);
  const double ball_alpha = alpha_ball(pair, c.m, c.M);
  if (!detail::close_rel(rep.coefficients["alpha_rs"], ball_alpha, 1e-12)) {
    throw std::logic_error("cor33: disk coefficient differs from alpha_ball");
  }
  rep.coefficients["alpha_mM"] = ball_alpha;
  rep.hypothesis_margins = {{"ball[1]", ball_margin(x1, c)}, {"ball[2]", ball_margin(x2, c)}};
  rep.hypotheses_ok = true;
  for (const auto& m : rep.hypothesis_margins) {
    if (!m.holds(tol)) rep.hypotheses_ok = false;
  }
  return rep;
}

}  // namespace revineq
