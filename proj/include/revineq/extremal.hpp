#pragma once

// Multi-start compass search for configurations where a bound is tight
// (lhs/rhs -> 1).  Candidates are projected back onto the hypothesis set
// after every move and kept only if the evaluator accepts the hypotheses.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revineq/bounds.hpp"
#include "revineq/constraints.hpp"
#include "revineq/scalar_space.hpp"
#include "revineq/witnesses.hpp"

namespace revineq {

/// Constraint parameters.  Which ones matter depends on the theorem:
///   disk bounds (thm22/24, schwarz31): r, s, p (and q for the imaginary disk)
///   cor23, cor32, thm25: r, s
///   thm28: p
///   ball bounds (thm210, cor33): m, M;  thm26 adds l, L
///   thm21: frame {a} with coefficients (r, q)
///   thm27: radii, or r for every member when radii is empty
struct SearchParams {
  double r = 1.0;
  double s = 1.0;
  double p = 1.0;
  double q = 1.0;
  double m = 0.5;
  double M = 2.0;
  double l = 0.5;
  double L = 2.0;
  std::vector<double> radii;
};

inline constexpr std::size_t kEvaluationCap = 50'000'000;

struct SearchConfig {
  TheoremId theorem = TheoremId::Thm24;
  SearchParams params;
  std::size_t dim = 4;
  std::size_t n = 2;
  Field field = Field::Complex;
  std::size_t restarts = 8;
  std::size_t budget = 2000;
  double step_init = 0.5;
  double step_min = 1e-9;
  Seed seed;
  bool record_trace = false;
};

struct TracePoint {
  std::size_t iteration;
  double ratio;
};

struct TightnessResult {
  VectorFamily best_family;
  double best_ratio;
  BoundReport report;
  std::size_t evaluations_used;
  // rhs was at or below tolerance, so the ratio was scored 0.
  bool degenerate_rhs;
  std::vector<TracePoint> trace;
};

/// lhs/rhs, with 1 meaning tight.  Reports whose rhs is within tolerance of
/// zero are scored 0.
inline double tightness_ratio(const BoundReport& rep, const Tolerance& tol = {}) {
  if (!(rep.rhs > tol.abs)) return 0.0;
  return rep.lhs / rep.rhs;
}

/// The anchor every search and CLI evaluation uses: e_1 in the given space.
inline UnitVector default_anchor(std::size_t dim, Field field) {
  return UnitVector(Vector::basis(dim, 0, field));
}

/// Evaluate `theorem` on `family` with constraint parameters taken from
/// `params`, anchored at `a`.
inline BoundReport evaluate_with_params(TheoremId theorem, const VectorFamily& family,
                                        const UnitVector& a, const SearchParams& params,
                                        const Tolerance& tol = {}) {
  auto require_pair = [&] {
    if (family.size() != 2) throw StructuralError("reverse Schwarz bounds take exactly two vectors");
  };
  switch (theorem) {
    case TheoremId::DiazMetcalf:
      return dm_evaluate(family, a, tol);
    case TheoremId::Thm21:
      return thm21_evaluate(family, OrthonormalFrame({a}), {{params.r, params.q}}, tol);
    case TheoremId::Thm22:
      detail::require_complex(family.field());
      return thm22_evaluate(family, DiskConstraint(params.r, params.s, params.p, Axis::Real, a),
                            DiskConstraint(params.r, params.s, params.q, Axis::Imag, a), tol);
    case TheoremId::Cor23:
      return cor23_evaluate(family, params.r, params.s, a, Cor23Variant::Corrected, tol);
    case TheoremId::Thm24:
      return thm24_evaluate(family, DiskConstraint(params.r, params.s, params.p, Axis::Real, a), tol);
    case TheoremId::Thm25:
      return thm25_evaluate(family, params.r, params.s, a, tol);
    case TheoremId::Thm26:
      detail::require_complex(family.field());
      return thm26_evaluate(family, OrthonormalFrame({a}),
                            {BallConstraint(params.m, params.M, Axis::Real, a)},
                            {BallConstraint(params.l, params.L, Axis::Imag, a)}, {}, tol);
    case TheoremId::Thm27: {
      RadiiList radii = params.radii;
      if (radii.empty()) radii.assign(family.size(), params.r);
      return thm27_evaluate(family, a, radii, tol);
    }
    case TheoremId::Thm28:
      return thm28_evaluate(family, a, params.p, tol);
    case TheoremId::Cor29:
      return cor29_evaluate(family, a, tol);
    case TheoremId::Thm210:
      return thm210_evaluate(family, BallConstraint(params.m, params.M, Axis::Real, a), tol);
    case TheoremId::Schwarz31:
      require_pair();
      return schwarz31_evaluate(family[0], family[1],
                                DiskConstraint(params.r, params.s, params.p, Axis::Real, a), tol);
    case TheoremId::Cor32:
      require_pair();
      return cor32_evaluate(family[0], family[1], params.r, params.s, a, tol);
    case TheoremId::Cor33:
      require_pair();
      return cor33_evaluate(family[0], family[1], BallConstraint(params.m, params.M, Axis::Real, a),
                            tol);
  }
  throw StructuralError("unknown theorem");
}

namespace detail {

using Members = std::vector<Vector>;

struct SearchProblem {
  std::function<Members(Rng&)> start;
  // Pull member `changed` (and anything depending on it) back into the
  // hypothesis set.
  std::function<Members(Members, std::size_t changed)> repair;
  // Members the search is allowed to move; the rest are derived by repair.
  std::size_t free_members;
};

inline Members alternate(Members xs, std::size_t k, const std::function<Vector(const Vector&)>& p1,
                         const std::function<Vector(const Vector&)>& p2) {
  for (int it = 0; it < 50; ++it) {
    Vector next = p2(p1(xs[k]));
    const bool settled = next == xs[k];
    xs[k] = std::move(next);
    if (settled) break;
  }
  return xs;
}

inline Members copies_on_ray(const Vector& direction, std::size_t n, Rng& rng, double noise) {
  Members xs;
  for (std::size_t k = 0; k < n; ++k) {
    Vector x = rng.uniform(0.5, 2.0) * direction;
    if (noise > 0.0) x += noise * gaussian_vector(direction.dim(), direction.field(), rng);
    xs.push_back(std::move(x));
  }
  return xs;
}

inline Members sample_members(const SampleConstraint& c, const SearchConfig& cfg, Rng& rng) {
  SampleSpec spec{cfg.dim, cfg.n, cfg.field, c, Seed{rng.next()}};
  const VectorFamily f = std::holds_alternative<DiskConstraint>(c) ? sample_in_disk(spec)
                                                                   : sample_in_ball(spec);
  return Members(f.members().begin(), f.members().end());
}

inline Members sorted_by_norm(Members xs) {
  if (xs.size() == 2 && norm(xs[1]) < norm(xs[0])) std::swap(xs[0], xs[1]);
  return xs;
}

inline SearchProblem make_problem(const SearchConfig& cfg, const UnitVector& a) {
  const SearchParams& P = cfg.params;
  auto identity = [](Members xs, std::size_t) { return xs; };
  auto disk_problem = [&cfg](const DiskConstraint& c) {
    return SearchProblem{
        [c, cfg](Rng& rng) { return sample_members(c, cfg, rng); },
        [c](Members xs, std::size_t k) {
          xs[k] = project_to_disk(xs[k], c);
          return xs;
        },
        cfg.n};
  };
  auto ball_problem = [&cfg](const BallConstraint& c) {
    return SearchProblem{
        [c, cfg](Rng& rng) { return sample_members(c, cfg, rng); },
        [c](Members xs, std::size_t k) {
          xs[k] = project_to_ball(xs[k], c);
          return xs;
        },
        cfg.n};
  };

  switch (cfg.theorem) {
    case TheoremId::DiazMetcalf:
      return SearchProblem{
          [a, cfg](Rng& rng) { return sample_members(DiskConstraint(1.0, 1.0, 1.0, Axis::Real, a), cfg, rng); },
          identity, cfg.n};
    case TheoremId::Thm21: {
      if (P.q != 0.0) require_complex(cfg.field);
      const Scalar c{P.r, P.q};
      const Vector dir = std::abs(c) > 0.0 ? (c / std::abs(c)) * a.vec() : a.vec();
      return SearchProblem{
          [dir, cfg](Rng& rng) { return copies_on_ray(dir, cfg.n, rng, 0.05 * rng.uniform()); },
          identity, cfg.n};
    }
    case TheoremId::Thm22:
    case TheoremId::Cor23: {
      require_complex(cfg.field);
      const bool cor = cfg.theorem == TheoremId::Cor23;
      const DiskConstraint c_re(P.r, P.s, cor ? P.s : P.p, Axis::Real, a);
      const DiskConstraint c_im(P.r, P.s, cor ? P.s : P.q, Axis::Imag, a);
      auto p1 = [c_re](const Vector& x) { return project_to_disk(x, c_re); };
      auto p2 = [c_im](const Vector& x) { return project_to_disk(x, c_im); };
      return SearchProblem{
          [c_re, cfg, p1, p2](Rng& rng) {
            Members xs = sample_members(c_re, cfg, rng);
            for (std::size_t k = 0; k < xs.size(); ++k) xs = alternate(std::move(xs), k, p1, p2);
            return xs;
          },
          [p1, p2](Members xs, std::size_t k) { return alternate(std::move(xs), k, p1, p2); }, cfg.n};
    }
    case TheoremId::Thm24:
    case TheoremId::Schwarz31:
      return disk_problem(DiskConstraint(P.r, P.s, P.p, Axis::Real, a));
    case TheoremId::Thm28:
      return disk_problem(DiskConstraint(1.0, 1.0, P.p, Axis::Real, a));
    case TheoremId::Cor29:
      return disk_problem(DiskConstraint(1.0, 1.0, 1.0, Axis::Real, a));
    case TheoremId::Cor32: {
      const DiskConstraint c(P.r, P.s, P.s, Axis::Real, a);
      return SearchProblem{
          [c, cfg](Rng& rng) { return sorted_by_norm(sample_members(c, cfg, rng)); },
          [c](Members xs, std::size_t k) {
            xs[k] = project_to_disk(xs[k], c);
            return sorted_by_norm(std::move(xs));
          },
          cfg.n};
    }
    case TheoremId::Thm25: {
      if (cfg.n < 2) throw StructuralError("zero-sum families need n >= 2");
      return SearchProblem{
          [cfg](Rng& rng) {
            const VectorFamily f = sample_zero_sum(cfg.dim, cfg.n, cfg.field, 1.0, Seed{rng.next()});
            return Members(f.members().begin(), f.members().end());
          },
          [](Members xs, std::size_t) {
            Vector acc = xs[0];
            for (std::size_t k = 1; k + 1 < xs.size(); ++k) acc += xs[k];
            xs.back() = -acc;
            return xs;
          },
          cfg.n - 1};
    }
    case TheoremId::Thm26: {
      require_complex(cfg.field);
      const BallConstraint b_re(P.m, P.M, Axis::Real, a);
      const BallConstraint b_im(P.l, P.L, Axis::Imag, a);
      auto p1 = [b_re](const Vector& x) { return project_to_ball(x, b_re); };
      auto p2 = [b_im](const Vector& x) { return project_to_ball(x, b_im); };
      return SearchProblem{
          [b_re, cfg, p1, p2](Rng& rng) {
            Members xs = sample_members(b_re, cfg, rng);
            for (std::size_t k = 0; k < xs.size(); ++k) xs = alternate(std::move(xs), k, p1, p2);
            return xs;
          },
          [p1, p2](Members xs, std::size_t k) { return alternate(std::move(xs), k, p1, p2); }, cfg.n};
    }
    case TheoremId::Thm27:
      return SearchProblem{
          [a, cfg](Rng& rng) { return copies_on_ray(a.vec(), cfg.n, rng, 0.1 * rng.uniform()); },
          identity, cfg.n};
    case TheoremId::Thm210:
    case TheoremId::Cor33:
      return ball_problem(BallConstraint(P.m, P.M, Axis::Real, a));
  }
  throw StructuralError("unknown theorem");
}

struct Scored {
  VectorFamily family;
  BoundReport report;
  double ratio;
};

/// nullopt when the candidate is structurally invalid or breaks a hypothesis.
inline std::optional<Scored> score(const SearchConfig& cfg, const UnitVector& a, Members xs,
                                   const Tolerance& tol) {
  try {
    VectorFamily f(std::move(xs), tol);
    BoundReport rep = evaluate_with_params(cfg.theorem, f, a, cfg.params, tol);
    if (!rep.hypotheses_ok) return std::nullopt;
    const double ratio = tightness_ratio(rep, tol);
    return Scored{std::move(f), std::move(rep), ratio};
  } catch (const StructuralError&) {
    return std::nullopt;
  }
}

}  // namespace detail

inline TightnessResult maximize_tightness(const SearchConfig& cfg, const Tolerance& tol = {}) {
  if (cfg.restarts < 1 || cfg.budget < 1) throw StructuralError("restarts and budget must be >= 1");
  if (cfg.budget > kEvaluationCap / cfg.restarts) {
    throw StructuralError("restarts * budget exceeds the evaluation cap");
  }
  if (!(cfg.step_init > 0.0) || !(cfg.step_min > 0.0)) {
    throw StructuralError("step sizes must be positive");
  }
  if (cfg.dim < 1 || cfg.n < 1) throw StructuralError("dim and n must be >= 1");
  if (is_schwarz(cfg.theorem) && cfg.n != 2) {
    throw StructuralError("reverse Schwarz bounds take exactly two vectors");
  }

  const UnitVector a = default_anchor(cfg.dim, cfg.field);
  const detail::SearchProblem problem = detail::make_problem(cfg, a);
  const std::size_t comps_per_coord = cfg.field == Field::Complex ? 2 : 1;

  std::optional<detail::Scored> overall;
  std::vector<TracePoint> overall_trace;
  std::size_t evaluations = 0;

  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(derive_seed(cfg.seed.value, restart));
    std::optional<detail::Scored> best;
    for (int attempt = 0; attempt < kMaxResampleAttempts && !best; ++attempt) {
      best = detail::score(cfg, a, problem.start(rng), tol);
    }
    if (!best) throw StructuralError("no feasible start found");

    std::size_t used = 1;
    std::vector<TracePoint> trace;
    if (cfg.record_trace) trace.push_back({0, best->ratio});
    double step = cfg.step_init;

    while (used < cfg.budget && step >= cfg.step_min) {
      bool improved = false;
      for (std::size_t k = 0; k < problem.free_members && used < cfg.budget; ++k) {
        for (std::size_t i = 0; i < cfg.dim && used < cfg.budget; ++i) {
          for (std::size_t comp = 0; comp < comps_per_coord && used < cfg.budget; ++comp) {
            for (double sign : {1.0, -1.0}) {
              if (used >= cfg.budget) break;
              const Scalar delta = comp == 0 ? Scalar{sign * step, 0.0} : Scalar{0.0, sign * step};
              detail::Members xs(best->family.members().begin(), best->family.members().end());
              xs[k] = xs[k].with_coordinate(i, xs[k][i] + delta);
              xs = problem.repair(std::move(xs), k);
              ++used;
              auto cand = detail::score(cfg, a, std::move(xs), tol);
              if (cand && cand->ratio > best->ratio) {
                best = std::move(cand);
                improved = true;
                if (cfg.record_trace) trace.push_back({used, best->ratio});
                break;
              }
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }

    evaluations += used;
    if (!overall || best->ratio > overall->ratio) {
      overall = std::move(best);
      overall_trace = std::move(trace);
    }
  }

  const bool degenerate = !(overall->report.rhs > tol.abs);
  return TightnessResult{std::move(overall->family), overall->ratio, std::move(overall->report),
                         evaluations, degenerate, std::move(overall_trace)};
}

struct SweepCell {
  std::optional<TightnessResult> result;
  std::string error;
};

/// One search per grid cell, in grid order.  Cell i runs with seed
/// derive_seed(grid[i].seed, i); a failing cell records its error and the
/// sweep continues.
inline std::vector<SweepCell> sharpness_sweep(const std::vector<SearchConfig>& grid,
                                              const Tolerance& tol = {}) {
  if (grid.empty()) throw StructuralError("sweep grid must not be empty");
  std::vector<SweepCell> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SearchConfig cfg = grid[i];
    cfg.seed = Seed{derive_seed(grid[i].seed.value, i)};
    try {
      out.push_back({maximize_tightness(cfg, tol), {}});
    } catch (const std::exception& e) {
      out.push_back({std::nullopt, e.what()});
    }
  }
  return out;
}

}  // namespace revineq
