// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-revineq-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "support/instances.hpp"

using namespace revineq;
using testsupport::close12;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// 1. Soundness of every evaluator on 10,000 hypothesis-satisfying instances.
Outcome soundness() {
  const Tolerance tol;
  const auto t0 = Clock::now();
  std::size_t total = 0;
  std::size_t violations = 0;
  std::size_t rejected = 0;
  std::string worst;
  Rng rng(derive_seed(20241015, 1));
  for (TheoremId id : kAllTheorems) {
    if (id == TheoremId::Thm25) continue;
    std::size_t real_count = 0;
    std::size_t ok = 0;
    while (ok < 10000) {
      const BoundReport rep = testsupport::random_report(id, rng);
      if (!rep.hypotheses_ok) {
        ++rejected;
        if (rejected > 1000) return {false, fmt("generator for %s produced too many hypothesis failures", to_string(id))};
        continue;
      }
      ++ok;
      if (rep.field == Field::Real) ++real_count;
      if (rep.slack < -(1e-9 + 1e-9 * std::max(std::fabs(rep.lhs), std::fabs(rep.rhs)))) {
        ++violations;
        worst = fmt("%s lhs=%.17g rhs=%.17g", to_string(id), rep.lhs, rep.rhs);
      }
      (void)tol;
    }
    total += ok;
    if (testsupport::real_admissible(id) && real_count == 0) {
      return {false, fmt("%s never exercised the real field", to_string(id))};
    }
  }
  const double dt = seconds_since(t0);
  const bool pass = violations == 0 && dt <= 60.0;
  return {pass, fmt("%zu reports over 13 bounds, %zu violations%s%s, %zu hypothesis rejects redrawn, %.2f s (limit 60 s)",
                    total, violations, violations ? "; last: " : "", worst.c_str(), rejected, dt)};
}

// 2. Zero-sum families.
Outcome zero_sum() {
  Rng rng(derive_seed(20241015, 2));
  std::size_t bad = 0;
  double worst = INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const BoundReport rep = testsupport::random_report(TheoremId::Thm25, rng);
    // lhs = sqrt(r^2 alpha^2 + s^2), rhs = max_k |r x_k - s a|
    if (!(rep.lhs <= rep.rhs + 1e-9)) ++bad;
    worst = std::min(worst, rep.rhs - rep.lhs);
  }
  const UnitVector a(Vector::basis(3, 0, Field::Complex));
  const VectorFamily w({Vector::basis(3, 1, Field::Complex), -Vector::basis(3, 1, Field::Complex)});
  const BoundReport eq = thm25_evaluate(w, 1.0, 1.0, a);
  const double gap = std::fabs(eq.lhs - eq.rhs);
  const bool pass = bad == 0 && gap <= 1e-12 && eq.hypotheses_ok;
  return {pass, fmt("10000 families, %zu failures, min(rhs-lhs)=%.3g; witness {e2,-e2} |lhs-rhs|=%.3g", bad, worst, gap)};
}

// 3. Equality witnesses.
Outcome equality_witnesses() {
  Rng rng(derive_seed(20241015, 3));
  std::size_t checked = 0;
  std::size_t bad = 0;
  double worst = 0.0;
  auto check = [&](const BoundReport& rep) {
    ++checked;
    const double gap = std::fabs(rep.lhs - rep.rhs);
    worst = std::max(worst, gap);
    if (!(gap <= 1e-8) || !rep.equality.holds) ++bad;
  };
  for (int i = 0; i < 200; ++i) {
    const std::size_t dim = 1 + rng.below(16);
    const std::size_t n = 1 + rng.below(8);
    const Field field = rng.uniform() < 0.5 ? Field::Real : Field::Complex;
    const UnitVector a = random_unit_vector(dim, field, rng);
    const double r = testsupport::log_uniform(rng, 0.2, 5.0);
    const double s = testsupport::log_uniform(rng, 0.2, 5.0);
    const DiskConstraint c(r, s, s * rng.uniform(0.05, 0.95), Axis::Real, a);
    check(thm24_evaluate(equality_family_thm24(c, n, EqualityBranch::Outer), c));
    check(thm24_evaluate(equality_family_thm24(c, n, EqualityBranch::Inner), c));
    check(dm_evaluate(equality_family_dm(a, 1.0, n), a));
    // Positive multiples of a with zero radii.
    std::vector<Vector> xs;
    for (std::size_t k = 0; k < n; ++k) xs.push_back(rng.uniform(0.1, 3.0) * a.vec());
    check(thm27_evaluate(VectorFamily(std::move(xs)), a, RadiiList(n, 0.0)));
    const UnitVector ac = random_unit_vector(dim, Field::Complex, rng);
    const Thm22Witness w = equality_family_thm22(ac, n);
    check(thm22_evaluate(w.family, w.c_real, w.c_imag));
  }
  return {bad == 0, fmt("%zu witness families, %zu failures, max |lhs-rhs|=%.3g", checked, bad, worst)};
}

// 4. Specialization identities.
Outcome specializations() {
  Rng rng(derive_seed(20241015, 4));
  std::size_t bad_cor23 = 0, bad_cor23_literal = 0, bad_cor29 = 0, bad_cor33 = 0, bad_thm28 = 0, bad_thm210 = 0;
  for (int i = 0; i < 1000; ++i) {
    // Corrected corollary (p = q = s) against the general theorem.
    {
      const std::size_t dim = 1 + rng.below(16);
      const std::size_t n = 1 + rng.below(8);
      const auto c = testsupport::cor23_case(rng, dim, n);
      const BoundReport cor = cor23_evaluate(c.family, c.r, c.s, c.a);
      const BoundReport thm = thm22_evaluate(c.family, DiskConstraint(c.r, c.s, c.s, Axis::Real, c.a),
                                             DiskConstraint(c.r, c.s, c.s, Axis::Imag, c.a));
      const double closed = c.r * c.family.alpha_min() / (2.0 * c.s);
      if (!cor.hypotheses_ok || !close12(cor.lhs, thm.lhs) || !close12(thm.coefficients.at("alpha_rs"), closed) ||
          !close12(thm.coefficients.at("beta_rs"), closed)) {
        ++bad_cor23;
      }
    }
    // Literal substitution p = r, q = s, on instances with r = s.
    {
      const std::size_t dim = 1 + rng.below(16);
      const std::size_t n = 1 + rng.below(8);
      const double rs = testsupport::log_uniform(rng, 0.3, 3.0);
      const auto c = testsupport::cor23_case(rng, dim, n, rs);
      const BoundReport cor = cor23_evaluate(c.family, c.r, c.s, c.a, Cor23Variant::Printed);
      const BoundReport thm = thm22_evaluate(c.family, DiskConstraint(c.r, c.s, c.r, Axis::Real, c.a),
                                             DiskConstraint(c.r, c.s, c.s, Axis::Imag, c.a));
      if (!cor.hypotheses_ok || !close12(cor.lhs, thm.lhs)) ++bad_cor23_literal;
    }
    // cor29 against thm28 at p = 1.
    {
      const auto sh = testsupport::random_shape(rng, TheoremId::Cor29);
      const UnitVector a = random_unit_vector(sh.dim, sh.field, rng);
      const VectorFamily f = testsupport::disk_family(sh, DiskConstraint(1.0, 1.0, 1.0, Axis::Real, a), rng);
      const BoundReport cor = cor29_evaluate(f, a);
      const BoundReport thm = thm28_evaluate(f, a, 1.0);
      if (!close12(cor.rhs, thm.rhs) || !close12(thm.coefficients.at("beta"), f.alpha_min() / 2.0)) ++bad_cor29;
    }
    // cor33 against schwarz31 with r = 1, s = (m+M)/2, p = (M-m)/2.
    {
      const auto bc = testsupport::ball_case(rng, testsupport::random_shape(rng, TheoremId::Cor33));
      const BoundReport cor = cor33_evaluate(bc.family[0], bc.family[1], bc.c);
      const DiskConstraint d(1.0, (bc.c.m + bc.c.M) / 2.0, (bc.c.M - bc.c.m) / 2.0, Axis::Real, bc.c.anchor);
      const BoundReport thm = schwarz31_evaluate(bc.family[0], bc.family[1], d);
      if (!close12(cor.lhs, thm.lhs) || !close12(cor.rhs, thm.rhs)) ++bad_cor33;
    }
    // thm28 and thm210 rhs against thm27 with r_k = factor * Re<x_k, a>.
    {
      const auto sh = testsupport::random_shape(rng, TheoremId::Thm28);
      const UnitVector a = random_unit_vector(sh.dim, sh.field, rng);
      const double p = rng.uniform(0.05, 1.0);
      const VectorFamily f = testsupport::disk_family(sh, DiskConstraint(1.0, 1.0, p, Axis::Real, a), rng);
      const BoundReport b = thm28_evaluate(f, a, p);
      RadiiList radii;
      for (const auto& x : f.members()) radii.push_back(b.coefficients.at("factor") * inner(x, a.vec()).real());
      if (!close12(b.rhs, thm27_evaluate(f, a, radii).rhs)) ++bad_thm28;
    }
    {
      const auto bc = testsupport::ball_case(rng, testsupport::random_shape(rng, TheoremId::Thm210));
      const BoundReport b = thm210_evaluate(bc.family, bc.c);
      RadiiList radii;
      for (const auto& x : bc.family.members()) {
        radii.push_back(b.coefficients.at("factor") * inner(x, bc.c.anchor.vec()).real());
      }
      if (!close12(b.rhs, thm27_evaluate(bc.family, bc.c.anchor, radii).rhs)) ++bad_thm210;
    }
  }
  const std::size_t bad = bad_cor23 + bad_cor23_literal + bad_cor29 + bad_cor33 + bad_thm28 + bad_thm210;
  return {bad == 0,
          fmt("1000 instances each; mismatches: cor23/thm22(p=q=s) %zu, cor23/thm22(p=r,q=s; r=s) %zu, cor29/thm28 %zu, "
              "cor33/schwarz31 %zu, thm28/thm27 %zu, thm210/thm27 %zu",
              bad_cor23, bad_cor23_literal, bad_cor29, bad_cor33, bad_thm28, bad_thm210)};
}

// 5. The two forms of the ball constraint induce the same set.
Outcome ball_equivalence() {
  Rng rng(derive_seed(20241015, 5));
  std::size_t compared = 0;
  std::size_t disagree = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t dim = 1 + rng.below(16);
    const Field field = rng.uniform() < 0.5 ? Field::Real : Field::Complex;
    const UnitVector a = random_unit_vector(dim, field, rng);
    const double m = testsupport::log_uniform(rng, 0.1, 5.0);
    const double M = m * testsupport::log_uniform(rng, 1.0, 20.0);
    const Axis axis = field == Field::Complex && rng.uniform() < 0.3 ? Axis::Imag : Axis::Real;
    const BallConstraint c(m, M, axis, a);
    const Vector center = c.center_scale() * axis_vector(a, axis);
    const Vector dir = random_unit_vector(dim, field, rng).vec();
    const double dist = c.radius() * rng.uniform(0.0, 2.0) + 1e-3 * rng.uniform();
    const Vector x = center + dist * dir;
    const double m1 = ball_margin(x, c).value;
    const double m2 = ball_margin_equiv(x, c).value;
    if (std::fabs(m1) <= 1e-9) continue;
    ++compared;
    if ((m1 > 0.0) != (m2 > 0.0)) ++disagree;
  }
  return {disagree == 0 && compared > 9000, fmt("%zu points compared, %zu sign disagreements", compared, disagree)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 6. Extremal sharpness for thm24 and re-verification of the emitted family.
Outcome extremal_sharpness(const std::filesystem::path& work) {
  ExperimentSpec spec;
  spec.command = Command::Extremal;
  spec.theorem = TheoremId::Thm24;
  spec.dim = 4;
  spec.n = 2;
  spec.restarts = 8;
  spec.budget = 2000;
  const auto t0 = Clock::now();
  const RunOutcome ext = run_command(spec);
  const double dt = seconds_since(t0);
  if (ext.exit_code != 0) return {false, "extremal run failed: " + ext.diagnostic};

  const Json rec = Json::parse(ext.content);
  const Json& result = rec["results"][0];
  const double ratio = result["best_ratio"].get<double>();
  const std::string fam_path = (work / "extremal_best.json").string();
  write_file_atomic(fam_path, ext.content);

  ExperimentSpec verify;
  verify.command = Command::Verify;
  verify.theorem = TheoremId::Thm24;
  verify.inputs = {fam_path};
  const RunOutcome ver = run_command(verify);
  if (ver.exit_code != 0) return {false, "verify of emitted family failed: " + ver.diagnostic};
  const Json vrec = Json::parse(ver.content);
  const Json& stored = result["report"];
  const Json& again = vrec["reports"][0];
  const double dl = std::fabs(stored["lhs"].get<double>() - again["lhs"].get<double>());
  const double dr = std::fabs(stored["rhs"].get<double>() - again["rhs"].get<double>());
  const double ds = std::fabs(stored["slack"].get<double>() - again["slack"].get<double>());
  const bool pass = ratio >= 0.999 && dt <= 5.0 && dl <= 1e-12 && dr <= 1e-12 && ds <= 1e-12 &&
                    again["hypotheses_ok"].get<bool>();
  return {pass, fmt("best_ratio=%.9f (need >= 0.999) in %.2f s (limit 5 s); re-verify |dlhs|=%.3g |drhs|=%.3g",
                    ratio, dt, dl, dr)};
}

// 7. Byte-identical CLI output for repeated runs.
Outcome determinism(const std::string& cli, const std::filesystem::path& work) {
  const std::string w = work.string() + "/";
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"sample_disk", "sample --count 50 --dim 4 --n 3 --seed 42"},
      {"sample_zero", "sample --constraint zero-sum --count 20 --dim 3 --n 5 --field real --seed 9"},
      {"sample_ball_csv", "sample --constraint ball --m 0.5 --M 3 --count 10 --format csv --seed 5"},
      {"extremal", "extremal --theorem thm24 --restarts 2 --budget 300 --seed 3"},
      {"sweep", "extremal --theorem thm24 --restarts 1 --budget 200 --sweep-p 0.25,0.5,0.75,1"},
      {"verify", "verify --theorem thm22 --p 3 --q 3 --in " + w + "sample_disk.in.json"},
      {"verify_csv", "verify --theorem cor29 --format csv --in " + w + "sample_disk.in.json"},
      {"report", "report --format csv --in " + w + "verify.in.json --in " + w + "extremal.in.json"},
  };
  std::size_t identical = 0;
  std::string first_bad;
  for (const auto& [name, args] : runs) {
    const std::string out1 = w + name + ".1.out";
    const std::string out2 = w + name + ".2.out";
    const int c1 = run_cli(cli, args + " --out " + out1);
    const int c2 = run_cli(cli, args + " --out " + out2);
    const std::string a = slurp(out1);
    const bool same = c1 == c2 && c1 == 0 && !a.empty() && a == slurp(out2);
    if (same) {
      ++identical;
      std::filesystem::copy_file(out1, w + name + ".in.json", std::filesystem::copy_options::overwrite_existing);
    } else if (first_bad.empty()) {
      first_bad = name + " (exit " + std::to_string(c1) + "/" + std::to_string(c2) + ")";
    }
  }
  return {identical == runs.size(),
          fmt("%zu/%zu command lines byte-identical across two runs%s%s", identical, runs.size(),
              first_bad.empty() ? "" : "; first mismatch: ", first_bad.c_str())};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

// 8. serialize -> parse is bit-exact.
Outcome round_trip() {
  Rng rng(derive_seed(20241015, 8));
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + rng.below(16);
    const Field field = rng.uniform() < 0.5 ? Field::Real : Field::Complex;
    const std::size_t n = 1 + rng.below(8);
    const double scale = std::ldexp(1.0, static_cast<int>(rng.below(1000)) - 30);
    std::vector<Vector> xs;
    for (std::size_t k = 0; k < n; ++k) {
      Vector x = scale * gaussian_vector(dim, field, rng);
      if (k == 0) {
        // Awkward values: one ulp above 1, a subnormal, negative zero.
        x = x.with_coordinate(0, Scalar{std::nextafter(1.0, 2.0), field == Field::Complex ? -0.0 : 0.0});
        if (dim > 1) x = x.with_coordinate(1, Scalar{std::numeric_limits<double>::denorm_min(), 0.0});
      }
      xs.push_back(std::move(x));
    }
    FamilyDocument doc{field, dim, random_unit_vector(dim, field, rng), {VectorFamily(std::move(xs))}};
    const FamilyDocument back = parse_document(serialize_document(doc));
    bool ok = back.field == doc.field && back.dim == doc.dim && back.families.size() == 1 &&
              back.families[0].size() == n && back.anchor.has_value();
    for (std::size_t k = 0; ok && k < n; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        const Scalar u = doc.families[0][k][j];
        const Scalar v = back.families[0][k][j];
        ok = ok && same_bits(u.real(), v.real()) && same_bits(u.imag(), v.imag());
      }
    }
    for (std::size_t j = 0; ok && j < dim; ++j) {
      ok = same_bits(doc.anchor->vec()[j].real(), back.anchor->vec()[j].real()) &&
           same_bits(doc.anchor->vec()[j].imag(), back.anchor->vec()[j].imag());
    }
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("1000 documents, %zu not bit-identical after serialize->parse", bad)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <revineq-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const auto work = std::filesystem::temp_directory_path() / ("revineq_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"inequality soundness", soundness},
      {"zero-sum suite", zero_sum},
      {"equality witnesses", equality_witnesses},
      {"specialization identities", specializations},
      {"ball-form equivalence", ball_equivalence},
      {"extremal sharpness", [&] { return extremal_sharpness(work); }},
      {"CLI determinism", [&] { return determinism(cli, work); }},
      {"round-trip fidelity", round_trip},
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(static_cast<int>(i + 1), criteria[i].first, o);
  }
  std::filesystem::remove_all(work);
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
