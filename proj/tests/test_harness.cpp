#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "revineq/harness.hpp"
#include "support/instances.hpp"

using namespace revineq;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("revineq_harness_" + std::to_string(rd()) + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

std::string write_doc(const fs::path& dir, const std::string& name, const std::string& text) {
  const std::string path = (dir / name).string();
  write_file_atomic(path, text);
  return path;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentSpec verify_spec(TheoremId id, std::string path) {
  ExperimentSpec spec;
  spec.command = Command::Verify;
  spec.theorem = id;
  spec.inputs = {std::move(path)};
  return spec;
}

ExperimentSpec sample_spec(std::size_t count, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.command = Command::Sample;
  spec.count = count;
  spec.seed = seed;
  spec.dim = 3;
  spec.n = 4;
  return spec;
}

}  // namespace

TEST_CASE("verify on a tight family passes") {
  const fs::path dir = scratch_dir();
  const std::string path = write_doc(dir, "tight.json",
                                     R"({"field":"complex","dim":2,"families":[[[[1,0],[0,0]],[[1,0],[0,0]]]]})");
  const RunOutcome out = run_command(verify_spec(TheoremId::Thm24, path));
  CHECK(out.exit_code == exit_code::kOk);
  const Json rec = Json::parse(out.content);
  REQUIRE(rec["reports"].size() == 1);
  // alpha = (1 + 1 - 1) / 2 for x = a with r = s = p = 1.
  CHECK(rec["reports"][0]["lhs"].get<double>() == 1.0);
  CHECK(rec["reports"][0]["rhs"].get<double>() == 2.0);
  CHECK(rec["summary"]["violation_count"].get<std::size_t>() == 0);
  CHECK_FALSE(rec.contains("wall_time_s"));
  fs::remove_all(dir);
}

TEST_CASE("failed hypotheses are not violations") {
  const fs::path dir = scratch_dir();
  const std::string path = write_doc(dir, "far.json",
                                     R"({"field":"complex","dim":2,"families":[[[[10,0],[0,0]]]]})");
  const RunOutcome out = run_command(verify_spec(TheoremId::Thm24, path));
  CHECK(out.exit_code == exit_code::kOk);
  const Json rec = Json::parse(out.content);
  CHECK_FALSE(rec["reports"][0]["hypotheses_ok"].get<bool>());
  CHECK(rec["summary"]["hypotheses_failed"].get<std::size_t>() == 1);
  CHECK(rec["summary"]["violation_count"].get<std::size_t>() == 0);
  fs::remove_all(dir);
}

TEST_CASE("verify input errors") {
  const fs::path dir = scratch_dir();
  const std::string bad = write_doc(dir, "bad.json", "{\n  \"field\": \"complex\",\n  \"dim\": 2,\n  oops\n}");
  const RunOutcome malformed = run_command(verify_spec(TheoremId::Thm24, bad));
  CHECK(malformed.exit_code == exit_code::kInputError);
  CHECK_THAT(malformed.diagnostic, ContainsSubstring("line 4"));
  CHECK(malformed.content.empty());

  const RunOutcome missing = run_command(verify_spec(TheoremId::Thm24, (dir / "nope.json").string()));
  CHECK(missing.exit_code == exit_code::kInputError);

  const std::string schema = write_doc(dir, "schema.json", R"({"field":"quaternion","dim":2,"families":[]})");
  CHECK(run_command(verify_spec(TheoremId::Thm24, schema)).exit_code == exit_code::kInputError);

  const std::string zero = write_doc(dir, "zero.json", R"({"field":"real","dim":1,"families":[[[[1,0]]],[[[0,0]]]]})");
  const RunOutcome zero_out = run_command(verify_spec(TheoremId::Thm24, zero));
  CHECK(zero_out.exit_code == exit_code::kStructuralError);
  CHECK_THAT(zero_out.diagnostic, ContainsSubstring("families[1]"));

  const std::string real = write_doc(dir, "real.json", R"({"field":"real","dim":2,"families":[[[[1,0],[0,0]]]]})");
  const RunOutcome real_out = run_command(verify_spec(TheoremId::Thm22, real));
  CHECK(real_out.exit_code == exit_code::kStructuralError);
  CHECK_THAT(real_out.diagnostic, ContainsSubstring("imaginary-axis constraint requires complex field"));

  ExperimentSpec no_theorem = verify_spec(TheoremId::Thm24, real);
  no_theorem.theorem.reset();
  CHECK(run_command(no_theorem).exit_code == exit_code::kInputError);
  fs::remove_all(dir);
}

TEST_CASE("sample is deterministic and prefix stable") {
  const RunOutcome a = run_command(sample_spec(100, 17));
  const RunOutcome b = run_command(sample_spec(100, 17));
  CHECK(a.exit_code == exit_code::kOk);
  CHECK(a.content == b.content);
  CHECK_FALSE(a.content == run_command(sample_spec(100, 18)).content);

  const FamilyDocument many = parse_document(a.content);
  const FamilyDocument few = parse_document(run_command(sample_spec(3, 17)).content);
  REQUIRE(many.families.size() == 100);
  for (std::size_t i = 0; i < 3; ++i) CHECK(many.families[i] == few.families[i]);

  const Json rec = Json::parse(a.content);
  CHECK(rec["spec"]["seed"].get<std::uint64_t>() == 17);
  CHECK(rec["spec"]["tolerance"]["abs"].get<double>() == 1e-9);
  CHECK(rec["spec"]["tolerance"]["equality"].get<double>() == 1e-8);
}

TEST_CASE("sampled families satisfy their constraint") {
  ExperimentSpec spec = sample_spec(50, 3);
  spec.params.r = 2.0;
  spec.params.s = 1.0;
  spec.params.p = 0.3;
  const FamilyDocument doc = parse_document(run_command(spec).content);
  const DiskConstraint c(2.0, 1.0, 0.3, Axis::Real, doc.anchor_or_default());
  for (const auto& f : doc.families) {
    for (const auto& x : f.members()) REQUIRE(disk_margin(x, c).value >= -1e-12);
  }

  spec.sample_kind = SampleKind::ZeroSum;
  spec.n = 5;
  const FamilyDocument zs = parse_document(run_command(spec).content);
  for (const auto& f : zs.families) REQUIRE(norm(family_sum(f)) <= 1e-10);

  spec.sample_kind = SampleKind::Ball;
  spec.params.m = 0.5;
  spec.params.M = 1.5;
  const FamilyDocument balls = parse_document(run_command(spec).content);
  const BallConstraint bc(0.5, 1.5, Axis::Real, balls.anchor_or_default());
  for (const auto& f : balls.families) {
    for (const auto& x : f.members()) REQUIRE(ball_margin_equiv(x, bc).value >= -1e-12);
  }
}

TEST_CASE("sample csv layout") {
  ExperimentSpec spec = sample_spec(2, 1);
  spec.format = OutputFormat::Csv;
  const RunOutcome out = run_command(spec);
  CHECK(out.content.rfind("family,member,coord,re,im\n", 0) == 0);
  CHECK(count_lines(out.content) == 1 + 2 * 4 * 3);
}

TEST_CASE("extremal output re-verifies") {
  const fs::path dir = scratch_dir();
  ExperimentSpec spec;
  spec.command = Command::Extremal;
  spec.theorem = TheoremId::Thm24;
  spec.dim = 3;
  spec.restarts = 4;
  spec.budget = 1500;
  const RunOutcome out = run_command(spec);
  REQUIRE(out.exit_code == exit_code::kOk);
  const std::string path = write_doc(dir, "ext.json", out.content);
  const Json rec = Json::parse(out.content);
  const RunOutcome again = run_command(verify_spec(TheoremId::Thm24, path));
  REQUIRE(again.exit_code == exit_code::kOk);
  const Json vrec = Json::parse(again.content);
  const double ratio = rec["results"][0]["best_ratio"].get<double>();
  CHECK(ratio >= 0.999);
  CHECK(std::abs(vrec["reports"][0]["ratio"].get<double>() - ratio) <= 1e-12);
  CHECK(out.content == run_command(spec).content);
  fs::remove_all(dir);
}

TEST_CASE("extremal sweep keeps every cell") {
  ExperimentSpec spec;
  spec.command = Command::Extremal;
  spec.theorem = TheoremId::Thm24;
  spec.dim = 2;
  spec.restarts = 2;
  spec.budget = 500;
  spec.sweep_p = {0.25, 0.5, 0.75, 1.0};
  spec.trace = true;
  const RunOutcome out = run_command(spec);
  CHECK(out.exit_code == exit_code::kOk);
  const Json rec = Json::parse(out.content);
  REQUIRE(rec["results"].size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rec["results"][i]["p"].get<double>() == spec.sweep_p[i]);
    CHECK(rec["results"][i]["family_index"].get<std::size_t>() == i);
    CHECK(rec["results"][i].contains("trace"));
  }
  CHECK(rec["families"].size() == 4);

  spec.sweep_p = {50.0};
  CHECK(run_command(spec).exit_code == exit_code::kStructuralError);
}

TEST_CASE("report aggregates records") {
  const fs::path dir = scratch_dir();
  const std::string fams = write_doc(dir, "fams.json", run_command(sample_spec(100, 5)).content);
  ExperimentSpec v24 = verify_spec(TheoremId::Thm24, fams);
  ExperimentSpec v210 = verify_spec(TheoremId::Thm210, fams);
  v210.params.m = 0.1;
  v210.params.M = 10.0;
  const std::string r24 = write_doc(dir, "r24.json", run_command(v24).content);
  const std::string r210 = write_doc(dir, "r210.json", run_command(v210).content);

  ExperimentSpec rep;
  rep.command = Command::Report;
  rep.format = OutputFormat::Csv;
  rep.inputs = {r24, r210};
  const RunOutcome out = run_command(rep);
  CHECK(out.exit_code == exit_code::kOk);
  CHECK(out.content.rfind(kReportCsvHeader, 0) == 0);
  CHECK(count_lines(out.content) == 201);

  // Stable by theorem id: "thm210" sorts before "thm24", and within an id the
  // record order is preserved.
  std::istringstream lines(out.content);
  std::string line;
  std::getline(lines, line);
  std::vector<std::string> ids;
  while (std::getline(lines, line)) ids.push_back(line.substr(0, line.find(',')));
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(ids.front() == "thm210");

  const Json v24rec = Json::parse(read_file(r24));
  const Json v24first = v24rec["reports"][0];
  const std::string expected = csv_line(row_from_json(v24first, "r"));
  CHECK_THAT(out.content, ContainsSubstring(expected));

  rep.inputs = {};
  const RunOutcome empty = run_command(rep);
  CHECK(empty.exit_code == exit_code::kOk);
  CHECK(empty.content == kReportCsvHeader);

  rep.inputs = {(dir / "missing.json").string()};
  CHECK(run_command(rep).exit_code == exit_code::kInputError);
  rep.inputs = {fams};
  CHECK(run_command(rep).exit_code == exit_code::kInputError);
  fs::remove_all(dir);
}

TEST_CASE("documents round-trip exactly") {
  Rng rng(60);
  for (int i = 0; i < 200; ++i) {
    const std::size_t dim = 1 + rng.below(8);
    const Field field = i % 2 ? Field::Real : Field::Complex;
    FamilyDocument doc{field, dim, random_unit_vector(dim, field, rng), {}};
    for (std::size_t f = 0, nf = 1 + rng.below(4); f < nf; ++f) {
      std::vector<Vector> xs;
      for (std::size_t k = 0, n = 1 + rng.below(5); k < n; ++k) {
        xs.push_back(std::ldexp(1.0, static_cast<int>(rng.below(60)) - 20) * gaussian_vector(dim, field, rng));
      }
      doc.families.emplace_back(std::move(xs));
    }
    const std::string text = serialize_document(doc);
    const FamilyDocument back = parse_document(text);
    REQUIRE(back.families == doc.families);
    REQUIRE(back.anchor->vec() == doc.anchor->vec());
    REQUIRE(serialize_document(back) == text);
  }
}

TEST_CASE("execute writes output atomically") {
  const fs::path dir = scratch_dir();
  ExperimentSpec spec = sample_spec(2, 9);
  spec.output = (dir / "out.json").string();
  std::ostringstream out, err;
  CHECK(execute(spec, out, err) == exit_code::kOk);
  CHECK(out.str().empty());
  CHECK(fs::exists(spec.output));
  CHECK_FALSE(fs::exists(spec.output + ".tmp"));
  CHECK(read_file(spec.output) == run_command(spec).content);

  spec.output = (dir / "no_such_dir" / "out.json").string();
  CHECK(execute(spec, out, err) == exit_code::kInputError);
  fs::remove_all(dir);
}

TEST_CASE("timing is opt-in") {
  ExperimentSpec spec = sample_spec(1, 0);
  CHECK_FALSE(Json::parse(run_command(spec).content).contains("wall_time_s"));
  spec.timing = true;
  CHECK(Json::parse(run_command(spec).content).contains("wall_time_s"));
}
