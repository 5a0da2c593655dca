#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "revineq/revineq.hpp"

namespace {

using revineq::ExperimentSpec;

void add_common(CLI::App& sub, ExperimentSpec& spec, std::string& format) {
  sub.add_option("--out", spec.output, "Output file (default: stdout)");
  sub.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--tol-abs", spec.tol.abs, "Absolute tolerance");
  sub.add_option("--tol-rel", spec.tol.rel, "Relative tolerance");
}

void add_params(CLI::App& sub, ExperimentSpec& spec) {
  auto& p = spec.params;
  const auto positive = CLI::PositiveNumber;
  sub.add_option("--r", p.r, "Disk parameter r")->check(positive);
  sub.add_option("--s", p.s, "Disk parameter s")->check(positive);
  sub.add_option("--p", p.p, "Disk parameter p")->check(positive);
  sub.add_option("--q", p.q, "Second disk radius q")->check(positive);
  sub.add_option("--m", p.m, "Ball parameter m")->check(positive);
  sub.add_option("--M", p.M, "Ball parameter M")->check(positive);
  sub.add_option("--l", p.l, "Imaginary-axis ball parameter l")->check(positive);
  sub.add_option("--L", p.L, "Imaginary-axis ball parameter L")->check(positive);
  sub.add_option("--radii", p.radii, "Per-member radii for thm27")->delimiter(',');
}

void add_theorem(CLI::App& sub, std::string& theorem, bool required) {
  std::vector<std::string> ids;
  for (auto t : revineq::kAllTheorems) ids.emplace_back(revineq::to_string(t));
  auto* opt = sub.add_option("--theorem", theorem, "Theorem id")->check(CLI::IsMember(ids));
  if (required) opt->required();
}

void add_shape(CLI::App& sub, ExperimentSpec& spec, std::string& field) {
  sub.add_option("--dim", spec.dim, "Dimension")->check(CLI::PositiveNumber);
  sub.add_option("--n", spec.n, "Family size")->check(CLI::PositiveNumber);
  sub.add_option("--field", field, "Scalar field")->check(CLI::IsMember({"real", "complex"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of reverse triangle and Schwarz-type inequalities"};
  app.set_version_flag("--version", revineq::kToolkitVersion);
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string theorem;
  std::string format = "json";
  std::string field = "complex";
  std::string kind = "disk";
  bool entropy = false;

  auto* verify = app.add_subcommand("verify", "Evaluate a theorem on every family in the input files");
  add_theorem(*verify, theorem, true);
  verify->add_option("--in", spec.inputs, "Family documents")->required()->check(CLI::ExistingFile);
  add_common(*verify, spec, format);
  add_params(*verify, spec);

  auto* sample = app.add_subcommand("sample", "Sample hypothesis-satisfying families");
  sample->add_option("--constraint", kind, "Sampling set")
      ->check(CLI::IsMember({"disk", "ball", "zero-sum"}));
  sample->add_option("--count", spec.count, "Number of families")->check(CLI::PositiveNumber);
  sample->add_option("--scale", spec.scale, "Radius for zero-sum sampling")->check(CLI::PositiveNumber);
  sample->add_option("--seed", spec.seed, "Base seed");
  sample->add_flag("--seed-entropy", entropy, "Draw the seed from std::random_device");
  add_shape(*sample, spec, field);
  add_common(*sample, spec, format);
  add_params(*sample, spec);

  auto* extremal = app.add_subcommand("extremal", "Search for families that make a bound tight");
  add_theorem(*extremal, theorem, true);
  extremal->add_option("--seed", spec.seed, "Base seed");
  extremal->add_flag("--seed-entropy", entropy, "Draw the seed from std::random_device");
  extremal->add_option("--restarts", spec.restarts, "Restarts")->check(CLI::PositiveNumber);
  extremal->add_option("--budget", spec.budget, "Evaluations per restart")->check(CLI::PositiveNumber);
  extremal->add_option("--step-init", spec.step_init, "Initial step")->check(CLI::PositiveNumber);
  extremal->add_option("--step-min", spec.step_min, "Smallest step")->check(CLI::PositiveNumber);
  extremal->add_option("--sweep-p", spec.sweep_p, "Run one search per p value")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  extremal->add_flag("--trace", spec.trace, "Record the ratio after each improvement");
  add_shape(*extremal, spec, field);
  add_common(*extremal, spec, format);
  add_params(*extremal, spec);

  auto* report = app.add_subcommand("report", "Aggregate run records into one table");
  report->add_option("--in", spec.inputs, "Run records");
  add_common(*report, spec, format);
  report->add_flag("--timing", spec.timing);

  for (auto* sub : {verify, sample, extremal}) {
    sub->add_flag("--timing", spec.timing, "Add wall time to the record (output is no longer reproducible)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return revineq::exit_code::kInputError;
  }

  if (verify->parsed()) spec.command = revineq::Command::Verify;
  if (sample->parsed()) spec.command = revineq::Command::Sample;
  if (extremal->parsed()) spec.command = revineq::Command::Extremal;
  if (report->parsed()) spec.command = revineq::Command::Report;

  if (!theorem.empty()) spec.theorem = revineq::theorem_from_string(theorem);
  spec.format = format == "csv" ? revineq::OutputFormat::Csv : revineq::OutputFormat::Json;
  spec.field = field == "real" ? revineq::Field::Real : revineq::Field::Complex;
  if (kind == "ball") spec.sample_kind = revineq::SampleKind::Ball;
  if (kind == "zero-sum") spec.sample_kind = revineq::SampleKind::ZeroSum;
  if (entropy) {
    std::random_device rd;
    spec.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }

  return revineq::execute(spec, std::cout, std::cerr);
}
