#pragma once

// File formats and command drivers behind the `revineq` command-line tool.
//
// Family document (JSON):
//   {"field": "real" | "complex", "dim": d, "anchor": [[re, im], ...]?,
//    "families": [ [ [[re, im], ...], ... ], ... ]}
// Scalars are always two-element arrays; in real documents im must be 0.
// Doubles are written in shortest round-trip form, so parse(serialize(f))
// is bit-identical to f.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "revineq/bounds.hpp"
#include "revineq/extremal.hpp"
#include "revineq/scalar_space.hpp"
#include "revineq/witnesses.hpp"

namespace revineq {

inline constexpr const char* kToolkitVersion = "0.1.0";

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kInputError = 2;
inline constexpr int kStructuralError = 3;
}  // namespace exit_code

/// Malformed or missing input (exit status 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// Indented JSON; vectors ([[re, im], ...]) stay on one line.
inline void write_json(std::string& out, const Json& j, int depth = 0) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  const auto primitive = [](const Json& v) {
    return std::none_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); });
  };
  const auto flat = [&](const Json& v) {
    return std::all_of(v.begin(), v.end(), [&](const Json& e) {
      return !e.is_structured() || (e.is_array() && primitive(e));
    });
  };
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [k, v] : j.items()) {
      pad(depth + 1);
      out += Json(k).dump() + ": ";
      write_json(out, v, depth + 1);
      out += ++i < j.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "}";
  } else if (j.is_array() && !j.empty() && !flat(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      pad(depth + 1);
      write_json(out, j[i], depth + 1);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ", ";
      write_json(out, j[i], depth);
    }
    out += "]";
  } else {
    out += j.dump();
  }
}

inline std::string pretty(const Json& j) {
  std::string out;
  write_json(out, j);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Scalars, vectors, families

namespace io_detail {

inline Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline double read_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(where + ": missing field \"" + key + "\"");
  }
  return obj.at(key);
}

}  // namespace io_detail

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& c : v.coords()) out.push_back(Json::array({c.real(), c.imag()}));
  return out;
}

inline Vector vector_from_json(const Json& j, Field field, std::size_t dim, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of [re, im] pairs");
  if (j.size() != dim) {
    throw InputError(where + ": expected " + std::to_string(dim) + " coordinates, found " +
                     std::to_string(j.size()));
  }
  std::vector<Scalar> coords;
  coords.reserve(dim);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const Json& z = j[i];
    if (!z.is_array() || z.size() != 2) throw InputError(at + ": expected [re, im]");
    const double re = io_detail::read_number(z[0], at + "[0]");
    const double im = io_detail::read_number(z[1], at + "[1]");
    if (field == Field::Real && im != 0.0) {
      throw InputError(at + ": imaginary part must be 0 in a real document");
    }
    coords.emplace_back(re, im);
  }
  return Vector(std::move(coords), field);
}

inline Json family_to_json(const VectorFamily& f) {
  Json out = Json::array();
  for (const auto& x : f.members()) out.push_back(vector_to_json(x));
  return out;
}

struct FamilyDocument {
  Field field = Field::Complex;
  std::size_t dim = 1;
  std::optional<UnitVector> anchor;
  std::vector<VectorFamily> families;

  [[nodiscard]] UnitVector anchor_or_default() const {
    return anchor ? *anchor : default_anchor(dim, field);
  }
};

inline Json document_to_json(const FamilyDocument& doc) {
  Json out;
  out["field"] = to_string(doc.field);
  out["dim"] = doc.dim;
  if (doc.anchor) out["anchor"] = vector_to_json(doc.anchor->vec());
  out["families"] = Json::array();
  for (const auto& f : doc.families) out["families"].push_back(family_to_json(f));
  return out;
}

inline Field field_from_string(const std::string& s) {
  if (s == "real") return Field::Real;
  if (s == "complex") return Field::Complex;
  throw InputError("field must be \"real\" or \"complex\", got \"" + s + "\"");
}

/// Parses a family document.  Schema problems raise InputError; a zero
/// member or a non-unit anchor raises StructuralError.
inline FamilyDocument document_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("document: expected a JSON object");
  FamilyDocument doc;
  const Json& field = io_detail::require(j, "field", "document");
  if (!field.is_string()) throw InputError("field: expected a string");
  doc.field = field_from_string(field.get<std::string>());
  const Json& dim = io_detail::require(j, "dim", "document");
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() < 1) {
    throw InputError("dim: expected a positive integer");
  }
  doc.dim = dim.get<std::size_t>();
  if (j.contains("anchor") && !j.at("anchor").is_null()) {
    doc.anchor = UnitVector(vector_from_json(j.at("anchor"), doc.field, doc.dim, "anchor"));
  }
  const Json& fams = io_detail::require(j, "families", "document");
  if (!fams.is_array()) throw InputError("families: expected an array");
  for (std::size_t f = 0; f < fams.size(); ++f) {
    const std::string where = "families[" + std::to_string(f) + "]";
    if (!fams[f].is_array() || fams[f].empty()) throw InputError(where + ": expected a nonempty array");
    std::vector<Vector> members;
    for (std::size_t k = 0; k < fams[f].size(); ++k) {
      members.push_back(
          vector_from_json(fams[f][k], doc.field, doc.dim, where + "[" + std::to_string(k) + "]"));
    }
    try {
      doc.families.emplace_back(std::move(members));
    } catch (const StructuralError& e) {
      throw StructuralError(where + ": " + e.what());
    }
  }
  return doc;
}

inline std::string serialize_document(const FamilyDocument& doc) { return pretty(document_to_json(doc)); }

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline FamilyDocument parse_document(const std::string& text, const std::string& source = "input") {
  return document_from_json(parse_json_text(text, source));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Write-temp-then-rename.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write output file: " + path);
    out << content;
    if (!out.flush()) throw InputError("failed writing output file: " + path);
  }
  std::filesystem::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// Reports

inline Json report_to_json(const BoundReport& rep, const Tolerance& tol) {
  Json out;
  out["theorem"] = to_string(rep.theorem);
  out["n"] = rep.n;
  out["dim"] = rep.dim;
  out["field"] = to_string(rep.field);
  out["hypotheses_ok"] = rep.hypotheses_ok;
  out["lhs"] = io_detail::number(rep.lhs);
  out["rhs"] = io_detail::number(rep.rhs);
  out["slack"] = io_detail::number(rep.slack);
  out["ratio"] = io_detail::number(tightness_ratio(rep, tol));
  Json coeffs = Json::object();
  for (const auto& [k, v] : rep.coefficients) coeffs[k] = io_detail::number(v);
  out["coefficients"] = std::move(coeffs);
  Json margins = Json::array();
  for (const auto& m : rep.hypothesis_margins) {
    Json jm;
    jm["name"] = m.name;
    jm["value"] = io_detail::number(m.margin.value);
    if (m.strict) jm["strict"] = true;
    margins.push_back(std::move(jm));
  }
  out["hypothesis_margins"] = std::move(margins);
  Json eq;
  eq["predicted_sum"] = vector_to_json(rep.equality.predicted_sum);
  eq["residual"] = io_detail::number(rep.equality.residual);
  eq["auxiliary_ok"] = rep.equality.auxiliary_ok;
  eq["holds"] = rep.equality.holds;
  out["equality"] = std::move(eq);
  return out;
}

struct SlackSummary {
  std::size_t count = 0;
  std::size_t hypotheses_failed = 0;
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double mean_slack = 0.0;

  void add(const BoundReport& rep, const Tolerance& tol) {
    ++count;
    if (!rep.hypotheses_ok) ++hypotheses_failed;
    if (rep.violates(tol)) ++violations;
    min_slack = std::min(min_slack, rep.slack);
    mean_slack += (rep.slack - mean_slack) / static_cast<double>(count);
  }

  [[nodiscard]] Json to_json() const {
    Json out;
    out["count"] = count;
    out["hypotheses_failed"] = hypotheses_failed;
    out["violation_count"] = violations;
    out["min_slack"] = count ? io_detail::number(min_slack) : Json(nullptr);
    out["mean_slack"] = count ? io_detail::number(mean_slack) : Json(nullptr);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Experiment specs

enum class Command { Verify, Sample, Extremal, Report };
enum class OutputFormat { Json, Csv };
enum class SampleKind { Disk, Ball, ZeroSum };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Verify: return "verify";
    case Command::Sample: return "sample";
    case Command::Extremal: return "extremal";
    case Command::Report: return "report";
  }
  return "unknown";
}

inline const char* to_string(SampleKind k) {
  switch (k) {
    case SampleKind::Disk: return "disk";
    case SampleKind::Ball: return "ball";
    case SampleKind::ZeroSum: return "zero-sum";
  }
  return "unknown";
}

struct ExperimentSpec {
  Command command = Command::Verify;
  std::optional<TheoremId> theorem;
  std::vector<std::string> inputs;
  std::string output;  // empty: standard output
  OutputFormat format = OutputFormat::Json;
  SearchParams params;
  Tolerance tol;
  std::uint64_t seed = 0;
  std::size_t dim = 4;
  std::size_t n = 2;
  Field field = Field::Complex;
  // extremal
  std::size_t restarts = 8;
  std::size_t budget = 2000;
  double step_init = 0.5;
  double step_min = 1e-9;
  std::vector<double> sweep_p;
  bool trace = false;
  // sample
  SampleKind sample_kind = SampleKind::Disk;
  std::size_t count = 1;
  double scale = 1.0;
  // Adds wall-clock time to the record, which makes output run-dependent.
  bool timing = false;
};

inline Json spec_to_json(const ExperimentSpec& s) {
  Json out;
  out["command"] = to_string(s.command);
  out["theorem"] = s.theorem ? Json(to_string(*s.theorem)) : Json(nullptr);
  out["inputs"] = s.inputs;
  out["format"] = s.format == OutputFormat::Json ? "json" : "csv";
  out["seed"] = s.seed;
  out["dim"] = s.dim;
  out["n"] = s.n;
  out["field"] = to_string(s.field);
  Json p;
  p["r"] = s.params.r;
  p["s"] = s.params.s;
  p["p"] = s.params.p;
  p["q"] = s.params.q;
  p["m"] = s.params.m;
  p["M"] = s.params.M;
  p["l"] = s.params.l;
  p["L"] = s.params.L;
  p["radii"] = s.params.radii;
  out["params"] = std::move(p);
  Json t;
  t["abs"] = s.tol.abs;
  t["rel"] = s.tol.rel;
  t["unit"] = s.tol.unit;
  t["ortho"] = s.tol.ortho;
  t["nonzero"] = s.tol.nonzero;
  t["equality"] = s.tol.equality;
  out["tolerance"] = std::move(t);
  if (s.command == Command::Extremal) {
    out["restarts"] = s.restarts;
    out["budget"] = s.budget;
    out["step_init"] = s.step_init;
    out["step_min"] = s.step_min;
    out["sweep_p"] = s.sweep_p;
    out["trace"] = s.trace;
  }
  if (s.command == Command::Sample) {
    out["kind"] = to_string(s.sample_kind);
    out["count"] = s.count;
    out["scale"] = s.scale;
  }
  return out;
}

struct RunOutcome {
  std::string content;
  int exit_code = exit_code::kOk;
  std::string diagnostic;
};

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline constexpr const char* kReportCsvHeader = "theorem_id,n,dim,field,lhs,rhs,slack,ratio,hypotheses_ok\n";

struct ReportRow {
  std::string theorem;
  std::size_t n;
  std::size_t dim;
  std::string field;
  double lhs;
  double rhs;
  double slack;
  double ratio;
  bool hypotheses_ok;
};

inline std::string csv_line(const ReportRow& r) {
  return r.theorem + "," + std::to_string(r.n) + "," + std::to_string(r.dim) + "," + r.field + "," +
         format_double(r.lhs) + "," + format_double(r.rhs) + "," + format_double(r.slack) + "," +
         format_double(r.ratio) + "," + (r.hypotheses_ok ? "true" : "false") + "\n";
}

inline ReportRow row_from_report(const BoundReport& rep, const Tolerance& tol) {
  return {to_string(rep.theorem), rep.n, rep.dim, to_string(rep.field), rep.lhs,
          rep.rhs, rep.slack, tightness_ratio(rep, tol), rep.hypotheses_ok};
}

inline ReportRow row_from_json(const Json& j, const std::string& where) {
  auto num = [&](const char* key) {
    const Json& v = io_detail::require(j, key, where);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return io_detail::read_number(v, where + "." + key);
  };
  auto str = [&](const char* key) {
    const Json& v = io_detail::require(j, key, where);
    if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
    return v.get<std::string>();
  };
  auto count = [&](const char* key) {
    const Json& v = io_detail::require(j, key, where);
    if (!v.is_number_unsigned()) throw InputError(where + "." + key + ": expected an integer");
    return v.get<std::size_t>();
  };
  const Json& ok = io_detail::require(j, "hypotheses_ok", where);
  if (!ok.is_boolean()) throw InputError(where + ".hypotheses_ok: expected a boolean");
  return {str("theorem"), count("n"), count("dim"), str("field"), num("lhs"),
          num("rhs"),     num("slack"), num("ratio"), ok.get<bool>()};
}

// ---------------------------------------------------------------------------
// Commands

namespace cmd_detail {

inline Json record_header(const ExperimentSpec& spec) {
  Json rec;
  rec["spec"] = spec_to_json(spec);
  rec["toolkit_version"] = kToolkitVersion;
  return rec;
}

inline void stamp_time(Json& rec, const ExperimentSpec& spec,
                       std::chrono::steady_clock::time_point started) {
  if (!spec.timing) return;
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - started;
  rec["wall_time_s"] = dt.count();
}

inline TheoremId require_theorem(const ExperimentSpec& spec) {
  if (!spec.theorem) throw InputError("--theorem is required for this command");
  return *spec.theorem;
}

inline SearchConfig search_config(const ExperimentSpec& spec) {
  SearchConfig cfg;
  cfg.theorem = require_theorem(spec);
  cfg.params = spec.params;
  cfg.dim = spec.dim;
  cfg.n = spec.n;
  cfg.field = spec.field;
  cfg.restarts = spec.restarts;
  cfg.budget = spec.budget;
  cfg.step_init = spec.step_init;
  cfg.step_min = spec.step_min;
  cfg.seed = Seed{spec.seed};
  cfg.record_trace = spec.trace;
  return cfg;
}

}  // namespace cmd_detail

inline RunOutcome cmd_verify(const ExperimentSpec& spec) {
  const auto started = std::chrono::steady_clock::now();
  const TheoremId theorem = cmd_detail::require_theorem(spec);
  if (spec.inputs.empty()) throw InputError("verify needs an input file (--in)");

  Json rec = cmd_detail::record_header(spec);
  Json reports = Json::array();
  SlackSummary summary;
  std::vector<ReportRow> rows;
  for (const auto& path : spec.inputs) {
    const FamilyDocument doc = parse_document(read_file(path), path);
    const UnitVector a = doc.anchor_or_default();
    for (const auto& family : doc.families) {
      const BoundReport rep = evaluate_with_params(theorem, family, a, spec.params, spec.tol);
      summary.add(rep, spec.tol);
      reports.push_back(report_to_json(rep, spec.tol));
      rows.push_back(row_from_report(rep, spec.tol));
    }
  }
  rec["reports"] = std::move(reports);
  rec["summary"] = summary.to_json();
  cmd_detail::stamp_time(rec, spec, started);

  RunOutcome out;
  if (spec.format == OutputFormat::Csv) {
    out.content = kReportCsvHeader;
    for (const auto& r : rows) out.content += csv_line(r);
  } else {
    out.content = pretty(rec);
  }
  out.exit_code = summary.violations == 0 ? exit_code::kOk : exit_code::kViolation;
  if (summary.violations) out.diagnostic = std::to_string(summary.violations) + " violation(s) found";
  return out;
}

inline RunOutcome cmd_sample(const ExperimentSpec& spec) {
  const auto started = std::chrono::steady_clock::now();
  if (spec.count < 1) throw InputError("--count must be at least 1");
  const UnitVector a = default_anchor(spec.dim, spec.field);
  FamilyDocument doc{spec.field, spec.dim, a, {}};
  for (std::size_t i = 0; i < spec.count; ++i) {
    const Seed seed{derive_seed(spec.seed, i)};
    switch (spec.sample_kind) {
      case SampleKind::Disk: {
        const DiskConstraint c(spec.params.r, spec.params.s, spec.params.p, Axis::Real, a);
        doc.families.push_back(sample_in_disk({spec.dim, spec.n, spec.field, c, seed}, spec.tol));
        break;
      }
      case SampleKind::Ball: {
        const BallConstraint c(spec.params.m, spec.params.M, Axis::Real, a);
        doc.families.push_back(sample_in_ball({spec.dim, spec.n, spec.field, c, seed}, spec.tol));
        break;
      }
      case SampleKind::ZeroSum:
        doc.families.push_back(sample_zero_sum(spec.dim, spec.n, spec.field, spec.scale, seed, spec.tol));
        break;
    }
  }

  RunOutcome out;
  if (spec.format == OutputFormat::Csv) {
    out.content = "family,member,coord,re,im\n";
    for (std::size_t f = 0; f < doc.families.size(); ++f) {
      for (std::size_t k = 0; k < doc.families[f].size(); ++k) {
        const Vector& x = doc.families[f][k];
        for (std::size_t i = 0; i < x.dim(); ++i) {
          out.content += std::to_string(f) + "," + std::to_string(k) + "," + std::to_string(i) + "," +
                         format_double(x[i].real()) + "," + format_double(x[i].imag()) + "\n";
        }
      }
    }
  } else {
    Json rec = document_to_json(doc);
    const Json header = cmd_detail::record_header(spec);
    rec["spec"] = header["spec"];
    rec["toolkit_version"] = header["toolkit_version"];
    cmd_detail::stamp_time(rec, spec, started);
    out.content = pretty(rec);
  }
  return out;
}

inline RunOutcome cmd_extremal(const ExperimentSpec& spec) {
  const auto started = std::chrono::steady_clock::now();
  const SearchConfig base = cmd_detail::search_config(spec);

  std::vector<SweepCell> cells;
  if (spec.sweep_p.empty()) {
    cells.push_back({maximize_tightness(base, spec.tol), {}});
  } else {
    std::vector<SearchConfig> grid;
    for (double p : spec.sweep_p) {
      SearchConfig cfg = base;
      cfg.params.p = p;
      grid.push_back(cfg);
    }
    cells = sharpness_sweep(grid, spec.tol);
  }

  Json rec = cmd_detail::record_header(spec);
  const UnitVector a = default_anchor(spec.dim, spec.field);
  rec["field"] = to_string(spec.field);
  rec["dim"] = spec.dim;
  rec["anchor"] = vector_to_json(a.vec());
  rec["families"] = Json::array();
  Json results = Json::array();
  SlackSummary summary;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Json r;
    r["cell"] = i;
    if (!spec.sweep_p.empty()) r["p"] = spec.sweep_p[i];
    if (cells[i].result) {
      const TightnessResult& t = *cells[i].result;
      r["best_ratio"] = io_detail::number(t.best_ratio);
      r["evaluations_used"] = t.evaluations_used;
      r["degenerate_rhs"] = t.degenerate_rhs;
      r["family_index"] = rec["families"].size();
      r["report"] = report_to_json(t.report, spec.tol);
      if (spec.trace) {
        Json tr = Json::array();
        for (const auto& pt : t.trace) tr.push_back(Json::array({pt.iteration, pt.ratio}));
        r["trace"] = std::move(tr);
      }
      rec["families"].push_back(family_to_json(t.best_family));
      summary.add(t.report, spec.tol);
    } else {
      r["error"] = cells[i].error;
      ++failures;
    }
    results.push_back(std::move(r));
  }
  rec["results"] = std::move(results);
  rec["summary"] = summary.to_json();
  cmd_detail::stamp_time(rec, spec, started);

  RunOutcome out;
  if (spec.format == OutputFormat::Csv) {
    out.content = kReportCsvHeader;
    for (const auto& c : cells) {
      if (c.result) out.content += csv_line(row_from_report(c.result->report, spec.tol));
    }
  } else {
    out.content = pretty(rec);
  }
  if (summary.violations) {
    out.exit_code = exit_code::kViolation;
    out.diagnostic = std::to_string(summary.violations) + " violation(s) found";
  } else if (failures == cells.size()) {
    out.exit_code = exit_code::kStructuralError;
    out.diagnostic = cells.front().error;
  } else if (failures) {
    out.diagnostic = std::to_string(failures) + " sweep cell(s) failed";
  }
  return out;
}

/// Rows of a verify or extremal record, in record order.
inline std::vector<ReportRow> rows_from_record(const Json& rec, const std::string& source) {
  std::vector<ReportRow> rows;
  if (rec.contains("reports")) {
    const Json& reps = rec.at("reports");
    if (!reps.is_array()) throw InputError(source + ": reports must be an array");
    for (std::size_t i = 0; i < reps.size(); ++i) {
      rows.push_back(row_from_json(reps[i], source + ": reports[" + std::to_string(i) + "]"));
    }
  } else if (rec.contains("results")) {
    const Json& res = rec.at("results");
    if (!res.is_array()) throw InputError(source + ": results must be an array");
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (res[i].contains("report")) {
        rows.push_back(
            row_from_json(res[i].at("report"), source + ": results[" + std::to_string(i) + "].report"));
      }
    }
  } else {
    throw InputError(source + ": not a run record (no \"reports\" or \"results\")");
  }
  return rows;
}

inline RunOutcome cmd_report(const ExperimentSpec& spec) {
  std::vector<ReportRow> rows;
  for (const auto& path : spec.inputs) {
    auto more = rows_from_record(parse_json_text(read_file(path), path), path);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.theorem < b.theorem; });

  RunOutcome out;
  if (spec.format == OutputFormat::Json) {
    Json rec = cmd_detail::record_header(spec);
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["theorem_id"] = r.theorem;
      j["n"] = r.n;
      j["dim"] = r.dim;
      j["field"] = r.field;
      j["lhs"] = io_detail::number(r.lhs);
      j["rhs"] = io_detail::number(r.rhs);
      j["slack"] = io_detail::number(r.slack);
      j["ratio"] = io_detail::number(r.ratio);
      j["hypotheses_ok"] = r.hypotheses_ok;
      arr.push_back(std::move(j));
    }
    rec["rows"] = std::move(arr);
    out.content = pretty(rec);
  } else {
    out.content = kReportCsvHeader;
    for (const auto& r : rows) out.content += csv_line(r);
  }
  return out;
}

/// Runs a command and maps failures onto the exit-status contract:
/// InputError -> 2, StructuralError -> 3.
inline RunOutcome run_command(const ExperimentSpec& spec) {
  try {
    spec.tol.validate();
    switch (spec.command) {
      case Command::Verify: return cmd_verify(spec);
      case Command::Sample: return cmd_sample(spec);
      case Command::Extremal: return cmd_extremal(spec);
      case Command::Report: return cmd_report(spec);
    }
    throw InputError("unknown command");
  } catch (const InputError& e) {
    return {{}, exit_code::kInputError, e.what()};
  } catch (const StructuralError& e) {
    return {{}, exit_code::kStructuralError, e.what()};
  }
}

/// run_command plus output: the content goes to spec.output (atomically) or
/// to `out` when no path is set; diagnostics go to `err`.
inline int execute(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  RunOutcome res = run_command(spec);
  if (!res.content.empty()) {
    if (spec.output.empty()) {
      out << res.content;
    } else {
      try {
        write_file_atomic(spec.output, res.content);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kInputError;
      }
    }
  }
  if (!res.diagnostic.empty()) err << (res.exit_code ? "error: " : "note: ") << res.diagnostic << "\n";
  return res.exit_code;
}

}  // namespace revineq
