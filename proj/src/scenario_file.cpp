#include "thermalcat/scenario_file.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include <json.hpp>

#include "thermalcat/error.hpp"

namespace thermalcat {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::Parse, "scenario field '" + field + "': " + what);
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t offending = byte > 0 ? byte - 1 : 0;
  for (std::size_t i = 0; i < std::min(offending, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) field_error(where.empty() ? key : where + "." + key, "unknown field");
}

double number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) field_error(path, "missing required number");
  const json& v = obj.at(key);
  if (!v.is_number()) field_error(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) field_error(path, "must be finite");
  return d;
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number(obj, key, path);
}

long long integer(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<long long>();
}

std::string string_field(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

const json& object_field(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_object()) field_error(path, "expected an object");
  return v;
}

const char* unit_name(UnitSystem u) { return u == UnitSystem::SI ? "SI" : "natural"; }
const char* time_unit_name(TimeUnit u) { return u == TimeUnit::Period ? "T" : "absolute"; }
const char* mode_name(KickMode m) { return m == KickMode::Boost ? "boost" : "superposition"; }

}  // namespace

bool operator==(const UniformGrid& a, const UniformGrid& b) {
  return a.min == b.min && a.max == b.max && a.count == b.count;
}

bool ScenarioFile::operator==(const ScenarioFile& o) const {
  return schema == o.schema && units == o.units && M == o.M && K0 == o.K0 && k == o.k &&
         theta_in_ThetaE == o.theta_in_ThetaE && theta_list_in_ThetaE == o.theta_list_in_ThetaE &&
         p_gamma == o.p_gamma && tau_in_T == o.tau_in_T && tau == o.tau && phi == o.phi &&
         cutoff_N == o.cutoff_N && kick_mode == o.kick_mode && pure_n == o.pure_n &&
         x_grid == o.x_grid && t_grid == o.t_grid && output == o.output && preset == o.preset &&
         caption_inferred == o.caption_inferred;
}

ScenarioFile ScenarioFile::parse(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, "malformed scenario JSON at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!root.is_object()) fail(ErrorCode::Parse, "scenario JSON must be an object");
  reject_unknown(root, "",
                 {"schema", "units", "M", "K0", "k", "theta_in_ThetaE", "theta_list_in_ThetaE",
                  "p_gamma", "tau_in_T", "tau", "phi", "cutoff_N", "kick_mode", "pure_n", "x_grid",
                  "t_grid", "output", "preset", "caption_inferred"});

  ScenarioFile f;
  if (!root.contains("schema")) field_error("schema", "missing (expected 1)");
  if (integer(root, "schema", "schema") != kScenarioSchema)
    field_error("schema", "unsupported schema version (expected 1)");

  if (!root.contains("units")) field_error("units", "missing (\"natural\" or \"SI\")");
  const std::string units = string_field(root, "units", "units");
  if (units == "natural")
    f.units = UnitSystem::Natural;
  else if (units == "SI")
    f.units = UnitSystem::SI;
  else
    field_error("units", "expected \"natural\" or \"SI\"");

  f.M = number(root, "M", "M");
  f.K0 = number(root, "K0", "K0");
  f.k = number(root, "k", "k");
  f.p_gamma = number(root, "p_gamma", "p_gamma");
  f.theta_in_ThetaE = optional_number(root, "theta_in_ThetaE", "theta_in_ThetaE").value_or(0.0);
  f.phi = optional_number(root, "phi", "phi").value_or(0.0);
  f.tau_in_T = optional_number(root, "tau_in_T", "tau_in_T");
  f.tau = optional_number(root, "tau", "tau");

  if (root.contains("theta_list_in_ThetaE")) {
    const json& list = root.at("theta_list_in_ThetaE");
    if (!list.is_array()) field_error("theta_list_in_ThetaE", "expected an array of numbers");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_number()) field_error("theta_list_in_ThetaE", "expected an array of numbers");
      f.theta_list_in_ThetaE.push_back(list[i].get<double>());
    }
  }
  if (root.contains("cutoff_N")) f.cutoff_N = static_cast<int>(integer(root, "cutoff_N", "cutoff_N"));
  if (root.contains("pure_n") && !root.at("pure_n").is_null())
    f.pure_n = static_cast<int>(integer(root, "pure_n", "pure_n"));
  if (root.contains("kick_mode")) {
    const std::string mode = string_field(root, "kick_mode", "kick_mode");
    if (mode == "superposition")
      f.kick_mode = KickMode::Superposition;
    else if (mode == "boost")
      f.kick_mode = KickMode::Boost;
    else
      field_error("kick_mode", "expected \"superposition\" or \"boost\"");
  }

  if (root.contains("x_grid")) {
    const json& g = object_field(root, "x_grid", "x_grid");
    reject_unknown(g, "x_grid", {"min", "max", "count"});
    if (!g.contains("count")) field_error("x_grid.count", "missing");
    const long long count = integer(g, "count", "x_grid.count");
    if (count < 1) field_error("x_grid.count", "must be >= 1");
    f.x_grid = UniformGrid{number(g, "min", "x_grid.min"), number(g, "max", "x_grid.max"),
                           static_cast<std::size_t>(count)};
  }
  if (root.contains("t_grid")) {
    const json& g = object_field(root, "t_grid", "t_grid");
    reject_unknown(g, "t_grid", {"min", "max", "count", "unit"});
    if (!g.contains("count")) field_error("t_grid.count", "missing");
    const long long count = integer(g, "count", "t_grid.count");
    if (count < 1) field_error("t_grid.count", "must be >= 1");
    TimeGridSpec spec{number(g, "min", "t_grid.min"), number(g, "max", "t_grid.max"),
                      static_cast<std::size_t>(count), f.tau ? TimeUnit::Absolute : TimeUnit::Period};
    if (g.contains("unit")) {
      const std::string unit = string_field(g, "unit", "t_grid.unit");
      if (unit == "T")
        spec.unit = TimeUnit::Period;
      else if (unit == "absolute")
        spec.unit = TimeUnit::Absolute;
      else
        field_error("t_grid.unit", "expected \"T\" or \"absolute\"");
    }
    f.t_grid = spec;
  }
  if (root.contains("output")) {
    const json& o = object_field(root, "output", "output");
    reject_unknown(o, "output", {"path", "format"});
    OutputSpec out;
    if (o.contains("path")) out.path = string_field(o, "path", "output.path");
    if (o.contains("format")) out.format = string_field(o, "format", "output.format");
    if (out.format != "csv" && out.format != "json")
      field_error("output.format", "expected \"csv\" or \"json\"");
    f.output = out;
  }
  if (root.contains("preset")) f.preset = string_field(root, "preset", "preset");
  if (root.contains("caption_inferred")) {
    const json& list = root.at("caption_inferred");
    if (!list.is_array()) field_error("caption_inferred", "expected an array of strings");
    for (const json& item : list) {
      if (!item.is_string()) field_error("caption_inferred", "expected an array of strings");
      f.caption_inferred.push_back(item.get<std::string>());
    }
  }

  // Semantic checks that are about the file rather than the physics.
  if (f.tau_in_T.has_value() == f.tau.has_value())
    field_error("tau_in_T", "give exactly one of 'tau_in_T' and 'tau'");
  if (f.tau_in_T) {
    if (!(*f.tau_in_T < 0.0)) field_error("tau_in_T", "release time must be negative");
    if (f.k == 0.0) field_error("tau_in_T", "period units need a weak trap k > 0; use 'tau'");
  }
  if (f.tau && !(*f.tau < 0.0)) field_error("tau", "release time must be negative");
  if (f.t_grid && f.t_grid->unit == TimeUnit::Period && f.k == 0.0)
    field_error("t_grid.unit", "period units need a weak trap k > 0");
  if (f.cutoff_N < 0 || f.cutoff_N > kMaxHermiteOrder) field_error("cutoff_N", "must lie in [0, 64]");
  if (f.pure_n && (*f.pure_n < 0 || *f.pure_n > kMaxHermiteOrder))
    field_error("pure_n", "must lie in [0, 64]");
  if (f.theta_in_ThetaE < 0.0) field_error("theta_in_ThetaE", "must be >= 0");
  for (double th : f.theta_list_in_ThetaE)
    if (!std::isfinite(th) || th < 0.0) field_error("theta_list_in_ThetaE", "entries must be >= 0");
  if (f.p_gamma < 0.0) field_error("p_gamma", "must be >= 0");
  if (!(f.phi >= 0.0 && f.phi < 2.0 * kPi)) field_error("phi", "must lie in [0, 2 pi)");
  try {
    f.params();
  } catch (const Error& e) {
    fail(ErrorCode::Parse, std::string("scenario parameters: ") + e.what());
  }
  return f;
}

std::string ScenarioFile::serialize() const {
  ordered_json j;
  j["schema"] = schema;
  j["units"] = unit_name(units);
  j["M"] = M;
  j["K0"] = K0;
  j["k"] = k;
  j["theta_in_ThetaE"] = theta_in_ThetaE;
  if (!theta_list_in_ThetaE.empty()) j["theta_list_in_ThetaE"] = theta_list_in_ThetaE;
  j["p_gamma"] = p_gamma;
  if (tau_in_T) j["tau_in_T"] = *tau_in_T;
  if (tau) j["tau"] = *tau;
  j["phi"] = phi;
  j["cutoff_N"] = cutoff_N;
  j["kick_mode"] = mode_name(kick_mode);
  if (pure_n) j["pure_n"] = *pure_n;
  if (x_grid) j["x_grid"] = {{"min", x_grid->min}, {"max", x_grid->max}, {"count", x_grid->count}};
  if (t_grid)
    j["t_grid"] = {{"min", t_grid->min},
                   {"max", t_grid->max},
                   {"count", t_grid->count},
                   {"unit", time_unit_name(t_grid->unit)}};
  if (output) j["output"] = {{"path", output->path}, {"format", output->format}};
  if (!preset.empty()) j["preset"] = preset;
  if (!caption_inferred.empty()) j["caption_inferred"] = caption_inferred;
  return j.dump(2) + "\n";
}

OscillatorParams ScenarioFile::params() const {
  return units == UnitSystem::SI ? OscillatorParams::si(M, K0, k) : OscillatorParams::natural(M, K0, k);
}

double ScenarioFile::to_absolute_time(double value, TimeUnit unit) const {
  if (unit == TimeUnit::Absolute) return value;
  const double period = derive_scales(params()).T_weak;
  if (!std::isfinite(period)) fail(ErrorCode::InvalidArgument, "period units need a weak trap k > 0");
  return value * period;
}

double ScenarioFile::release_time() const {
  if (tau) return *tau;
  if (tau_in_T) return to_absolute_time(*tau_in_T, TimeUnit::Period);
  fail(ErrorCode::InvalidArgument, "scenario has no release time");
}

Scenario ScenarioFile::to_scenario_physics() const {
  Scenario s;
  s.params = params();
  const DerivedScales scales = derive_scales(s.params);
  s.theta = theta_in_ThetaE * scales.ThetaE;
  s.kick = KickSpec{p_gamma, phi};
  s.tau = release_time();
  s.cutoff = cutoff_N;
  s.mode = kick_mode;
  s.pure_n = pure_n;
  s.validate_physics();
  return s;
}

Scenario ScenarioFile::to_scenario() const {
  if (!x_grid) fail(ErrorCode::InvalidArgument, "scenario needs an x_grid");
  if (!t_grid) fail(ErrorCode::InvalidArgument, "scenario needs a t_grid");
  Scenario s = to_scenario_physics();
  s.x_grid = *x_grid;
  s.t_grid = UniformGrid{to_absolute_time(t_grid->min, t_grid->unit),
                         to_absolute_time(t_grid->max, t_grid->unit), t_grid->count};
  s.validate();
  return s;
}

namespace {

struct PresetRow {
  const char* name;
  double K0;
  double k;
  double theta;
  double p_gamma;
  double tau;  // in T when k > 0, absolute otherwise
  double phi;
  KickMode mode;
  int pure_n;  // -1: thermal mixture
  double x_half;
  std::size_t x_count;
  double t_min;
  double t_max;
  bool theta_list;
  std::initializer_list<const char*> inferred;
};

// Mass M = 1 and natural units throughout.
const std::array<PresetRow, 15>& preset_rows() {
  static const std::array<PresetRow, 15> rows = {{
      {"fig1A", 16, 1, 0, 1.0, -0.75, kPi, KickMode::Boost, 0, 20, 1024, -0.75, 1.0, false,
       {"phi", "tau_in_T", "x_grid", "t_grid"}},
      {"fig1B", 81, 1, 0, 1.0, -0.25, kPi, KickMode::Superposition, 0, 30, 1024, -0.25, 1.0, false,
       {"x_grid", "t_grid"}},
      {"fig1C", 16, 1, 0, 2.5, -0.25, kPi, KickMode::Boost, 3, 20, 1024, -0.25, 1.0, false,
       {"phi", "x_grid", "t_grid"}},
      {"fig1D", 81, 1, 0, 2.5, -0.125, kPi, KickMode::Superposition, 3, 30, 1024, -0.125, 1.0, false,
       {"x_grid", "t_grid"}},
      {"fig2A", 16, 0, 1.0 / 3.0, 0.6, -0.5, kPi, KickMode::Superposition, -1, 48, 2048, 0.0, 2.0,
       false, {"x_grid", "t_grid"}},
      {"fig2B", 16, 0, 3.0, 0.6, -0.5, kPi, KickMode::Superposition, -1, 48, 2048, 0.0, 2.0, false,
       {"x_grid", "t_grid"}},
      {"fig2C", 16, 0, 3.0, 0.6, -0.5, 0.0, KickMode::Superposition, -1, 48, 2048, 0.0, 2.0, false,
       {"x_grid", "t_grid"}},
      {"fig3A", 16, 1, 3.0, 2.0, -0.05, kPi, KickMode::Superposition, -1, 20, 4096, 0.0, 1.0, false,
       {"phi", "x_grid", "t_grid"}},
      {"fig3B", 64, 4, 3.0, 2.0, -0.25, kPi, KickMode::Superposition, -1, 15, 4096, 0.0, 1.0, false,
       {"phi", "x_grid", "t_grid"}},
      {"fig3C", 32, 2, 2.815, 1.0, -0.1, kPi, KickMode::Superposition, -1, 17, 4096, 0.0, 1.0, false,
       {"phi", "x_grid", "t_grid"}},
      {"fig3D", 16, 1, 3.0, 4.0, -0.25, kPi, KickMode::Superposition, -1, 20, 4096, 0.0, 1.0, false,
       {"phi", "x_grid", "t_grid"}},
      {"fig4A", 16, 1, 3.0, 2.0, -0.05, kPi, KickMode::Superposition, -1, 20, 4096, 0.0, 1.0, true,
       {"phi", "theta_list_in_ThetaE", "x_grid", "t_grid"}},
      {"fig4B", 64, 4, 3.0, 2.0, -0.25, kPi, KickMode::Superposition, -1, 15, 4096, 0.0, 1.0, true,
       {"phi", "theta_list_in_ThetaE", "x_grid", "t_grid"}},
      {"fig4C", 32, 2, 2.815, 1.0, -0.1, kPi, KickMode::Superposition, -1, 17, 4096, 0.0, 1.0, true,
       {"phi", "theta_list_in_ThetaE", "x_grid", "t_grid"}},
      {"fig4D", 16, 1, 3.0, 4.0, -0.25, kPi, KickMode::Superposition, -1, 20, 4096, 0.0, 1.0, true,
       {"phi", "theta_list_in_ThetaE", "x_grid", "t_grid"}},
  }};
  return rows;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const PresetRow& row : preset_rows()) names.emplace_back(row.name);
  return names;
}

ScenarioFile preset(std::string_view name) {
  for (const PresetRow& row : preset_rows()) {
    if (name != row.name) continue;
    ScenarioFile f;
    f.units = UnitSystem::Natural;
    f.M = 1.0;
    f.K0 = row.K0;
    f.k = row.k;
    f.theta_in_ThetaE = row.theta;
    f.p_gamma = row.p_gamma;
    f.phi = row.phi;
    f.kick_mode = row.mode;
    if (row.pure_n >= 0) f.pure_n = row.pure_n;
    const TimeUnit unit = row.k > 0.0 ? TimeUnit::Period : TimeUnit::Absolute;
    if (unit == TimeUnit::Period)
      f.tau_in_T = row.tau;
    else
      f.tau = row.tau;
    if (row.theta_list)
      for (int i = 1; i <= 12; ++i) f.theta_list_in_ThetaE.push_back(0.25 * i);
    f.x_grid = UniformGrid{-row.x_half, row.x_half, row.x_count};
    f.t_grid = TimeGridSpec{row.t_min, row.t_max, 201, unit};
    f.preset = row.name;
    for (const char* field : row.inferred) f.caption_inferred.emplace_back(field);
    return f;
  }
  fail(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

}  // namespace thermalcat
