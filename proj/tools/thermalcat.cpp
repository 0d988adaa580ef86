#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thermalcat/thermalcat.h"

namespace {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kUsage = 1, kDegenerate = 2, kNumerical = 3 };

struct Failure {
  tc_status status;
  std::string message;
};

int exit_code_for(tc_status status) {
  switch (status) {
    case TC_OK: return kOk;
    case TC_ERR_INVALID_ARGUMENT:
    case TC_ERR_PARSE:
    case TC_ERR_UNITS:
    case TC_ERR_CONTRACT: return kUsage;
    case TC_ERR_DEGENERATE: return kDegenerate;
    default: return kNumerical;
  }
}

void check(tc_status status) {
  if (status != TC_OK) throw Failure{status, tc_last_error()};
}

struct ScenarioDeleter {
  void operator()(tc_scenario* s) const { tc_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<tc_scenario, ScenarioDeleter>;

std::string take(char* s) {
  std::string out(s);
  tc_string_free(s);
  return out;
}

struct Options {
  std::string scenario_path;
  std::string preset;
  std::string out;
  std::string format;
  unsigned threads = 0;
  std::string tier = "accurate";
  std::vector<double> thetas;
  double width = 500e-9;
  int max_level = -1;
};

ScenarioPtr load(const Options& o) {
  tc_scenario* raw = nullptr;
  if (!o.preset.empty()) {
    check(tc_scenario_preset(o.preset.c_str(), &raw));
  } else {
    std::ifstream in(o.scenario_path, std::ios::binary);
    if (!in) throw Failure{TC_ERR_INVALID_ARGUMENT, "cannot read scenario file " + o.scenario_path};
    std::stringstream buffer;
    buffer << in.rdbuf();
    const tc_status status = tc_scenario_parse(buffer.str().c_str(), &raw);
    if (status != TC_OK) throw Failure{status, o.scenario_path + ": " + tc_last_error()};
  }
  return ScenarioPtr(raw);
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("THERMALCAT_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    std::cerr << "warning: ignoring THERMALCAT_THREADS=" << env << "\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Destination and format: flags win over the scenario's output block.
struct Sink {
  std::string path;
  std::string format;
};

Sink resolve_sink(const Options& o, const json& scenario) {
  Sink sink{o.out, o.format};
  if (scenario.contains("output")) {
    const json& out = scenario["output"];
    if (sink.path.empty() && out.contains("path")) sink.path = out["path"].get<std::string>();
    if (sink.format.empty() && out.contains("format")) sink.format = out["format"].get<std::string>();
  }
  if (sink.format.empty()) sink.format = "csv";
  if (sink.format != "csv" && sink.format != "json")
    throw Failure{TC_ERR_INVALID_ARGUMENT, "format must be csv or json"};
  return sink;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json json_num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const Sink& sink, const std::string& text) {
  if (sink.path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(sink.path, std::ios::binary);
  if (!out) throw Failure{TC_ERR_INVALID_ARGUMENT, "cannot write " + sink.path};
  out << text;
  if (!out) throw Failure{TC_ERR_INVALID_ARGUMENT, "failed writing " + sink.path};
}

void write_sidecar(const Sink& sink, json metadata, const std::string& hash) {
  if (sink.path.empty()) return;
  metadata["metadata_hash"] = hash;
  metadata["generated_at"] = utc_timestamp();
  write_text(Sink{sink.path + ".meta.json", "json"}, metadata.dump(2) + "\n");
}

json metadata_for(tc_scenario* sc, const std::string& command) {
  char* raw = nullptr;
  check(tc_scenario_metadata_json(sc, &raw));
  json meta = json::parse(take(raw));
  meta["command"] = command;
  return meta;
}

int cmd_density(const Options& o) {
  ScenarioPtr sc = load(o);
  char* raw = nullptr;
  check(tc_scenario_to_json(sc.get(), &raw));
  const Sink sink = resolve_sink(o, json::parse(take(raw)));

  size_t nx = 0, nt = 0;
  check(tc_scenario_grid_shape(sc.get(), &nx, &nt));
  std::vector<double> x(nx), t(nt), density(nx * nt);
  check(tc_density_map(sc.get(), resolve_threads(o.threads), x.data(), t.data(), density.data(), nx, nt));

  const json meta = metadata_for(sc.get(), "density");
  const std::string hash = fnv1a_hex(meta.dump());
  std::string text;
  if (sink.format == "csv") {
    text.reserve(nx * nt * 64);
    text += "# thermalcat density metadata_hash=" + hash + "\n";
    text += "x,t,P\n";
    for (size_t j = 0; j < nt; ++j)
      for (size_t i = 0; i < nx; ++i)
        text += num(x[i]) + "," + num(t[j]) + "," + num(density[j * nx + i]) + "\n";
  } else {
    json doc;
    doc["metadata_hash"] = hash;
    doc["x"] = x;
    doc["t"] = t;
    json rows = json::array();
    for (size_t j = 0; j < nt; ++j)
      rows.push_back(std::vector<double>(density.begin() + j * nx, density.begin() + (j + 1) * nx));
    doc["P"] = rows;
    text = doc.dump() + "\n";
  }
  write_text(sink, text);
  write_sidecar(sink, meta, hash);
  return kOk;
}

int cmd_visibility(const Options& o) {
  ScenarioPtr sc = load(o);
  char* raw = nullptr;
  check(tc_scenario_to_json(sc.get(), &raw));
  const json scenario = json::parse(take(raw));
  const Sink sink = resolve_sink(o, scenario);

  std::vector<double> thetas = o.thetas;
  if (thetas.empty()) {
    size_t count = 0;
    check(tc_scenario_thetas(sc.get(), nullptr, 0, &count));
    thetas.resize(count);
    check(tc_scenario_thetas(sc.get(), thetas.data(), count, &count));
  }
  size_t nx = 0, nt = 0;
  check(tc_scenario_grid_shape(sc.get(), &nx, &nt));
  std::vector<double> t(nt), v(thetas.size() * nt), a(thetas.size() * nt);
  size_t undefined = 0;
  check(tc_visibility_map(sc.get(), thetas.data(), thetas.size(), resolve_threads(o.threads), t.data(),
                          v.data(), a.data(), nt, &undefined));

  const bool free_release = scenario.value("k", 0.0) == 0.0;
  if (free_release) std::cerr << "warning: k = 0, no weak-trap period; A is reported as NaN\n";
  if (undefined > 0) std::cerr << "warning: " << undefined << " rows with undefined visibility (V = NaN)\n";

  json meta = metadata_for(sc.get(), "visibility");
  meta["thetas_in_ThetaE"] = thetas;
  meta["undefined_rows"] = undefined;
  const std::string hash = fnv1a_hex(meta.dump());
  std::string text;
  if (sink.format == "csv") {
    text += "# thermalcat visibility metadata_hash=" + hash + "\n";
    text += "theta,t,V,A,log10V\n";
    for (size_t i = 0; i < thetas.size(); ++i)
      for (size_t j = 0; j < nt; ++j) {
        const double vis = v[i * nt + j];
        text += num(thetas[i]) + "," + num(t[j]) + "," + num(vis) + "," + num(a[i * nt + j]) + "," +
                num(std::log10(vis)) + "\n";
      }
  } else {
    json doc;
    doc["metadata_hash"] = hash;
    doc["theta"] = thetas;
    doc["t"] = t;
    json vrows = json::array(), arows = json::array();
    for (size_t i = 0; i < thetas.size(); ++i) {
      json vr = json::array(), ar = json::array();
      for (size_t j = 0; j < nt; ++j) {
        vr.push_back(json_num(v[i * nt + j]));
        ar.push_back(json_num(a[i * nt + j]));
      }
      vrows.push_back(vr);
      arows.push_back(ar);
    }
    doc["V"] = vrows;
    doc["A"] = arows;
    text = doc.dump() + "\n";
  }
  write_text(sink, text);
  write_sidecar(sink, meta, hash);
  return kOk;
}

int cmd_params_report(const Options& o) {
  ScenarioPtr sc = load(o);
  char* raw = nullptr;
  check(tc_params_report(sc.get(), o.width, &raw));
  write_text(Sink{o.out, "json"}, take(raw));
  return kOk;
}

int cmd_validate(const Options& o) {
  ScenarioPtr sc = load(o);
  const tc_tier tier = o.tier == "accurate" ? TC_TIER_ACCURATE : TC_TIER_FAST;
  char* raw = nullptr;
  int passed = 0;
  check(tc_validate(sc.get(), tier, resolve_threads(o.threads), o.max_level, &raw, &passed));
  write_text(Sink{o.out, "json"}, take(raw));
  if (!passed) {
    std::cerr << "validation failed (see report)\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_preset(const std::string& name, bool list, const std::string& out) {
  if (list || name.empty()) {
    char* raw = nullptr;
    check(tc_preset_names(&raw));
    std::cout << take(raw);
    return kOk;
  }
  tc_scenario* raw_sc = nullptr;
  check(tc_scenario_preset(name.c_str(), &raw_sc));
  ScenarioPtr sc(raw_sc);
  char* raw = nullptr;
  check(tc_scenario_to_json(sc.get(), &raw));
  write_text(Sink{out, "json"}, take(raw));
  return kOk;
}

void add_source(CLI::App* cmd, Options& o) {
  auto* scenario = cmd->add_option("--scenario", o.scenario_path, "scenario JSON file")->check(CLI::ExistingFile);
  auto* preset = cmd->add_option("--preset", o.preset, "figure preset name instead of a file");
  scenario->excludes(preset);
  preset->excludes(scenario);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermalcat: thermal mirror superposition simulator"};
  app.set_version_flag("--version", std::string(tc_version()));
  app.require_subcommand(1);

  Options o;
  std::string preset_name;
  bool list = false;

  auto* density = app.add_subcommand("density", "probability density map P(x,t)");
  add_source(density, o);
  density->add_option("--out", o.out, "output path (default stdout)");
  density->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  density->add_option("--threads", o.threads, "worker threads (fallback THERMALCAT_THREADS)");

  auto* visibility = app.add_subcommand("visibility", "visibility V and benchmark A over (theta, t)");
  add_source(visibility, o);
  visibility->add_option("--out", o.out, "output path (default stdout)");
  visibility->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  visibility->add_option("--threads", o.threads, "worker threads (fallback THERMALCAT_THREADS)");
  visibility->add_option("--thetas", o.thetas, "temperatures in units of ThetaE")->delimiter(',');

  auto* params = app.add_subcommand("params-report", "SI scales and time to reach a width");
  add_source(params, o);
  params->add_option("--out", o.out, "output path (default stdout)");
  params->add_option("--width", o.width, "target width in metres")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "closed form versus split-operator grid");
  add_source(validate, o);
  validate->add_option("--out", o.out, "report path (default stdout)");
  validate->add_option("--tier", o.tier, "fast or accurate")
      ->check(CLI::IsMember({"fast", "accurate"}))
      ->capture_default_str();
  validate->add_option("--threads", o.threads, "worker threads (fallback THERMALCAT_THREADS)");
  validate->add_option("--max-level", o.max_level, "highest level checked (default: cutoff)");

  auto* preset = app.add_subcommand("preset", "print a figure preset as scenario JSON");
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", list, "list preset names");
  preset->add_option("--out", o.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (CLI::App* cmd : {density, visibility, params, validate}) {
    if (cmd->parsed() && o.scenario_path.empty() && o.preset.empty()) {
      std::cerr << "error: " << cmd->get_name() << " needs --scenario or --preset\n";
      return kUsage;
    }
  }

  try {
    if (density->parsed()) return cmd_density(o);
    if (visibility->parsed()) return cmd_visibility(o);
    if (params->parsed()) return cmd_params_report(o);
    if (validate->parsed()) return cmd_validate(o);
    if (preset->parsed()) return cmd_preset(preset_name, list, o.out);
  } catch (const Failure& f) {
    std::cerr << "error (" << tc_status_name(f.status) << "): " << f.message << "\n";
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
