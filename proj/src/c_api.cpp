#include "thermalcat/thermalcat.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include <json.hpp>

#include "thermalcat/error.hpp"
#include "thermalcat/parallel.hpp"
#include "thermalcat/reports.hpp"
#include "thermalcat/scenario_file.hpp"

struct tc_scenario {
  thermalcat::ScenarioFile file;
};

namespace {

using namespace thermalcat;

thread_local std::string last_error;

tc_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return TC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return TC_ERR_PARSE;
    case ErrorCode::Domain: return TC_ERR_DOMAIN;
    case ErrorCode::DegenerateSuperposition: return TC_ERR_DEGENERATE;
    case ErrorCode::UndefinedVisibility: return TC_ERR_UNDEFINED_VISIBILITY;
    case ErrorCode::GridTooSmall: return TC_ERR_GRID_TOO_SMALL;
    case ErrorCode::Numerical: return TC_ERR_NUMERICAL;
    case ErrorCode::Units: return TC_ERR_UNITS;
    case ErrorCode::ContractViolation: return TC_ERR_CONTRACT;
  }
  return TC_ERR_INTERNAL;
}

template <class F>
tc_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return TC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return TC_ERR_INTERNAL;
}

void require(const void* ptr, const char* what) {
  if (!ptr) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

std::vector<double> t_nodes(const ScenarioFile& f) {
  if (!f.t_grid) fail(ErrorCode::InvalidArgument, "scenario needs a t_grid");
  const UniformGrid grid{f.to_absolute_time(f.t_grid->min, f.t_grid->unit),
                         f.to_absolute_time(f.t_grid->max, f.t_grid->unit), f.t_grid->count};
  grid.validate("t_grid");
  return grid.nodes();
}

}  // namespace

extern "C" {

const char* tc_version(void) { return THERMALCAT_VERSION; }

const char* tc_last_error(void) { return last_error.c_str(); }

const char* tc_status_name(tc_status status) {
  switch (status) {
    case TC_OK: return "ok";
    case TC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TC_ERR_PARSE: return "parse error";
    case TC_ERR_DOMAIN: return "domain error";
    case TC_ERR_DEGENERATE: return "degenerate superposition";
    case TC_ERR_UNDEFINED_VISIBILITY: return "undefined visibility";
    case TC_ERR_GRID_TOO_SMALL: return "grid too small";
    case TC_ERR_NUMERICAL: return "numerical failure";
    case TC_ERR_UNITS: return "unit error";
    case TC_ERR_CONTRACT: return "contract violation";
    case TC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void tc_string_free(char* s) { delete[] s; }

tc_status tc_scenario_parse(const char* json_text, tc_scenario** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = nullptr;
    *out = new tc_scenario{ScenarioFile::parse(json_text)};
  });
}

tc_status tc_scenario_preset(const char* name, tc_scenario** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = nullptr;
    *out = new tc_scenario{preset(name)};
  });
}

void tc_scenario_free(tc_scenario* scenario) { delete scenario; }

tc_status tc_preset_names(char** out) {
  return guarded([&] {
    require(out, "out");
    std::string joined;
    for (const std::string& name : preset_names()) joined += name + "\n";
    *out = duplicate(joined);
  });
}

tc_status tc_scenario_to_json(const tc_scenario* scenario, char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = duplicate(scenario->file.serialize());
  });
}

tc_status tc_scenario_metadata_json(const tc_scenario* scenario, char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const ScenarioFile& f = scenario->file;
    const Scenario physics = f.to_scenario_physics();
    const DerivedScales d = derive_scales(physics.params);

    nlohmann::ordered_json j;
    j["tool"] = "thermalcat";
    j["version"] = THERMALCAT_VERSION;
    j["scenario"] = nlohmann::ordered_json::parse(f.serialize());
    j["derived"] = {{"sigma0", d.sigma0},           {"Omega0", d.Omega0},
                    {"omega", d.omega},             {"ThetaE", d.ThetaE},
                    {"v_expand", d.v_expand},       {"T_weak", finite_or_null(d.T_weak)},
                    {"release_time", physics.tau}, {"theta", physics.theta}};
    const ThermalModel model(physics);
    j["thermal_weights"] = model.weights().weights;
    j["tail_mass"] = model.weights().tail_mass;
    j["caption_inferred"] = f.caption_inferred;
    *out = duplicate(j.dump(2) + "\n");
  });
}

tc_status tc_scenario_grid_shape(const tc_scenario* scenario, size_t* nx, size_t* nt) {
  return guarded([&] {
    require(scenario, "scenario");
    require(nx, "nx");
    require(nt, "nt");
    const ScenarioFile& f = scenario->file;
    if (!f.x_grid || !f.t_grid) fail(ErrorCode::InvalidArgument, "scenario has no x_grid/t_grid");
    *nx = f.x_grid->count;
    *nt = f.t_grid->count;
  });
}

tc_status tc_scenario_thetas(const tc_scenario* scenario, double* out, size_t capacity,
                             size_t* count) {
  return guarded([&] {
    require(scenario, "scenario");
    require(count, "count");
    const ScenarioFile& f = scenario->file;
    std::vector<double> thetas = f.theta_list_in_ThetaE;
    if (thetas.empty()) thetas.push_back(f.theta_in_ThetaE);
    *count = thetas.size();
    if (capacity > 0) require(out, "out");
    for (std::size_t i = 0; i < std::min(capacity, thetas.size()); ++i) out[i] = thetas[i];
  });
}

tc_status tc_density_map(const tc_scenario* scenario, unsigned threads, double* x, double* t,
                         double* density, size_t nx, size_t nt) {
  return guarded([&] {
    require(scenario, "scenario");
    require(x, "x");
    require(t, "t");
    require(density, "density");
    const Scenario sc = scenario->file.to_scenario();
    if (nx != sc.x_grid.count || nt != sc.t_grid.count)
      fail(ErrorCode::InvalidArgument, "buffer sizes do not match the scenario grids");
    const std::vector<double> xs = sc.x_grid.nodes();
    const std::vector<double> ts = sc.t_grid.nodes();
    std::copy(xs.begin(), xs.end(), x);
    std::copy(ts.begin(), ts.end(), t);
    const ThermalModel model(sc);
    parallel_for(nt, threads, [&](std::size_t row) {
      model.density_slice(ts[row], xs, std::span<double>(density + row * nx, nx));
    });
  });
}

tc_status tc_visibility_map(const tc_scenario* scenario, const double* thetas, size_t ntheta,
                            unsigned threads, double* t, double* v, double* a, size_t nt,
                            size_t* undefined) {
  return guarded([&] {
    require(scenario, "scenario");
    require(thetas, "thetas");
    require(t, "t");
    require(v, "v");
    require(a, "a");
    require(undefined, "undefined");
    const ScenarioFile& f = scenario->file;
    const std::vector<double> ts = t_nodes(f);
    if (nt != ts.size()) fail(ErrorCode::InvalidArgument, "t buffer size does not match the t_grid");
    std::copy(ts.begin(), ts.end(), t);

    const Scenario base = f.to_scenario_physics();
    if (ts.front() < base.tau) fail(ErrorCode::InvalidArgument, "t_grid starts before release");
    const DerivedScales d = derive_scales(base.params);
    std::vector<ThermalModel> models;
    models.reserve(ntheta);
    for (std::size_t i = 0; i < ntheta; ++i) {
      if (!std::isfinite(thetas[i]) || thetas[i] < 0.0)
        fail(ErrorCode::InvalidArgument, "temperatures must be finite and >= 0");
      Scenario sc = base;
      sc.pure_n.reset();
      sc.theta = thetas[i] * d.ThetaE;
      models.emplace_back(sc);
    }

    std::vector<unsigned char> flagged(ntheta * nt, 0);
    parallel_for(ntheta * nt, threads, [&](std::size_t idx) {
      const std::size_t i = idx / nt;
      const double time = ts[idx % nt];
      try {
        v[idx] = models[i].visibility(time);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UndefinedVisibility) throw;
        v[idx] = std::numeric_limits<double>::quiet_NaN();
        flagged[idx] = 1;
      }
      if (base.params.free())
        a[idx] = std::numeric_limits<double>::quiet_NaN();
      else if (thetas[i] == 0.0)
        a[idx] = 1.0;
      else
        a[idx] = benchmark_A(thetas[i] * d.ThetaE, d.ThetaE, d.omega, time);
    });
    *undefined = 0;
    for (unsigned char flag : flagged) *undefined += flag;
  });
}

tc_status tc_visibility_at(const tc_scenario* scenario, double t, double* out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = ThermalModel(scenario->file.to_scenario_physics()).visibility(t);
  });
}

tc_status tc_benchmark_A(double theta, double theta_e, double omega, double t, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = benchmark_A(theta, theta_e, omega, t);
  });
}

tc_status tc_heat_capacity_ratio(double theta_e_over_theta, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = heat_capacity_ratio(theta_e_over_theta);
  });
}

tc_status tc_params_report(const tc_scenario* scenario, double target_width, char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = duplicate(params_report(scenario->file.params(), target_width).to_json());
  });
}

tc_status tc_validate(const tc_scenario* scenario, tc_tier tier, unsigned threads, int max_level,
                      char** report_json, int* passed) {
  return guarded([&] {
    require(scenario, "scenario");
    require(report_json, "report_json");
    require(passed, "passed");
    Scenario sc = scenario->file.to_scenario_physics();
    if (scenario->file.t_grid) {
      const std::vector<double> ts = t_nodes(scenario->file);
      sc.t_grid = UniformGrid{ts.front(), ts.back(), ts.size()};
    }
    const std::optional<int> level = max_level < 0 ? std::nullopt : std::optional<int>(max_level);
    const ValidationReport report =
        validate_scenario(sc, tier == TC_TIER_FAST ? Tier::Fast : Tier::Accurate, threads, level);
    *report_json = duplicate(report.to_json());
    *passed = report.pass ? 1 : 0;
  });
}

}  // extern "C"
