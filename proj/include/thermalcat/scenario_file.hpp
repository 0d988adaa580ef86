#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermalcat/ensemble.hpp"

namespace thermalcat {

inline constexpr int kScenarioSchema = 1;

enum class TimeUnit { Period, Absolute };

struct TimeGridSpec {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;
  TimeUnit unit = TimeUnit::Period;

  bool operator==(const TimeGridSpec&) const = default;
};

struct OutputSpec {
  std::string path;
  std::string format = "csv";

  bool operator==(const OutputSpec&) const = default;
};

// On-disk scenario description (JSON, "schema": 1).
//
// Times: `tau_in_T` gives the release time as a fraction of the weak-trap
// period and needs k > 0; `tau` gives it in absolute time units (natural
// units, or seconds in SI mode). Exactly one must be present and it must be
// negative. The t_grid carries its own unit, "T" or "absolute".
// Temperatures are always in units of the Einstein temperature.
struct ScenarioFile {
  int schema = kScenarioSchema;
  UnitSystem units = UnitSystem::Natural;
  double M = 1.0;
  double K0 = 1.0;
  double k = 0.0;
  double theta_in_ThetaE = 0.0;
  std::vector<double> theta_list_in_ThetaE;
  double p_gamma = 0.0;
  std::optional<double> tau_in_T;
  std::optional<double> tau;
  double phi = 0.0;
  int cutoff_N = kDefaultCutoff;
  KickMode kick_mode = KickMode::Superposition;
  std::optional<int> pure_n;
  std::optional<UniformGrid> x_grid;
  std::optional<TimeGridSpec> t_grid;
  std::optional<OutputSpec> output;
  std::string preset;
  std::vector<std::string> caption_inferred;

  // Throws ErrorCode::Parse with the line/column or offending field.
  static ScenarioFile parse(std::string_view json_text);
  // Canonical pretty-printed JSON; parse(serialize()) == *this.
  std::string serialize() const;

  OscillatorParams params() const;
  double release_time() const;
  double to_absolute_time(double value, TimeUnit unit) const;
  // Full simulation scenario; requires both grids. Runs Scenario::validate().
  Scenario to_scenario() const;
  Scenario to_scenario_physics() const;

  bool operator==(const ScenarioFile&) const;
};

bool operator==(const UniformGrid& a, const UniformGrid& b);

// Figure presets fig1A..fig1D, fig2A..fig2C, fig3A..fig3D, fig4A..fig4D.
std::vector<std::string> preset_names();
// Throws ErrorCode::InvalidArgument for unknown names.
ScenarioFile preset(std::string_view name);

}  // namespace thermalcat
