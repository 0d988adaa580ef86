#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "thermalcat/dynamics.hpp"
#include "thermalcat/error.hpp"
#include "thermalcat/reports.hpp"
#include "thermalcat/scenario_file.hpp"

using namespace thermalcat;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("time to width inverts the width evolution") {
  for (double k : {0.0, 1.0}) {
    const OscillatorParams p = OscillatorParams::natural(1.0, 16.0, k);
    for (double width : {0.6, 0.9, 1.2}) {
      const double t = time_to_width(p, width);
      CHECK(std::abs(TrapSchedule(p, 0.0).width(t).s) == doctest::Approx(width).epsilon(1e-12));
    }
    CHECK(time_to_width(p, 0.3) == 0.0);
  }
  CHECK(code_of([] { (void)time_to_width(OscillatorParams::natural(1.0, 16.0, 1.0), 5.0); }) == ErrorCode::Domain);
  CHECK_THROWS_AS((void)time_to_width(OscillatorParams::natural(1.0, 16.0, 0.0), -1.0), Error);
}

TEST_CASE("SI parameter report") {
  const ParamsReport light = params_report(OscillatorParams::si(1e-15, 1e6, 0.0), 500e-9);
  CHECK(light.scales.v_expand == doctest::Approx(5.8e-5).epsilon(0.01));
  CHECK(light.time_to_width == doctest::Approx(8.6e-3).epsilon(0.01));
  CHECK(light.time_to_width == doctest::Approx(9e-3).epsilon(0.10));
  CHECK(light.scales.v_expand == doctest::Approx(60e-6).epsilon(0.10));

  const ParamsReport heavy = params_report(OscillatorParams::si(1e-10, 1e6, 0.0), 500e-9);
  CHECK(heavy.scales.v_expand == doctest::Approx(1.0e-8).epsilon(0.03));

  const nlohmann::json j = nlohmann::json::parse(light.to_json());
  CHECK(j["Omega0_per_s"].get<double>() == doctest::Approx(3.16e10).epsilon(0.01));
  CHECK(j["T_weak_s"].is_null());
  CHECK(j.contains("time_to_width_s"));
}

TEST_CASE("natural units are refused by the SI report") {
  CHECK(code_of([] { (void)params_report(OscillatorParams::natural(1.0, 16.0, 1.0), 1.0); }) == ErrorCode::Units);
}

TEST_CASE("validation self-test for an unquenched trap") {
  ScenarioFile f = preset("fig1B");
  f.k = f.K0;
  f.tau_in_T = -0.25;
  const ValidationReport r = validate_scenario(f.to_scenario_physics(), Tier::Accurate, 1);
  CHECK(r.pass);
  CHECK(r.max_error() < 1e-6);
}

TEST_CASE("fig1 presets pass the default tier") {
  for (const std::string name : {"fig1A", "fig1B", "fig1C", "fig1D"}) {
    CAPTURE(name);
    const ValidationReport r = validate_scenario(preset(name).to_scenario_physics(), Tier::Accurate, 1);
    CHECK(r.pass);
    CHECK(r.max_error() < 1e-6);
    const nlohmann::json j = nlohmann::json::parse(r.to_json());
    CHECK(j["pass"].get<bool>());
    CHECK(j["cases"].size() == 1);
  }
}

TEST_CASE("coarse tier reports second-order convergence") {
  const ValidationReport r = validate_scenario(preset("fig1A").to_scenario_physics(), Tier::Fast, 1);
  REQUIRE(r.cases.size() == 1);
  REQUIRE(r.cases[0].convergence_exponent.has_value());
  CHECK(*r.cases[0].convergence_exponent == doctest::Approx(2.0).epsilon(0.1));
  if (!r.pass) CHECK_FALSE(r.suggestion.empty());
}

TEST_CASE("validation of a free release over the t_grid span") {
  ScenarioFile f = preset("fig2B");
  Scenario sc = f.to_scenario();
  const ValidationReport r = validate_scenario(sc, Tier::Accurate, 1, 2);
  CHECK(r.cases.size() == 3);
  CHECK(r.t_half == doctest::Approx(2.0));
  CHECK(r.pass);
}

TEST_CASE("validation guards") {
  ScenarioFile f = preset("fig1B");
  f.k = f.K0 / 2e4;
  f.tau_in_T = -0.25;
  CHECK(code_of([&] { (void)validate_scenario(f.to_scenario_physics(), Tier::Fast, 1); }) == ErrorCode::InvalidArgument);

  ScenarioFile degenerate = preset("fig3B");
  degenerate.p_gamma = 0.0;
  degenerate.phi = 0.0;
  CHECK(code_of([&] { (void)validate_scenario(degenerate.to_scenario_physics(), Tier::Fast, 1, 0); }) ==
        ErrorCode::DegenerateSuperposition);
}
