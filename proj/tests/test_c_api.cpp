#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermalcat/thermalcat.h"

namespace {

tc_scenario* load_preset(const char* name) {
  tc_scenario* sc = nullptr;
  REQUIRE(tc_scenario_preset(name, &sc) == TC_OK);
  REQUIRE(sc != nullptr);
  return sc;
}

std::string take(char* s) {
  std::string out(s);
  tc_string_free(s);
  return out;
}

const char* kDegenerate = R"({"schema": 1, "units": "natural", "M": 1, "K0": 16, "k": 1,
  "theta_in_ThetaE": 0, "p_gamma": 0, "tau_in_T": -0.25, "phi": 0,
  "x_grid": {"min": -30, "max": 30, "count": 256}, "t_grid": {"min": 0, "max": 1, "count": 5}})";

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(tc_version()) > 0);
  CHECK(std::string(tc_status_name(TC_OK)) == "ok");
  CHECK(std::string(tc_status_name(TC_ERR_DEGENERATE)) == "degenerate superposition");
  CHECK(std::string(tc_status_name(static_cast<tc_status>(42))) == "unknown status");
}

TEST_CASE("null arguments are rejected with a message") {
  tc_scenario* sc = nullptr;
  CHECK(tc_scenario_parse(nullptr, &sc) == TC_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(tc_last_error()) > 0);
  CHECK(tc_scenario_preset("fig1A", nullptr) == TC_ERR_INVALID_ARGUMENT);
  double out = 0.0;
  CHECK(tc_visibility_at(nullptr, 0.0, &out) == TC_ERR_INVALID_ARGUMENT);
  tc_scenario_free(nullptr);
  tc_string_free(nullptr);
}

TEST_CASE("parse errors map to the parse status") {
  tc_scenario* sc = nullptr;
  CHECK(tc_scenario_parse("{\"schema\": 1,,}", &sc) == TC_ERR_PARSE);
  CHECK(sc == nullptr);
  CHECK(std::string(tc_last_error()).find("line 1") != std::string::npos);
  CHECK(tc_scenario_preset("nope", &sc) == TC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("successful calls clear the last error") {
  tc_scenario* sc = nullptr;
  CHECK(tc_scenario_parse("{", &sc) != TC_OK);
  sc = load_preset("fig1A");
  CHECK(std::string(tc_last_error()).empty());
  tc_scenario_free(sc);
}

TEST_CASE("preset names and JSON round trip") {
  char* names = nullptr;
  REQUIRE(tc_preset_names(&names) == TC_OK);
  const std::string list = take(names);
  CHECK(list.find("fig1A\n") != std::string::npos);
  CHECK(list.find("fig4D\n") != std::string::npos);

  tc_scenario* sc = load_preset("fig3C");
  char* json = nullptr;
  REQUIRE(tc_scenario_to_json(sc, &json) == TC_OK);
  const std::string text = take(json);
  tc_scenario* again = nullptr;
  REQUIRE(tc_scenario_parse(text.c_str(), &again) == TC_OK);
  char* json2 = nullptr;
  REQUIRE(tc_scenario_to_json(again, &json2) == TC_OK);
  CHECK(take(json2) == text);
  tc_scenario_free(again);
  tc_scenario_free(sc);
}

TEST_CASE("metadata carries scales, weights and provenance") {
  tc_scenario* sc = load_preset("fig3A");
  char* raw = nullptr;
  REQUIRE(tc_scenario_metadata_json(sc, &raw) == TC_OK);
  const nlohmann::json meta = nlohmann::json::parse(take(raw));
  CHECK(meta["version"].get<std::string>() == tc_version());
  CHECK(meta["derived"]["Omega0"].get<double>() == doctest::Approx(4.0));
  CHECK(meta["derived"]["T_weak"].get<double>() == doctest::Approx(2.0 * M_PI));
  CHECK(meta["thermal_weights"].size() == 14);
  CHECK(meta["tail_mass"].get<double>() == doctest::Approx(std::exp(-14.0 / 3.0)));
  CHECK(meta["scenario"]["preset"] == "fig3A");
  CHECK(meta["caption_inferred"].size() >= 1);
  CHECK_FALSE(meta.contains("generated_at"));
  tc_scenario_free(sc);
}

TEST_CASE("density map is normalized per time slice") {
  tc_scenario* sc = load_preset("fig1A");
  size_t nx = 0, nt = 0;
  REQUIRE(tc_scenario_grid_shape(sc, &nx, &nt) == TC_OK);
  std::vector<double> x(nx), t(nt), p(nx * nt);
  REQUIRE(tc_density_map(sc, 2, x.data(), t.data(), p.data(), nx, nt) == TC_OK);
  const double dx = x[1] - x[0];
  for (size_t j = 0; j < nt; j += 20) {
    double norm = 0.0;
    for (size_t i = 0; i < nx; ++i) norm += p[j * nx + i] * dx;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(tc_density_map(sc, 1, x.data(), t.data(), p.data(), nx - 1, nt) == TC_ERR_INVALID_ARGUMENT);
  tc_scenario_free(sc);
}

TEST_CASE("density map results do not depend on the thread count") {
  tc_scenario* sc = load_preset("fig2C");
  size_t nx = 0, nt = 0;
  REQUIRE(tc_scenario_grid_shape(sc, &nx, &nt) == TC_OK);
  std::vector<double> x(nx), t(nt), one(nx * nt), many(nx * nt);
  REQUIRE(tc_density_map(sc, 1, x.data(), t.data(), one.data(), nx, nt) == TC_OK);
  REQUIRE(tc_density_map(sc, 5, x.data(), t.data(), many.data(), nx, nt) == TC_OK);
  CHECK(std::memcmp(one.data(), many.data(), one.size() * sizeof(double)) == 0);
  tc_scenario_free(sc);
}

TEST_CASE("fig3 density revives after half a period") {
  for (const char* name : {"fig3A", "fig3B", "fig3C", "fig3D"}) {
    tc_scenario* sc = load_preset(name);
    size_t nx = 0, nt = 0;
    REQUIRE(tc_scenario_grid_shape(sc, &nx, &nt) == TC_OK);
    std::vector<double> x(nx), t(nt), p(nx * nt);
    REQUIRE(tc_density_map(sc, 1, x.data(), t.data(), p.data(), nx, nt) == TC_OK);
    // t_grid spans [0, T] with 201 nodes: row 100 is T/2
    double worst = 0.0;
    for (size_t i = 0; i < nx; ++i) worst = std::max(worst, std::abs(p[i] - p[100 * nx + i]));
    CHECK(worst < 1e-8);
    tc_scenario_free(sc);
  }
}

TEST_CASE("visibility map and benchmark column") {
  tc_scenario* sc = load_preset("fig4B");
  size_t count = 0;
  REQUIRE(tc_scenario_thetas(sc, nullptr, 0, &count) == TC_OK);
  std::vector<double> thetas(count);
  REQUIRE(tc_scenario_thetas(sc, thetas.data(), count, &count) == TC_OK);
  size_t nx = 0, nt = 0;
  REQUIRE(tc_scenario_grid_shape(sc, &nx, &nt) == TC_OK);
  std::vector<double> t(nt), v(count * nt), a(count * nt);
  size_t undefined = 99;
  REQUIRE(tc_visibility_map(sc, thetas.data(), count, 3, t.data(), v.data(), a.data(), nt, &undefined) == TC_OK);
  CHECK(undefined == 0);
  const double theta_e = 8.0, omega = 2.0;
  for (size_t i = 0; i < count; ++i) {
    CHECK(v[i * nt] == 1.0);
    CHECK(a[i * nt] == 1.0);
    CHECK(std::abs(v[i * nt + 100] - 1.0) < 1e-8);
    for (size_t j = 0; j < nt; ++j) {
      double expected = 0.0;
      REQUIRE(tc_benchmark_A(thetas[i] * theta_e, theta_e, omega, t[j], &expected) == TC_OK);
      CHECK(a[i * nt + j] == expected);
    }
  }
  double v0 = 0.0;
  REQUIRE(tc_visibility_at(sc, 0.0, &v0) == TC_OK);
  CHECK(v0 == 1.0);
  tc_scenario_free(sc);
}

TEST_CASE("free release writes NaN for the benchmark") {
  tc_scenario* sc = load_preset("fig2B");
  size_t nx = 0, nt = 0;
  REQUIRE(tc_scenario_grid_shape(sc, &nx, &nt) == TC_OK);
  const double theta = 3.0;
  std::vector<double> t(nt), v(nt), a(nt);
  size_t undefined = 0;
  REQUIRE(tc_visibility_map(sc, &theta, 1, 1, t.data(), v.data(), a.data(), nt, &undefined) == TC_OK);
  CHECK(std::isnan(a[0]));
  CHECK(v[0] == 1.0);
  tc_scenario_free(sc);
}

TEST_CASE("scalar helpers") {
  double r = 0.0;
  REQUIRE(tc_heat_capacity_ratio(1.0 / 3.0, &r) == TC_OK);
  CHECK(r == doctest::Approx(0.99078).epsilon(1e-5));
  CHECK(tc_heat_capacity_ratio(-1.0, &r) == TC_ERR_INVALID_ARGUMENT);
  REQUIRE(tc_benchmark_A(3.0, 1.0, 1.0, M_PI / 2.0, &r) == TC_OK);
  CHECK(r == doctest::Approx(0.02727).epsilon(1e-3));
}

TEST_CASE("params report requires SI units") {
  tc_scenario* natural = load_preset("fig1A");
  char* out = nullptr;
  CHECK(tc_params_report(natural, 500e-9, &out) == TC_ERR_UNITS);
  CHECK(out == nullptr);
  tc_scenario_free(natural);

  tc_scenario* si = nullptr;
  REQUIRE(tc_scenario_parse(R"({"schema": 1, "units": "SI", "M": 1e-15, "K0": 1e6, "k": 0,
      "p_gamma": 0, "tau": -1e-9})", &si) == TC_OK);
  REQUIRE(tc_params_report(si, 500e-9, &out) == TC_OK);
  const nlohmann::json j = nlohmann::json::parse(take(out));
  CHECK(j["time_to_width_s"].get<double>() == doctest::Approx(8.66e-3).epsilon(0.01));
  tc_scenario_free(si);
}

TEST_CASE("degenerate and under-resolved scenarios") {
  tc_scenario* sc = nullptr;
  REQUIRE(tc_scenario_parse(kDegenerate, &sc) == TC_OK);
  size_t nx = 0, nt = 0;
  REQUIRE(tc_scenario_grid_shape(sc, &nx, &nt) == TC_OK);
  std::vector<double> x(nx), t(nt), p(nx * nt);
  CHECK(tc_density_map(sc, 1, x.data(), t.data(), p.data(), nx, nt) == TC_ERR_DEGENERATE);
  CHECK(std::string(tc_last_error()).find("vanishing norm") != std::string::npos);
  tc_scenario_free(sc);

  std::string narrow = kDegenerate;
  narrow.replace(narrow.find("\"p_gamma\": 0"), 12, "\"p_gamma\": 1");
  narrow.replace(narrow.find("-30"), 3, "-3");
  narrow.replace(narrow.find("\"max\": 30"), 9, "\"max\": 3");
  REQUIRE(tc_scenario_parse(narrow.c_str(), &sc) == TC_OK);
  CHECK(tc_density_map(sc, 1, x.data(), t.data(), p.data(), nx, nt) == TC_ERR_GRID_TOO_SMALL);
  tc_scenario_free(sc);
}

TEST_CASE("validation through the C API") {
  tc_scenario* sc = load_preset("fig1B");
  char* report = nullptr;
  int passed = 0;
  REQUIRE(tc_validate(sc, TC_TIER_ACCURATE, 1, -1, &report, &passed) == TC_OK);
  const nlohmann::json j = nlohmann::json::parse(take(report));
  CHECK(passed == 1);
  CHECK(j["pass"].get<bool>());
  CHECK(j["max_error"].get<double>() < 1e-6);
  tc_scenario_free(sc);
}
