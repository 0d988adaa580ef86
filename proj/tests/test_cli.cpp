#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" THERMALCAT_CLI "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "thermalcat_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_scenario(const std::string& name, const std::string& body) {
  const fs::path p = scratch(name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("preset listing and export") {
  const Run list = run("preset --list");
  CHECK(list.status == 0);
  CHECK(list.out.find("fig1A\n") != std::string::npos);
  CHECK(list.out.find("fig4D\n") != std::string::npos);

  const Run one = run("preset fig3C");
  REQUIRE(one.status == 0);
  const nlohmann::json j = nlohmann::json::parse(one.out);
  CHECK(j["preset"] == "fig3C");
  CHECK(run("preset nosuch").status == 1);
}

TEST_CASE("density CSV header, sidecar and determinism") {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv"), c = scratch("c.csv");
  fs::remove(fs::path(a.string() + ".meta.json"));
  REQUIRE(run("density --preset fig2C --threads 1 --out " + a.string()).status == 0);
  REQUIRE(run("density --preset fig2C --out " + b.string(), "THERMALCAT_THREADS=3").status == 0);
  REQUIRE(run("density --preset fig2C --threads 2 --out " + c.string()).status == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text == slurp(c));

  const std::string header = text.substr(0, text.find('\n'));
  CHECK(std::regex_match(header, std::regex("# thermalcat density metadata_hash=[0-9a-f]{16}")));
  CHECK(text.substr(header.size() + 1, 7) == "x,t,P\n-");

  const fs::path sidecar = a.string() + ".meta.json";
  REQUIRE(fs::exists(sidecar));
  const nlohmann::json meta = nlohmann::json::parse(slurp(sidecar));
  CHECK(header.substr(header.size() - 16) == meta["metadata_hash"].get<std::string>());
  CHECK(meta.contains("generated_at"));
}

TEST_CASE("JSON output on stdout") {
  const Run r = run("density --preset fig2A --format json");
  REQUIRE(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["metadata_hash"].get<std::string>().size() == 16);
  CHECK(j["P"].size() == j["t"].size());
}

TEST_CASE("visibility rows start at full visibility") {
  const Run r = run("visibility --preset fig4C --thetas 0.5,1,3");
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# thermalcat visibility metadata_hash=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "theta,t,V,A,log10V");
  int starts = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string theta, t;
    std::getline(row, theta, ',');
    std::getline(row, t, ',');
    if (t == "0") {
      CHECK(line == theta + ",0,1,1,0");
      ++starts;
    }
  }
  CHECK(starts == 3);
}

TEST_CASE("exit codes") {
  CHECK(run("density --scenario " + write_scenario("bad.json", "{\"schema\": 1,,}").string()).status == 1);
  CHECK(run("density --scenario " + scratch("missing.json").string()).status == 1);
  CHECK(run("params-report --preset fig1A").status == 1);
  CHECK(run("density --preset fig1A --scenario x.json").status == 1);

  const std::string degenerate = R"({"schema": 1, "units": "natural", "M": 1, "K0": 16, "k": 1,
    "p_gamma": 0, "tau_in_T": -0.25, "phi": 0,
    "x_grid": {"min": -30, "max": 30, "count": 256}, "t_grid": {"min": 0, "max": 1, "count": 5}})";
  CHECK(run("density --scenario " + write_scenario("degenerate.json", degenerate).string()).status == 2);

  const std::string narrow = R"({"schema": 1, "units": "natural", "M": 1, "K0": 16, "k": 1,
    "p_gamma": 1, "tau_in_T": -0.25, "phi": 3.141592653589793,
    "x_grid": {"min": -3, "max": 3, "count": 256}, "t_grid": {"min": 0, "max": 1, "count": 5}})";
  CHECK(run("density --scenario " + write_scenario("narrow.json", narrow).string()).status == 3);
}

TEST_CASE("params report and validation") {
  const std::string si = R"({"schema": 1, "units": "SI", "M": 1e-15, "K0": 1e6, "k": 0, "p_gamma": 0, "tau": -1e-9})";
  const Run report = run("params-report --width 500e-9 --scenario " + write_scenario("si.json", si).string());
  REQUIRE(report.status == 0);
  CHECK(nlohmann::json::parse(report.out)["v_expand_m_per_s"].get<double>() == doctest::Approx(5.775e-5).epsilon(0.01));

  const Run v = run("validate --preset fig1B");
  CHECK(v.status == 0);
  CHECK(nlohmann::json::parse(v.out)["pass"].get<bool>());
}
