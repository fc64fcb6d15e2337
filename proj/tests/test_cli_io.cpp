#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "adtrans/commands.hpp"
#include "adtrans/config.hpp"
#include "adtrans/errors.hpp"
#include "adtrans/output.hpp"
#include "adtrans/scan.hpp"
#include "adtrans/scenario.hpp"

using namespace adtrans;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(ADTRANS_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("adtrans_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* kLambda = R"(name: lam
scheme: Lambda
regime: a
transitions:
  - {peak: 5, center: 1, width: 1, delta: 2}
  - {peak: 5, center: -1, width: 1, delta: 2}
time: {start: -5, stop: 5}
)";

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config_text(kLambda);
  const Scenario& s = c.scenario;
  CHECK(s.name == "lam");
  CHECK(s.scheme.levels() == 3);
  CHECK(s.initial_level == 0);
  CHECK(s.detunings.multi_photon()[2] == 0.0);
  CHECK(s.grid.step > 0.0);
  CHECK_FALSE(c.propagation.has_value());
  CHECK(system_kind(s.scheme).empty());
}

TEST_CASE("shipped fig2 file matches the built-in scenario") {
  CHECK(parse_config(scenario_dir() / "fig2_m_stirap.yaml").scenario == scenario("fig2_m_stirap"));
}

TEST_CASE("config errors carry source, line and path") {
  std::string text = kLambda;
  text.replace(text.find("peak: 5, center: -1"), 7, "peak: -5");
  try {
    parse_config_text(text, "bad.yaml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.yaml:6:") == 0);
    CHECK(msg.find("transitions[1].peak") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text(std::string(kLambda) + "colour: red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("name: x\nscheme: Q\n"), ConfigError);
}

TEST_CASE("resolved tree round-trips numbers exactly") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::nan("")) == "nan");
  const auto j = to_json(parse_config_text(kLambda));
  CHECK(j["initial"] == 1);
  CHECK(j["name"] == "lam");
}

TEST_CASE("scan") {
  const RunConfig base{scenario("fig2_m_stirap"), std::nullopt};
  CHECK(scan(base, ScanAxis::range("peak", 5, 40, 0, false), "evolve").empty());
  CHECK(scan_table({}, "peak", 4).rows.empty());
  RunConfig c = base;
  CHECK_THROWS_AS(apply_parameter(c, "transitions[0].colour", 1.0), ConfigError);
  CHECK_THROWS_AS(apply_parameter(c, "propagation.length", 1.0), ConfigError);
  apply_parameter(c, "transitions[1].delta", 7.0);
  CHECK(c.scenario.detunings.one_photon()[1] == 7.0);
  c = base;
  c.scenario.grid.step = 2e-4;
  const auto rows = scan(c, ScanAxis{"peak", {5, 10, 20, 40}}, "evolve");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].fidelity >= rows[i - 1].fidelity - 1e-3);
  CHECK(rows.back().fidelity > 0.99);
}

TEST_CASE("CLI exit codes") {
  CHECK(run("--check") == 0);
  CHECK(run("--help") == 0);
  const auto d = scratch("cli");
  std::ofstream(d / "bad.yaml") << "name: x\nscheme: M\nbogus: 1\n";
  CHECK(run("--config " + (d / "bad.yaml").string() + " evolve") == 2);
  CHECK(run("evolve --scenario nope --out " + d.string() + "/x.csv") == 2);
}

TEST_CASE("evolve output is deterministic") {
  const auto d = scratch("det");
  const auto cfg = (scenario_dir() / "fig2_m_stirap.yaml").string();
  REQUIRE(run("--config " + cfg + " --out " + (d / "a.csv").string() + " evolve") == 0);
  REQUIRE(run("--config " + cfg + " --out " + (d / "b.csv").string() + " evolve") == 0);
  CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
  CHECK(slurp(d / "a.manifest.json") == slurp(d / "b.manifest.json"));
  CHECK(fs::exists(d / "a.timing.json"));
}
