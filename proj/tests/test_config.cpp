#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydswap/report.hpp"

using namespace rydswap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rydswap_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& yaml, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(yaml, "test.yaml", overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

#ifdef RYDSWAP_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(RYDSWAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST(Config, UnknownKeyNamesKeyAndLine) {
  const std::string msg = error_of("scenario: gate\nvariant: SWAP\nparams:\n  omega2_mhz: 190.8\n  omega3: 1\n");
  EXPECT_NE(msg.find("omega3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("test.yaml:5"), std::string::npos) << msg;
  EXPECT_NE(error_of("scenario: gate\nbogus: 1\n").find("bogus"), std::string::npos);
  const std::string ov = error_of("scenario: gate\n", {"params.omega3=1"});
  EXPECT_NE(ov.find("omega3"), std::string::npos) << ov;
}

TEST(Config, UnitConversion) {
  const auto c = parse_config(
      "scenario: gate\nvariant: C_SWAP_CCSdag\nparams:\n  omega1_mhz: 33.5\n  delta_mhz: 1001.2\n  vct_ghz: 22.14\n"
      "  gate_time_us: 4.7\n  tau_us: 300\n",
      "u.yaml");
  EXPECT_NEAR(c.params.omega1_max, kTwoPi * 33.5, 1e-12);
  EXPECT_NEAR(c.params.delta, kTwoPi * 1001.2, 1e-9);
  EXPECT_NEAR(c.params.v_ct, kTwoPi * 22140.0, 1e-7);
  EXPECT_EQ(c.params.gate_time, 4.7);
  EXPECT_EQ(c.params.tau, 300.0);
  const auto a = parse_config("scenario: gate\nparams:\n  vct_angular: true\n  vct_ghz: 22.14\n", "a.yaml");
  EXPECT_NEAR(a.params.v_ct, 22140.0, 1e-9);
  EXPECT_EQ(param_unit("omega2_mhz", false).field, "omega2");
  EXPECT_THROW(param_unit("omega3_mhz", false), ConfigError);
}

TEST(Config, UnitValidation) {
  EXPECT_FALSE(error_of("scenario: gate\nparams:\n  gate_time_us: -1\n").empty());
  EXPECT_FALSE(error_of("scenario: gate\nparams:\n  omega2_mhz: abc\n").empty());
  EXPECT_FALSE(error_of("scenario: noise\nnoise:\n  temp_uK: -5\n").empty());
  EXPECT_FALSE(error_of("scenario: gate\nvariant: TOFFOLI\n").empty());
  EXPECT_FALSE(error_of("scenario: warp\n").empty());
  EXPECT_FALSE(error_of("scenario: gate\n", {"params.omega2_mhz"}).empty());
}

TEST(Config, Overrides) {
  const auto c = parse_config("scenario: gate\nvariant: SWAP\n", "o.yaml", {"params.omega2_mhz=200", "seed=9"});
  EXPECT_NEAR(c.params.omega2, kTwoPi * 200.0, 1e-12);
  EXPECT_EQ(c.seed, 9u);
}

TEST(Config, PresetsParseAndRoundTrip) {
  const auto names = list_presets();
  EXPECT_GE(names.size(), 15u);
  for (const auto& n : names) {
    const ScenarioConfig c = load_config(preset_path(n));
    const std::string y1 = to_yaml(c);
    const std::string y2 = to_yaml(parse_config(y1, n + " (echo)"));
    EXPECT_EQ(y1, y2) << n;
  }
  EXPECT_THROW(preset_path("no_such_preset"), ConfigError);
}

TEST(Config, TablePresetMatchesDefaults) {
  const auto c = load_config(preset_path("table1_swap"));
  const GateParams d = table1_params(Variant::kSwap);
  EXPECT_NEAR(c.params.omega2, d.omega2, 1e-9);
  EXPECT_NEAR(c.params.delta, d.delta, 1e-9);
  EXPECT_NEAR(c.params.gate_time, d.gate_time, 1e-12);
}

TEST(Report, GateScenarioFilesAndEcho) {
  const fs::path out = scratch("gate");
  auto cfg = load_config(preset_path("table1_swap"));
  const auto res = run_scenario(cfg, {out.string(), 1, false});
  for (const char* f : {"amplitudes.csv", "phases.csv", "loss.csv", "summary.csv", "resolved_config.yaml"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const std::string amp = slurp(out / "amplitudes.csv");
  EXPECT_EQ(amp.rfind("# resolved configuration", 0), 0u);
  double fidelity = -1.0;
  for (const auto& [k, v] : res.summary) {
    if (k == "fidelity") fidelity = std::stod(v);
  }
  EXPECT_NEAR(fidelity, 0.9966, 0.005);

  // Re-running from the echoed configuration reproduces the file.
  const fs::path again = scratch("gate_echo");
  run_scenario(load_config((out / "resolved_config.yaml").string()), {again.string(), 1, false});
  EXPECT_EQ(slurp(out / "amplitudes.csv"), slurp(again / "amplitudes.csv"));
  EXPECT_EQ(slurp(out / "phases.csv"), slurp(again / "phases.csv"));
}

TEST(Report, NoiseOutputsByteIdentical) {
  auto cfg = load_config(preset_path("fig3a_doppler"), {"noise.shots=3", "noise.sweep.values=[150]"});
  const fs::path a = scratch("noise_a");
  const fs::path b = scratch("noise_b");
  run_scenario(cfg, {a.string(), 1, false});
  run_scenario(cfg, {b.string(), 2, false});
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
  }
}

TEST(Tables, EmptyFixtureDirectory) {
  const fs::path empty = scratch("empty_fixtures");
  const TableReport r = reproduce_tables(empty.string(), 1);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.error.find("no fixtures"), std::string::npos) << r.error;
}

TEST(Tables, DetunedSwapFailsFidelityCell) {
  const fs::path dir = scratch("swap_fixture");
  fs::copy_file(fs::path(RYDSWAP_FIXTURE_DIR) / "table2_swap.yaml", dir / "table2_swap.yaml");
  const TableReport r = reproduce_tables(dir.string(), 1, {{"table2_swap", {"params.delta_mhz=1049.7165"}}});
  bool fidelity_failed = false;
  for (const auto& c : r.cells) {
    if (c.quantity == "fidelity" && !c.pass) fidelity_failed = true;
  }
  EXPECT_TRUE(fidelity_failed);
  EXPECT_FALSE(r.passed);
  const std::string csv = table_report_csv(r);
  EXPECT_NE(csv.find("FAIL"), std::string::npos);
}

#ifdef RYDSWAP_CLI_PATH
TEST(Cli, ExitCodes) {
  const fs::path out = scratch("cli");
  EXPECT_EQ(run_cli("gate --preset table1_swap --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "amplitudes.csv"));
  EXPECT_EQ(run_cli("gate --preset table1_swap --set params.omega3=1 --out " + out.string()), 2);
  const fs::path bad = out / "bad.yaml";
  std::ofstream(bad) << "scenario: gate\nparams:\n  omega3: 1\n";
  EXPECT_EQ(run_cli("gate --config " + bad.string() + " --out " + out.string()), 2);
  EXPECT_NE(run_cli("gate --preset no_such_preset --out " + out.string()), 0);
  EXPECT_EQ(run_cli("--list-presets"), 0);
  const fs::path empty = scratch("cli_empty");
  EXPECT_EQ(run_cli("tables --fixtures " + empty.string() + " --out " + out.string()), 1);
}
#endif
