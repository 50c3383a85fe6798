// Scenario execution, CSV emission and table reproduction against fixtures.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "rydswap/config.hpp"

namespace rydswap {

// 9 significant digits.
std::string fmt(double v);

struct RunContext {
  std::string out_dir;
  int jobs = 0;  // 0 selects the logical core count
  bool dump_trajectory = false;
};

struct ScenarioOutcome {
  std::vector<std::string> files;
  std::vector<std::pair<std::string, std::string>> summary;  // ordered key/value rows
  bool passed = true;  // tables scenario only
};

// Throws ConfigError / ModelError / PropagationError on failure.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const RunContext& ctx);

// Calibrated gate time for cfg (seed defaults to the half swap-time estimate).
CalibrationResult calibrate_config(const ScenarioConfig& cfg);

// Trajectory CSV rows: t, population of every basis state, P_r, norm.
std::string trajectory_csv(const GateProtocol& protocol, std::size_t comp_input);

struct TableCell {
  std::string fixture;
  std::string quantity;  // fidelity, amplitude, phase_pi, loss, mean_loss
  int row = -1;
  int col = -1;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool informational = false;
  bool pass = true;
};

struct TableReport {
  std::vector<TableCell> cells;
  std::map<std::string, double> phase_offset_pi;  // fitted global phase per fixture
  bool passed = false;
  std::string error;  // non-empty when no fixture could be run
};

// Runs every fixture in `dir` (empty selects the bundled fixtures). Judged
// cells decide `passed`; informational cells are reported only.
TableReport reproduce_tables(const std::string& dir = {}, int jobs = 0,
                             const std::map<std::string, std::vector<std::string>>& preset_overrides = {});
std::string table_report_csv(const TableReport& report);

}  // namespace rydswap
