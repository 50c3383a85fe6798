// Scenario configuration: strict YAML ingestion with unit-suffixed keys.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydswap/analytic.hpp"
#include "rydswap/noise.hpp"
#include "rydswap/sweep.hpp"

namespace rydswap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { kGate, kScan, kNoise, kCalibrate, kTables, kTrajectory };
std::string scenario_name(ScenarioKind k);
ScenarioKind parse_scenario(const std::string& name);

struct NoiseSweep {
  std::string key;             // temp_uK, omega1_rel_width or omega2_rel_width
  std::vector<double> values;  // in the key's units
};

struct ScanConfig {
  std::string parameter;       // params key, e.g. vct_ghz
  std::vector<double> values;  // in the key's units, or multiples of `relative_to`
  std::string relative_to;     // empty or a params key whose internal value scales `values`
  Metric metric = Metric::kFidelity;
};

struct DistanceConfig {
  std::vector<double> radii_um;
  double c6_ct_thz_um6 = -80.0;
  std::optional<double> c6_tt_thz_um6;
  double target_spacing_um = 0.0;
  bool c6_angular = true;
  std::vector<std::string> free;  // params keys
  double bound_low = 0.8;         // relative bounds around the base value
  double bound_high = 1.2;
  int budget = 40;
  Metric metric = Metric::kRefitInfidelityWithLoss;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kGate;
  Variant variant = Variant::kSwap;
  GateParams params;
  bool vct_angular = false;  // vct_ghz values already angular (rad/ns)
  std::uint64_t seed = 1;
  bool calibrate = false;
  CalibrationOptions calibration;
  std::optional<double> calibration_seed_us;
  NoiseSpec noise;
  std::optional<NoiseSweep> noise_sweep;
  std::optional<ScanConfig> scan;
  std::optional<DistanceConfig> distance;
  std::string trajectory_input;  // bit string over all atoms; empty selects |0..01>
  std::string fixtures_dir;
};

// Loads a YAML file or the bundled preset `name` (without extension).
std::string preset_path(const std::string& name);
std::vector<std::string> list_presets();

// Parses YAML text; `source` labels error messages. Overrides are
// dotted-path assignments such as "params.omega2_mhz=200".
ScenarioConfig parse_config(const std::string& yaml_text, const std::string& source,
                            const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Fully resolved configuration as YAML; parse_config of the result
// reproduces `cfg`.
std::string to_yaml(const ScenarioConfig& cfg);

// Maps a params key to its GateParams field name and the factor from config
// units to internal units.
struct ParamUnit {
  std::string field;
  double scale = 1.0;
};
ParamUnit param_unit(const std::string& key, bool vct_angular);

}  // namespace rydswap
