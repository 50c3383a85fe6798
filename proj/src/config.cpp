#include "rydswap/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace rydswap {

namespace fs = std::filesystem;

std::string scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kGate: return "gate";
    case ScenarioKind::kScan: return "scan";
    case ScenarioKind::kNoise: return "noise";
    case ScenarioKind::kCalibrate: return "calibrate";
    case ScenarioKind::kTables: return "tables";
    case ScenarioKind::kTrajectory: return "trajectory";
  }
  return "gate";
}

ScenarioKind parse_scenario(const std::string& name) {
  for (ScenarioKind k : {ScenarioKind::kGate, ScenarioKind::kScan, ScenarioKind::kNoise, ScenarioKind::kCalibrate,
                         ScenarioKind::kTables, ScenarioKind::kTrajectory}) {
    if (scenario_name(k) == name) return k;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

ParamUnit param_unit(const std::string& key, bool vct_angular) {
  static const std::map<std::string, ParamUnit> table{
      {"omega1_mhz", {"omega1_max", kTwoPi}}, {"omega2_mhz", {"omega2", kTwoPi}},
      {"delta_mhz", {"delta", kTwoPi}},       {"vtt_mhz", {"v_tt", kTwoPi}},
      {"vblock_mhz", {"v_block", kTwoPi}},    {"gate_time_us", {"gate_time", 1.0}},
      {"sigma_ratio", {"sigma_ratio", 1.0}},  {"omegac_mhz", {"omega_c", kTwoPi}},
      {"tau_us", {"tau", 1.0}},
  };
  if (key == "vct_ghz") return {"v_ct", vct_angular ? 1000.0 : 1000.0 * kTwoPi};
  if (key == "vcc_ghz") return {"v_cc", vct_angular ? 1000.0 : 1000.0 * kTwoPi};
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown parameter key '" + key + "'");
  return it->second;
}

std::string preset_path(const std::string& name) {
  const char* env = std::getenv("RYDSWAP_PRESET_DIR");
  const fs::path dir = env != nullptr ? fs::path(env) : fs::path(RYDSWAP_PRESET_DIR);
  const fs::path p = dir / (name + ".yaml");
  if (!fs::exists(p)) throw ConfigError("unknown preset '" + name + "' (looked in " + dir.string() + ")");
  return p.string();
}

std::vector<std::string> list_presets() {
  const char* env = std::getenv("RYDSWAP_PRESET_DIR");
  const fs::path dir = env != nullptr ? fs::path(env) : fs::path(RYDSWAP_PRESET_DIR);
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".yaml") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Shortest decimal c with c * scale == x, so echoed files parse back exactly.
double unscaled(double x, double scale) {
  const double c = x / scale;
  if (!std::isfinite(c)) return c;
  char buf[32];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, c);
    const double v = std::strtod(buf, nullptr);
    if (v * scale == x) return v;
  }
  double up = c;
  double down = c;
  for (int k = 0; k < 8; ++k) {
    up = std::nextafter(up, HUGE_VAL);
    down = std::nextafter(down, -HUGE_VAL);
    if (up * scale == x) return up;
    if (down * scale == x) return down;
  }
  return c;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  std::string where(const YAML::Node& n) const {
    const YAML::Mark m = n.Mark();
    if (m.is_null()) return source_ + " (override)";
    return source_ + ":" + std::to_string(m.line + 1);
  }

  void keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& section) const {
    if (!map.IsMap()) throw ConfigError(where(map) + ": '" + section + "' must be a mapping");
    for (const auto& kv : map) {
      const std::string k = kv.first.as<std::string>();
      if (allowed.count(k) == 0) throw ConfigError(where(kv.first) + ": unknown key '" + k + "' in " + section);
    }
  }

  template <class T>
  T as(const YAML::Node& n, const std::string& key) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(n) + ": invalid value for '" + key + "'");
    }
  }

  double number(const YAML::Node& n, const std::string& key) const {
    const double v = as<double>(n, key);
    if (!std::isfinite(v)) throw ConfigError(where(n) + ": '" + key + "' must be finite");
    return v;
  }

  double positive(const YAML::Node& n, const std::string& key) const {
    const double v = number(n, key);
    if (!(v > 0.0)) throw ConfigError(where(n) + ": '" + key + "' must be positive");
    return v;
  }

  double non_negative(const YAML::Node& n, const std::string& key) const {
    const double v = number(n, key);
    if (v < 0.0) throw ConfigError(where(n) + ": '" + key + "' must be >= 0");
    return v;
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence() || n.size() == 0) throw ConfigError(where(n) + ": '" + key + "' must be a non-empty list");
    std::vector<double> out;
    for (const auto& e : n) out.push_back(number(e, key));
    return out;
  }

 private:
  std::string source_;
};

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' must be key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw ConfigError("override '" + assignment + "' has an empty path component");
    parts.push_back(p);
  }
  YAML::Node cur = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = cur[parts[i]];
    if (!next.IsDefined() || next.IsNull()) {
      cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = cur[parts[i]];
    }
    if (!next.IsMap()) throw ConfigError("override '" + assignment + "': '" + parts[i] + "' is not a section");
    cur.reset(next);
  }
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError("override '" + assignment + "': " + e.msg);
  }
  cur[parts.back()] = parsed;
}

int atom_count(Variant v, const GateParams& p) {
  switch (v) {
    case Variant::kSwap:
    case Variant::kISwap:
    case Variant::kSqrtISwap:
    case Variant::kBSwap: return 2;
    case Variant::kCISwap:
    case Variant::kCSwapCCSdag: return 3;
    case Variant::kCkSwap: return p.controls + 2;
    case Variant::kMuxSwap4T: return 5;
    case Variant::kMuxSwap3T: return 4;
  }
  return 2;
}

int control_atoms(Variant v, const GateParams& p) { return atom_count(v, p) - (v == Variant::kMuxSwap4T ? 4 : v == Variant::kMuxSwap3T ? 3 : 2); }

LevelScheme scheme_of(Variant v, const GateParams& p, int atom) {
  const bool mux = v == Variant::kMuxSwap4T || v == Variant::kMuxSwap3T;
  return (mux && atom < control_atoms(v, p)) ? mux_control_scheme(p.tau) : three_level_scheme(p.tau);
}

void parse_params(const Reader& rd, const YAML::Node& node, ScenarioConfig& cfg) {
  static const std::set<std::string> allowed{
      "omega1_mhz", "omega2_mhz",   "delta_mhz",  "vtt_mhz",      "vct_ghz",      "vcc_ghz",   "vblock_mhz",
      "gate_time_us", "sigma_ratio", "omegac_mhz", "tau_us",       "vct_angular", "vct_targets_ghz",
      "controls",   "blockade",     "convention", "phase_adjust", "extra_interactions"};
  rd.keys(node, allowed, "params");
  if (node["vct_angular"]) cfg.vct_angular = rd.as<bool>(node["vct_angular"], "vct_angular");
  GateParams& p = cfg.params;
  if (node["controls"]) {
    p.controls = rd.as<int>(node["controls"], "controls");
    if (p.controls < 1) throw ConfigError(rd.where(node["controls"]) + ": 'controls' must be >= 1");
  }
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "vct_angular" || key == "controls") continue;
    if (key == "vct_targets_ghz") {
      const double s = param_unit("vct_ghz", cfg.vct_angular).scale;
      p.v_ct_targets.clear();
      for (double x : rd.numbers(v, key)) p.v_ct_targets.push_back(x * s);
    } else if (key == "blockade") {
      const auto s = rd.as<std::string>(v, key);
      if (s == "projected") p.blockade = BlockadeModel::kProjected;
      else if (s == "finite") p.blockade = BlockadeModel::kFinite;
      else throw ConfigError(rd.where(v) + ": 'blockade' must be projected or finite");
    } else if (key == "convention") {
      const auto s = rd.as<std::string>(v, key);
      if (s == "positive_energy") p.convention = PhaseConvention::kPositiveEnergy;
      else if (s == "standard") p.convention = PhaseConvention::kStandard;
      else throw ConfigError(rd.where(v) + ": 'convention' must be positive_energy or standard");
    } else if (key == "phase_adjust") {
      if (!v.IsSequence()) throw ConfigError(rd.where(v) + ": 'phase_adjust' must be a list");
      std::vector<PhaseAdjust> adj;
      for (const auto& e : v) {
        rd.keys(e, {"atom", "phi_pi"}, "phase_adjust entry");
        if (!e["atom"] || !e["phi_pi"]) throw ConfigError(rd.where(e) + ": phase_adjust entry needs atom and phi_pi");
        adj.push_back({rd.as<int>(e["atom"], "atom"), rd.number(e["phi_pi"], "phi_pi") * kPi});
      }
      p.phase_adjust = adj;
    } else if (key == "extra_interactions") {
      // Resolved after the variant is known.
    } else {
      const ParamUnit u = param_unit(key, cfg.vct_angular);
      const double x = rd.number(v, key) * u.scale;
      if (key == "vcc_ghz") {
        p.v_cc = x;
      } else {
        set_param(p, u.field, x);
      }
    }
  }
  if (node["extra_interactions"]) {
    const YAML::Node& list = node["extra_interactions"];
    if (!list.IsSequence()) throw ConfigError(rd.where(list) + ": 'extra_interactions' must be a list");
    const int n = atom_count(cfg.variant, p);
    for (const auto& e : list) {
      rd.keys(e, {"atom_i", "level_i", "atom_j", "level_j", "shift_mhz"}, "extra_interactions entry");
      for (const char* k : {"atom_i", "level_i", "atom_j", "level_j", "shift_mhz"}) {
        if (!e[k]) throw ConfigError(rd.where(e) + ": extra_interactions entry needs '" + k + "'");
      }
      const int ai = rd.as<int>(e["atom_i"], "atom_i");
      const int aj = rd.as<int>(e["atom_j"], "atom_j");
      if (ai < 0 || ai >= n || aj < 0 || aj >= n || ai == aj) {
        throw ConfigError(rd.where(e) + ": extra_interactions atoms out of range");
      }
      int li = 0;
      int lj = 0;
      try {
        li = scheme_of(cfg.variant, p, ai).level(rd.as<std::string>(e["level_i"], "level_i"));
        lj = scheme_of(cfg.variant, p, aj).level(rd.as<std::string>(e["level_j"], "level_j"));
      } catch (const ModelError& err) {
        throw ConfigError(rd.where(e) + ": " + err.what());
      }
      p.extra_interactions.push_back({ai, li, aj, lj, rd.number(e["shift_mhz"], "shift_mhz") * kTwoPi});
    }
  }
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(rd.where(node) + ": " + what);
  };
  require(p.omega1_max >= 0.0, "omega1_mhz must be >= 0");
  require(p.omega2 >= 0.0, "omega2_mhz must be >= 0");
  require(p.delta != 0.0, "delta_mhz must be nonzero");
  require(p.gate_time > 0.0, "gate_time_us must be positive");
  require(p.sigma_ratio > 0.0, "sigma_ratio must be positive");
  require(p.omega_c > 0.0, "omegac_mhz must be positive");
  require(p.tau >= 0.0, "tau_us must be >= 0 (0 disables decay)");
}

void parse_noise(const Reader& rd, const YAML::Node& node, ScenarioConfig& cfg) {
  rd.keys(node,
          {"temp_uK", "mass_kg", "lambda1_nm", "lambda2_nm", "counter_propagating", "omega1_rel_width",
           "omega2_rel_width", "update_interval_us", "shots", "sweep"},
          "noise");
  NoiseSpec& n = cfg.noise;
  if (node["temp_uK"]) n.doppler.temperature = rd.non_negative(node["temp_uK"], "temp_uK") * 1e-6;
  if (node["mass_kg"]) n.doppler.mass = rd.positive(node["mass_kg"], "mass_kg");
  if (node["lambda1_nm"]) n.doppler.lambda1 = rd.positive(node["lambda1_nm"], "lambda1_nm") * 1e-9;
  if (node["lambda2_nm"]) n.doppler.lambda2 = rd.positive(node["lambda2_nm"], "lambda2_nm") * 1e-9;
  if (node["counter_propagating"]) n.doppler.counter_propagating = rd.as<bool>(node["counter_propagating"], "counter_propagating");
  if (node["omega1_rel_width"]) n.intensity.microwave_width = rd.non_negative(node["omega1_rel_width"], "omega1_rel_width");
  if (node["omega2_rel_width"]) n.intensity.rydberg_width = rd.non_negative(node["omega2_rel_width"], "omega2_rel_width");
  if (node["update_interval_us"]) n.intensity.update_interval = rd.positive(node["update_interval_us"], "update_interval_us");
  if (node["shots"]) {
    n.n_shots = rd.as<int>(node["shots"], "shots");
    if (n.n_shots < 1) throw ConfigError(rd.where(node["shots"]) + ": 'shots' must be >= 1");
  }
  if (node["sweep"]) {
    const YAML::Node& s = node["sweep"];
    rd.keys(s, {"key", "values"}, "noise.sweep");
    if (!s["key"] || !s["values"]) throw ConfigError(rd.where(s) + ": noise.sweep needs key and values");
    NoiseSweep sw;
    sw.key = rd.as<std::string>(s["key"], "key");
    if (sw.key != "temp_uK" && sw.key != "omega1_rel_width" && sw.key != "omega2_rel_width") {
      throw ConfigError(rd.where(s["key"]) + ": noise.sweep key must be temp_uK, omega1_rel_width or omega2_rel_width");
    }
    sw.values = rd.numbers(s["values"], "values");
    for (double v : sw.values) {
      if (v < 0.0) throw ConfigError(rd.where(s["values"]) + ": noise.sweep values must be >= 0");
    }
    cfg.noise_sweep = sw;
  }
}

void parse_scan(const Reader& rd, const YAML::Node& node, ScenarioConfig& cfg) {
  rd.keys(node, {"parameter", "values", "relative_to", "metric"}, "scan");
  if (!node["parameter"] || !node["values"]) throw ConfigError(rd.where(node) + ": scan needs parameter and values");
  ScanConfig s;
  s.parameter = rd.as<std::string>(node["parameter"], "parameter");
  try {
    param_unit(s.parameter, cfg.vct_angular);
  } catch (const ConfigError& e) {
    throw ConfigError(rd.where(node["parameter"]) + ": " + e.what());
  }
  s.values = rd.numbers(node["values"], "values");
  if (node["relative_to"]) {
    s.relative_to = rd.as<std::string>(node["relative_to"], "relative_to");
    try {
      param_unit(s.relative_to, cfg.vct_angular);
    } catch (const ConfigError& e) {
      throw ConfigError(rd.where(node["relative_to"]) + ": " + e.what());
    }
  }
  if (node["metric"]) {
    try {
      s.metric = parse_metric(rd.as<std::string>(node["metric"], "metric"));
    } catch (const ModelError& e) {
      throw ConfigError(rd.where(node["metric"]) + ": " + e.what());
    }
  }
  cfg.scan = s;
}

void parse_distance(const Reader& rd, const YAML::Node& node, ScenarioConfig& cfg) {
  rd.keys(node,
          {"radii_um", "c6_ct_thz_um6", "c6_tt_thz_um6", "target_spacing_um", "c6_angular", "free", "bound_low",
           "bound_high", "budget", "metric"},
          "distance");
  DistanceConfig d;
  if (!node["radii_um"]) throw ConfigError(rd.where(node) + ": distance needs radii_um");
  d.radii_um = rd.numbers(node["radii_um"], "radii_um");
  for (double r : d.radii_um) {
    if (!(r > 0.0)) throw ConfigError(rd.where(node["radii_um"]) + ": radii must be positive");
  }
  if (node["c6_ct_thz_um6"]) d.c6_ct_thz_um6 = rd.number(node["c6_ct_thz_um6"], "c6_ct_thz_um6");
  if (node["c6_tt_thz_um6"]) {
    d.c6_tt_thz_um6 = rd.number(node["c6_tt_thz_um6"], "c6_tt_thz_um6");
    if (!node["target_spacing_um"]) throw ConfigError(rd.where(node) + ": c6_tt_thz_um6 needs target_spacing_um");
  }
  if (node["target_spacing_um"]) d.target_spacing_um = rd.positive(node["target_spacing_um"], "target_spacing_um");
  if (node["c6_angular"]) d.c6_angular = rd.as<bool>(node["c6_angular"], "c6_angular");
  if (node["free"]) {
    const YAML::Node& f = node["free"];
    if (!f.IsSequence()) throw ConfigError(rd.where(f) + ": 'free' must be a list");
    for (const auto& e : f) {
      const auto key = rd.as<std::string>(e, "free");
      try {
        param_unit(key, cfg.vct_angular);
      } catch (const ConfigError& err) {
        throw ConfigError(rd.where(e) + ": " + err.what());
      }
      d.free.push_back(key);
    }
  }
  if (node["bound_low"]) d.bound_low = rd.positive(node["bound_low"], "bound_low");
  if (node["bound_high"]) d.bound_high = rd.positive(node["bound_high"], "bound_high");
  if (!(d.bound_high > d.bound_low)) throw ConfigError(rd.where(node) + ": bound_high must exceed bound_low");
  if (node["budget"]) {
    d.budget = rd.as<int>(node["budget"], "budget");
    if (d.budget < 1) throw ConfigError(rd.where(node["budget"]) + ": 'budget' must be >= 1");
  }
  if (node["metric"]) {
    try {
      d.metric = parse_metric(rd.as<std::string>(node["metric"], "metric"));
    } catch (const ModelError& e) {
      throw ConfigError(rd.where(node["metric"]) + ": " + e.what());
    }
  }
  cfg.distance = d;
}

}  // namespace

ScenarioConfig parse_config(const std::string& yaml_text, const std::string& source,
                            const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const auto& o : overrides) apply_override(root, o);
  const Reader rd(source);
  rd.keys(root,
          {"scenario", "variant", "seed", "params", "calibrate", "calibration", "noise", "scan", "distance",
           "trajectory", "fixtures_dir"},
          "top level");

  ScenarioConfig cfg;
  if (root["scenario"]) {
    try {
      cfg.kind = parse_scenario(rd.as<std::string>(root["scenario"], "scenario"));
    } catch (const ConfigError& e) {
      throw ConfigError(rd.where(root["scenario"]) + ": " + e.what());
    }
  }
  if (root["variant"]) {
    try {
      cfg.variant = parse_variant(rd.as<std::string>(root["variant"], "variant"));
    } catch (const ModelError& e) {
      throw ConfigError(rd.where(root["variant"]) + ": " + e.what());
    }
  }
  cfg.params = table1_params(cfg.variant);
  cfg.vct_angular = false;
  if (root["seed"]) cfg.seed = rd.as<std::uint64_t>(root["seed"], "seed");
  if (root["params"]) parse_params(rd, root["params"], cfg);
  cfg.calibration.half_rotation = cfg.variant == Variant::kSqrtISwap;
  if (root["calibrate"]) cfg.calibrate = rd.as<bool>(root["calibrate"], "calibrate");
  if (root["calibration"]) {
    const YAML::Node& c = root["calibration"];
    rd.keys(c, {"seed_us", "half_rotation", "lower_factor", "upper_factor", "window_samples", "tolerance_us"},
            "calibration");
    if (c["seed_us"]) cfg.calibration_seed_us = rd.positive(c["seed_us"], "seed_us");
    if (c["half_rotation"]) cfg.calibration.half_rotation = rd.as<bool>(c["half_rotation"], "half_rotation");
    if (c["lower_factor"]) cfg.calibration.lower_factor = rd.positive(c["lower_factor"], "lower_factor");
    if (c["upper_factor"]) cfg.calibration.upper_factor = rd.positive(c["upper_factor"], "upper_factor");
    if (c["window_samples"]) {
      cfg.calibration.window_samples = rd.as<int>(c["window_samples"], "window_samples");
      if (cfg.calibration.window_samples < 1) throw ConfigError(rd.where(c["window_samples"]) + ": must be >= 1");
    }
    if (c["tolerance_us"]) cfg.calibration.tolerance = rd.positive(c["tolerance_us"], "tolerance_us");
    if (!(cfg.calibration.upper_factor > cfg.calibration.lower_factor)) {
      throw ConfigError(rd.where(c) + ": upper_factor must exceed lower_factor");
    }
  }
  if (root["noise"]) parse_noise(rd, root["noise"], cfg);
  cfg.noise.seed = cfg.seed;
  if (root["scan"]) parse_scan(rd, root["scan"], cfg);
  if (root["distance"]) parse_distance(rd, root["distance"], cfg);
  if (root["trajectory"]) {
    const YAML::Node& t = root["trajectory"];
    rd.keys(t, {"input"}, "trajectory");
    if (t["input"]) {
      cfg.trajectory_input = rd.as<std::string>(t["input"], "input");
      const int n = atom_count(cfg.variant, cfg.params);
      const bool bits = std::all_of(cfg.trajectory_input.begin(), cfg.trajectory_input.end(),
                                    [](char ch) { return ch == '0' || ch == '1'; });
      if (!bits || static_cast<int>(cfg.trajectory_input.size()) != n) {
        throw ConfigError(rd.where(t["input"]) + ": trajectory input must be " + std::to_string(n) + " bits");
      }
    }
  }
  if (root["fixtures_dir"]) cfg.fixtures_dir = rd.as<std::string>(root["fixtures_dir"], "fixtures_dir");
  if (cfg.kind == ScenarioKind::kScan && !cfg.scan && !cfg.distance) {
    throw ConfigError(source + ": scan scenario needs a scan or distance section");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, overrides);
}

std::string to_yaml(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "scenario" << YAML::Value << scenario_name(cfg.kind);
  out << YAML::Key << "variant" << YAML::Value << variant_name(cfg.variant);
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;

  const GateParams& p = cfg.params;
  out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  for (const char* key : {"omega1_mhz", "omega2_mhz", "delta_mhz", "vtt_mhz", "vct_ghz"}) {
    const ParamUnit u = param_unit(key, cfg.vct_angular);
    out << YAML::Key << key << YAML::Value << unscaled(get_param(p, u.field), u.scale);
  }
  out << YAML::Key << "vct_angular" << YAML::Value << cfg.vct_angular;
  if (!p.v_ct_targets.empty()) {
    const double s = param_unit("vct_ghz", cfg.vct_angular).scale;
    out << YAML::Key << "vct_targets_ghz" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : p.v_ct_targets) out << unscaled(v, s);
    out << YAML::EndSeq;
  }
  if (p.v_cc) out << YAML::Key << "vcc_ghz" << YAML::Value << unscaled(*p.v_cc, param_unit("vcc_ghz", cfg.vct_angular).scale);
  for (const char* key : {"vblock_mhz", "gate_time_us", "sigma_ratio", "omegac_mhz", "tau_us"}) {
    const ParamUnit u = param_unit(key, cfg.vct_angular);
    out << YAML::Key << key << YAML::Value << unscaled(get_param(p, u.field), u.scale);
  }
  out << YAML::Key << "controls" << YAML::Value << p.controls;
  out << YAML::Key << "blockade" << YAML::Value << (p.blockade == BlockadeModel::kProjected ? "projected" : "finite");
  out << YAML::Key << "convention" << YAML::Value
      << (p.convention == PhaseConvention::kPositiveEnergy ? "positive_energy" : "standard");
  const std::vector<PhaseAdjust> adj = p.phase_adjust ? *p.phase_adjust : make_protocol(cfg.variant, p).phase_adjust;
  out << YAML::Key << "phase_adjust" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : adj) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "atom" << YAML::Value << a.atom << YAML::Key << "phi_pi"
        << YAML::Value << unscaled(a.phi, kPi) << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (!p.extra_interactions.empty()) {
    out << YAML::Key << "extra_interactions" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : p.extra_interactions) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "atom_i" << YAML::Value << e.atom_i;
      out << YAML::Key << "level_i" << YAML::Value << scheme_of(cfg.variant, p, e.atom_i).labels[e.level_a];
      out << YAML::Key << "atom_j" << YAML::Value << e.atom_j;
      out << YAML::Key << "level_j" << YAML::Value << scheme_of(cfg.variant, p, e.atom_j).labels[e.level_b];
      out << YAML::Key << "shift_mhz" << YAML::Value << unscaled(e.shift, kTwoPi);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "calibrate" << YAML::Value << cfg.calibrate;
  out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  if (cfg.calibration_seed_us) out << YAML::Key << "seed_us" << YAML::Value << *cfg.calibration_seed_us;
  out << YAML::Key << "half_rotation" << YAML::Value << cfg.calibration.half_rotation;
  out << YAML::Key << "lower_factor" << YAML::Value << cfg.calibration.lower_factor;
  out << YAML::Key << "upper_factor" << YAML::Value << cfg.calibration.upper_factor;
  out << YAML::Key << "window_samples" << YAML::Value << cfg.calibration.window_samples;
  out << YAML::Key << "tolerance_us" << YAML::Value << cfg.calibration.tolerance;
  out << YAML::EndMap;

  const NoiseSpec& n = cfg.noise;
  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "temp_uK" << YAML::Value << unscaled(n.doppler.temperature, 1e-6);
  out << YAML::Key << "mass_kg" << YAML::Value << n.doppler.mass;
  out << YAML::Key << "lambda1_nm" << YAML::Value << unscaled(n.doppler.lambda1, 1e-9);
  out << YAML::Key << "lambda2_nm" << YAML::Value << unscaled(n.doppler.lambda2, 1e-9);
  out << YAML::Key << "counter_propagating" << YAML::Value << n.doppler.counter_propagating;
  out << YAML::Key << "omega1_rel_width" << YAML::Value << n.intensity.microwave_width;
  out << YAML::Key << "omega2_rel_width" << YAML::Value << n.intensity.rydberg_width;
  out << YAML::Key << "update_interval_us" << YAML::Value << n.intensity.update_interval;
  out << YAML::Key << "shots" << YAML::Value << n.n_shots;
  if (cfg.noise_sweep) {
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "key" << YAML::Value << cfg.noise_sweep->key;
    out << YAML::Key << "values" << YAML::Value << YAML::Flow << cfg.noise_sweep->values;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  if (cfg.scan) {
    out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "parameter" << YAML::Value << cfg.scan->parameter;
    out << YAML::Key << "values" << YAML::Value << YAML::Flow << cfg.scan->values;
    if (!cfg.scan->relative_to.empty()) out << YAML::Key << "relative_to" << YAML::Value << cfg.scan->relative_to;
    out << YAML::Key << "metric" << YAML::Value << metric_name(cfg.scan->metric);
    out << YAML::EndMap;
  }
  if (cfg.distance) {
    const DistanceConfig& d = *cfg.distance;
    out << YAML::Key << "distance" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "radii_um" << YAML::Value << YAML::Flow << d.radii_um;
    out << YAML::Key << "c6_ct_thz_um6" << YAML::Value << d.c6_ct_thz_um6;
    if (d.c6_tt_thz_um6) {
      out << YAML::Key << "c6_tt_thz_um6" << YAML::Value << *d.c6_tt_thz_um6;
      out << YAML::Key << "target_spacing_um" << YAML::Value << d.target_spacing_um;
    }
    out << YAML::Key << "c6_angular" << YAML::Value << d.c6_angular;
    out << YAML::Key << "free" << YAML::Value << YAML::Flow << d.free;
    out << YAML::Key << "bound_low" << YAML::Value << d.bound_low;
    out << YAML::Key << "bound_high" << YAML::Value << d.bound_high;
    out << YAML::Key << "budget" << YAML::Value << d.budget;
    out << YAML::Key << "metric" << YAML::Value << metric_name(d.metric);
    out << YAML::EndMap;
  }
  if (!cfg.trajectory_input.empty()) {
    out << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "input" << YAML::Value << YAML::DoubleQuoted << cfg.trajectory_input;
    out << YAML::EndMap;
  }
  if (!cfg.fixtures_dir.empty()) out << YAML::Key << "fixtures_dir" << YAML::Value << cfg.fixtures_dir;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace rydswap
