#include "rydswap/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rydswap/parallel.hpp"

namespace rydswap {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string echo_header(const ScenarioConfig& cfg) {
  std::stringstream in(to_yaml(cfg));
  std::string out = "# resolved configuration\n";
  for (std::string line; std::getline(in, line);) out += "# " + line + "\n";
  return out;
}

class Writer {
 public:
  Writer(const ScenarioConfig& cfg, const RunContext& ctx, ScenarioOutcome& outcome)
      : header_(echo_header(cfg)), dir_(ctx.out_dir), outcome_(outcome) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& body) {
    if (dir_.empty()) return;
    const fs::path p = fs::path(dir_) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << header_ << body;
    outcome_.files.push_back(p.string());
  }

  void write_raw(const std::string& name, const std::string& body) {
    if (dir_.empty()) return;
    const fs::path p = fs::path(dir_) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << body;
    outcome_.files.push_back(p.string());
  }

 private:
  std::string header_;
  std::string dir_;
  ScenarioOutcome& outcome_;
};

std::string bits(std::size_t value, int n) {
  std::string s;
  for (int a = 0; a < n; ++a) s += ((value >> (n - 1 - a)) & 1U) ? '1' : '0';
  return s;
}

std::string matrix_csv(const Eigen::MatrixXd& m, int n_atoms) {
  std::string out = "out\\in";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + bits(static_cast<std::size_t>(j), n_atoms);
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += bits(static_cast<std::size_t>(i), n_atoms);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + fmt(m(i, j));
    out += "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

// Phases in units of pi for elements above the amplitude floor, else 0.
Eigen::MatrixXd phase_matrix(const CMatrix& u) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (std::abs(u(i, j)) > 1e-6) m(i, j) = phase_pi(u(i, j));
    }
  }
  return m;
}

std::size_t default_trajectory_input(const ScenarioConfig& cfg, int n_atoms) {
  if (cfg.trajectory_input.empty()) return 1;
  std::size_t v = 0;
  for (char c : cfg.trajectory_input) v = (v << 1U) | (c == '1' ? 1U : 0U);
  if (static_cast<int>(cfg.trajectory_input.size()) != n_atoms) throw ConfigError("trajectory input length mismatch");
  return v;
}

void run_gate_scenario(const ScenarioConfig& cfg_in, const RunContext& ctx, ScenarioOutcome& outcome) {
  ScenarioConfig cfg = cfg_in;
  std::vector<std::pair<std::string, std::string>> rows;
  if (cfg.calibrate) {
    const CalibrationResult c = calibrate_config(cfg);
    cfg.params.gate_time = c.gate_time;
    rows.emplace_back("calibrated_gate_time_us", fmt(c.gate_time));
  }
  const GateProtocol proto = make_protocol(cfg.variant, cfg.params);
  RunOptions opt;
  opt.phase_optimized = true;
  const GateReport rep = run_gate(proto, nullptr, opt);
  rows.emplace_back("variant", variant_name(cfg.variant));
  rows.emplace_back("gate_time_us", fmt(cfg.params.gate_time));
  rows.emplace_back("fidelity", fmt(rep.fidelity));
  rows.emplace_back("phase_optimized_fidelity", fmt(rep.phase_optimized_fidelity));
  rows.emplace_back("rotation_fidelity", fmt(rotation_fidelity(rep.u_gate, proto.ideal)));
  rows.emplace_back("fidelity_with_loss", fmt(rep.fidelity_with_loss));
  rows.emplace_back("mean_loss", fmt(rep.mean_loss));
  rows.emplace_back("t_bar_r_us", fmt(rep.t_bar_r));
  if (is_controlled(cfg.variant)) {
    for (const auto& c : conditional_fidelities(proto, rep)) {
      rows.emplace_back("conditional_fidelity_" + bits(static_cast<std::size_t>(c.control_config), proto.n_controls),
                        fmt(c.fidelity));
      rows.emplace_back("conditional_phase_optimized_" + bits(static_cast<std::size_t>(c.control_config), proto.n_controls),
                        fmt(c.phase_optimized));
    }
  }
  Writer w(cfg, ctx, outcome);
  w.write("amplitudes.csv", matrix_csv(rep.u_gate.cwiseAbs(), proto.n_atoms));
  w.write("phases.csv", matrix_csv(phase_matrix(rep.u_gate), proto.n_atoms));
  w.write("loss.csv", matrix_csv(rep.loss_matrix.real(), proto.n_atoms));
  w.write("summary.csv", summary_csv(rows));
  if (ctx.dump_trajectory) {
    w.write("trajectory.csv", trajectory_csv(proto, default_trajectory_input(cfg, proto.n_atoms)));
  }
  w.write_raw("resolved_config.yaml", to_yaml(cfg));
  outcome.summary = rows;
}

void run_calibrate_scenario(const ScenarioConfig& cfg, const RunContext& ctx, ScenarioOutcome& outcome) {
  const SwapTimeEstimate est = swap_time_estimate(cfg.params.omega1_max, cfg.params.delta,
                                                  EnvelopeKind::kTruncatedGaussian, cfg.params.sigma_ratio);
  const CalibrationResult c = calibrate_config(cfg);
  std::vector<std::pair<std::string, std::string>> rows{
      {"variant", variant_name(cfg.variant)},
      {"t_est_us", fmt(est.full)},
      {"t_est_half_us", fmt(est.half)},
      {"seed_us", fmt(cfg.calibration_seed_us.value_or(est.half))},
      {"half_rotation", cfg.calibration.half_rotation ? "true" : "false"},
      {"calibrated_gate_time_us", fmt(c.gate_time)},
      {"objective", fmt(c.objective)},
      {"ripple_window_us", fmt(c.window)},
      {"evaluations", std::to_string(c.evaluations)},
  };
  Writer w(cfg, ctx, outcome);
  w.write("calibration.csv", summary_csv(rows));
  w.write_raw("resolved_config.yaml", to_yaml(cfg));
  outcome.summary = rows;
}

void run_scan_scenario(const ScenarioConfig& cfg, const RunContext& ctx, ScenarioOutcome& outcome) {
  Writer w(cfg, ctx, outcome);
  std::vector<std::pair<std::string, std::string>> rows{{"variant", variant_name(cfg.variant)}};
  if (cfg.scan) {
    const ScanConfig& s = *cfg.scan;
    const ParamUnit u = param_unit(s.parameter, cfg.vct_angular);
    const double unit = s.relative_to.empty()
                            ? u.scale
                            : get_param(cfg.params, param_unit(s.relative_to, cfg.vct_angular).field);
    ScanSpec spec;
    spec.variant = cfg.variant;
    spec.base = cfg.params;
    spec.parameter = u.field;
    spec.metric = s.metric;
    spec.jobs = ctx.jobs;
    for (double v : s.values) spec.values.push_back(v * unit);
    const auto table = scan(spec);
    std::string body = (s.relative_to.empty() ? s.parameter : s.parameter + "_over_" + s.relative_to) +
                       ",internal_value,metric,fidelity,rotation_fidelity,infidelity_with_loss,mean_loss,t_bar_r_us,ok,error\n";
    int failures = 0;
    for (std::size_t k = 0; k < table.size(); ++k) {
      const ScanRow& r = table[k];
      failures += r.point.ok ? 0 : 1;
      body += fmt(s.values[k]) + "," + fmt(r.value) + "," + fmt(r.metric) + "," + fmt(r.point.fidelity) + "," +
              fmt(r.point.rotation_fidelity) + "," + fmt(1.0 - r.point.fidelity_with_loss) + "," +
              fmt(r.point.mean_loss) + "," + fmt(r.point.t_bar_r) + "," + (r.point.ok ? "1" : "0") + "," +
              "\"" + r.point.error + "\"\n";
    }
    w.write("scan.csv", body);
    rows.emplace_back("scan_points", std::to_string(table.size()));
    rows.emplace_back("scan_failures", std::to_string(failures));
    rows.emplace_back("metric", metric_name(s.metric));
  }
  if (cfg.distance) {
    const DistanceConfig& d = *cfg.distance;
    DistanceSpec spec;
    spec.variant = cfg.variant;
    spec.base = cfg.params;
    spec.radii = d.radii_um;
    spec.c6_ct = d.c6_ct_thz_um6;
    spec.c6_tt = d.c6_tt_thz_um6;
    spec.target_spacing = d.target_spacing_um;
    spec.angular = d.c6_angular;
    spec.budget = d.budget;
    spec.metric = d.metric;
    spec.jobs = ctx.jobs;
    for (const auto& key : d.free) spec.free.push_back({param_unit(key, cfg.vct_angular).field, d.bound_low, d.bound_high});
    const auto table = distance_scan(spec);
    std::string body = "radius_um,vct_mhz,base_infidelity,infidelity,budget_exhausted,ok";
    for (const auto& key : d.free) body += "," + key;
    body += ",error\n";
    for (const auto& r : table) {
      body += fmt(r.radius) + "," + fmt(r.v_ct / kTwoPi) + "," + fmt(r.base_infidelity) + "," + fmt(r.infidelity) +
              "," + (r.budget_exhausted ? "1" : "0") + "," + (r.ok ? "1" : "0");
      for (const auto& key : d.free) {
        const ParamUnit u = param_unit(key, cfg.vct_angular);
        body += "," + fmt(get_param(r.params, u.field) / u.scale);
      }
      body += ",\"" + r.error + "\"\n";
    }
    w.write("distance.csv", body);
    rows.emplace_back("distance_points", std::to_string(table.size()));
    rows.emplace_back("distance_metric", metric_name(d.metric));
  }
  w.write("summary.csv", summary_csv(rows));
  w.write_raw("resolved_config.yaml", to_yaml(cfg));
  outcome.summary = rows;
}

void run_noise_scenario(const ScenarioConfig& cfg, const RunContext& ctx, ScenarioOutcome& outcome) {
  const GateProtocol proto = make_protocol(cfg.variant, cfg.params);
  RunOptions opt;
  opt.with_loss = false;
  const double noiseless = run_gate(proto, nullptr, opt).fidelity;
  std::vector<double> values{0.0};
  std::string key = "none";
  if (cfg.noise_sweep) {
    values = cfg.noise_sweep->values;
    key = cfg.noise_sweep->key;
  }
  std::string shots = "sweep_value,shot_id,doppler_rms_mhz,fidelity\n";
  std::string table = key + ",sigma_doppler_mhz,mean_fidelity,mean_infidelity,std_fidelity,stderr_fidelity,shots\n";
  for (double v : values) {
    NoiseSpec spec = cfg.noise;
    if (key == "temp_uK") spec.doppler.temperature = v * 1e-6;
    if (key == "omega1_rel_width") spec.intensity.microwave_width = v;
    if (key == "omega2_rel_width") spec.intensity.rydberg_width = v;
    const MonteCarloResult mc = monte_carlo_fidelity(proto, spec, ctx.jobs);
    for (std::size_t s = 0; s < mc.fidelities.size(); ++s) {
      shots += fmt(v) + "," + std::to_string(s) + "," + fmt(mc.doppler_rms[s] / kTwoPi) + "," + fmt(mc.fidelities[s]) + "\n";
    }
    table += fmt(v) + "," + fmt(doppler_sigma(spec.doppler) / kTwoPi) + "," + fmt(mc.mean_fidelity) + "," +
             fmt(1.0 - mc.mean_fidelity) + "," + fmt(mc.std_fidelity) + "," +
             fmt(mc.std_fidelity / std::sqrt(static_cast<double>(spec.n_shots))) + "," + std::to_string(spec.n_shots) + "\n";
  }
  std::vector<std::pair<std::string, std::string>> rows{{"variant", variant_name(cfg.variant)},
                                                        {"noiseless_fidelity", fmt(noiseless)},
                                                        {"sweep_key", key},
                                                        {"shots", std::to_string(cfg.noise.n_shots)},
                                                        {"seed", std::to_string(cfg.seed)}};
  Writer w(cfg, ctx, outcome);
  w.write("shots.csv", shots);
  w.write("noise.csv", table);
  w.write("summary.csv", summary_csv(rows));
  w.write_raw("resolved_config.yaml", to_yaml(cfg));
  outcome.summary = rows;
}

void run_trajectory_scenario(const ScenarioConfig& cfg, const RunContext& ctx, ScenarioOutcome& outcome) {
  const GateProtocol proto = make_protocol(cfg.variant, cfg.params);
  const std::size_t input = default_trajectory_input(cfg, proto.n_atoms);
  Writer w(cfg, ctx, outcome);
  w.write("trajectory.csv", trajectory_csv(proto, input));
  w.write_raw("resolved_config.yaml", to_yaml(cfg));
  outcome.summary = {{"variant", variant_name(cfg.variant)}, {"input", bits(input, proto.n_atoms)}};
}

void run_tables_scenario(const ScenarioConfig& cfg, const RunContext& ctx, ScenarioOutcome& outcome) {
  const TableReport rep = reproduce_tables(cfg.fixtures_dir, ctx.jobs);
  int judged = 0;
  int failed = 0;
  for (const auto& c : rep.cells) {
    if (c.informational) continue;
    ++judged;
    failed += c.pass ? 0 : 1;
  }
  std::vector<std::pair<std::string, std::string>> rows{{"result", rep.passed ? "PASS" : "FAIL"},
                                                        {"judged_cells", std::to_string(judged)},
                                                        {"failed_cells", std::to_string(failed)}};
  if (!rep.error.empty()) rows.emplace_back("error", "\"" + rep.error + "\"");
  Writer w(cfg, ctx, outcome);
  w.write("tables.csv", table_report_csv(rep));
  w.write("summary.csv", summary_csv(rows));
  outcome.summary = rows;
  outcome.passed = rep.passed;
}

}  // namespace

CalibrationResult calibrate_config(const ScenarioConfig& cfg) {
  const SwapTimeEstimate est = swap_time_estimate(cfg.params.omega1_max, cfg.params.delta,
                                                  EnvelopeKind::kTruncatedGaussian, cfg.params.sigma_ratio);
  double seed = cfg.calibration_seed_us.value_or(est.half);
  // The half-rotation time is half the full exchange time.
  if (cfg.calibration.half_rotation && !cfg.calibration_seed_us) seed = 0.5 * est.half;
  return calibrate_swap_time(cfg.params, seed, cfg.calibration);
}

std::string trajectory_csv(const GateProtocol& protocol, std::size_t comp_input) {
  StagePlan plan = protocol.plan;
  plan.policy.record_trajectory = true;
  const ProductBasis& basis = plan.stages.front().spec.basis;
  if (comp_input >= basis.comp_indices.size()) throw ModelError("trajectory input out of range");
  CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(basis.dim));
  psi0(static_cast<Eigen::Index>(basis.comp_indices[comp_input])) = 1.0;
  const PropagationResult res = propagate(plan, psi0);
  std::string out = "t_us";
  for (std::size_t i = 0; i < basis.dim; ++i) {
    std::string label;
    for (const auto& l : labels_of(basis, i)) label += l;
    out += ",p_" + label;
  }
  out += ",p_rydberg,norm\n";
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    out += fmt(res.times[k]);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(basis.dim); ++i) out += "," + fmt(res.populations[k](i, 0));
    out += "," + fmt(res.rydberg[k][0]) + "," + fmt(res.norm[k][0]) + "\n";
  }
  return out;
}

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const RunContext& ctx) {
  ScenarioOutcome outcome;
  switch (cfg.kind) {
    case ScenarioKind::kGate: run_gate_scenario(cfg, ctx, outcome); break;
    case ScenarioKind::kCalibrate: run_calibrate_scenario(cfg, ctx, outcome); break;
    case ScenarioKind::kScan: run_scan_scenario(cfg, ctx, outcome); break;
    case ScenarioKind::kNoise: run_noise_scenario(cfg, ctx, outcome); break;
    case ScenarioKind::kTrajectory: run_trajectory_scenario(cfg, ctx, outcome); break;
    case ScenarioKind::kTables: run_tables_scenario(cfg, ctx, outcome); break;
  }
  return outcome;
}

namespace {

struct FixtureCell {
  int row = 0;
  int col = 0;
  double value = 0.0;
  double tol = 0.0;
  bool info = false;
};

std::vector<FixtureCell> read_cells(const YAML::Node& node, const std::string& name) {
  std::vector<FixtureCell> out;
  if (!node) return out;
  if (!node.IsSequence()) throw ConfigError(name + ": cell list must be a sequence");
  for (const auto& e : node) {
    FixtureCell c;
    const YAML::Node at = e["at"];
    if (!at || !at.IsSequence() || at.size() != 2 || !e["value"] || !e["tol"]) {
      throw ConfigError(name + ":" + std::to_string(e.Mark().line + 1) + ": cell needs at: [row, col], value, tol");
    }
    c.row = at[0].as<int>();
    c.col = at[1].as<int>();
    c.value = e["value"].as<double>();
    c.tol = e["tol"].as<double>();
    c.info = e["info"] && e["info"].as<bool>();
    out.push_back(c);
  }
  return out;
}

void run_fixture(const fs::path& path, const std::vector<std::string>& overrides, std::vector<TableCell>& cells,
                 double& offset) {
  const std::string name = path.stem().string();
  const YAML::Node fx = YAML::LoadFile(path.string());
  for (const auto& kv : fx) {
    static const std::set<std::string> allowed{"preset", "fidelity", "mean_loss", "align_phase",
                                               "amplitudes", "phases_pi", "losses", "description"};
    if (allowed.count(kv.first.as<std::string>()) == 0) {
      throw ConfigError(path.string() + ": unknown fixture key '" + kv.first.as<std::string>() + "'");
    }
  }
  if (!fx["preset"]) throw ConfigError(path.string() + ": fixture needs a preset");
  const ScenarioConfig cfg = load_config(preset_path(fx["preset"].as<std::string>()), overrides);
  const GateProtocol proto = make_protocol(cfg.variant, cfg.params);
  RunOptions opt;
  opt.phase_optimized = true;
  const GateReport rep = run_gate(proto, nullptr, opt);
  const auto dim = static_cast<int>(rep.u_gate.rows());

  auto add = [&](const std::string& q, int r, int c, double expected, double actual, double tol, bool info) {
    TableCell cell{name, q, r, c, expected, actual, tol, info, std::abs(actual - expected) <= tol};
    cells.push_back(cell);
  };
  auto check_index = [&](const FixtureCell& c) {
    if (c.row < 0 || c.row >= dim || c.col < 0 || c.col >= dim) throw ConfigError(path.string() + ": cell out of range");
  };
  if (const YAML::Node f = fx["fidelity"]) {
    const std::string conv = f["convention"] ? f["convention"].as<std::string>() : "canonical";
    const double actual = conv == "phase_optimized" ? rep.phase_optimized_fidelity : rep.fidelity;
    add("fidelity", -1, -1, f["value"].as<double>(), actual, f["tol"].as<double>(), f["info"] && f["info"].as<bool>());
  }
  if (const YAML::Node f = fx["mean_loss"]) {
    add("mean_loss", -1, -1, f["value"].as<double>(), rep.mean_loss, f["tol"].as<double>(),
        f["info"] && f["info"].as<bool>());
  }
  for (const auto& c : read_cells(fx["amplitudes"], path.string())) {
    check_index(c);
    add("amplitude", c.row, c.col, c.value, std::abs(rep.u_gate(c.row, c.col)), c.tol, c.info);
  }
  for (const auto& c : read_cells(fx["losses"], path.string())) {
    check_index(c);
    add("loss", c.row, c.col, c.value, rep.loss_matrix(c.row, c.col).real(), c.tol, c.info);
  }
  const auto phases = read_cells(fx["phases_pi"], path.string());
  offset = 0.0;
  if (fx["align_phase"] && fx["align_phase"].as<bool>()) {
    // One global phase fitted over the judged cells (circular mean of the residuals).
    cplx acc = 0.0;
    for (const auto& c : phases) {
      check_index(c);
      if (!c.info) acc += std::exp(kI * kPi * (c.value - phase_pi(rep.u_gate(c.row, c.col))));
    }
    if (std::abs(acc) > 0.0) offset = std::arg(acc) / kPi;
  }
  for (const auto& c : phases) {
    check_index(c);
    const double actual = wrap_phase(kPi * (phase_pi(rep.u_gate(c.row, c.col)) + offset)) / kPi;
    // Compare on the circle; report the expected value's nearest branch.
    const double diff = wrap_phase(kPi * (actual - c.value)) / kPi;
    TableCell cell{name, "phase_pi", c.row, c.col, c.value, c.value + diff, c.tol, c.info, std::abs(diff) <= c.tol};
    cells.push_back(cell);
  }
}

}  // namespace

TableReport reproduce_tables(const std::string& dir_in, int jobs,
                             const std::map<std::string, std::vector<std::string>>& preset_overrides) {
  TableReport rep;
  const fs::path dir = dir_in.empty() ? fs::path(RYDSWAP_FIXTURE_DIR) : fs::path(dir_in);
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".yaml") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    rep.error = "no fixtures in " + dir.string();
    rep.passed = false;
    return rep;
  }
  std::vector<std::vector<TableCell>> per(files.size());
  std::vector<double> offsets(files.size(), 0.0);
  parallel_for(static_cast<int>(files.size()), jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    const auto it = preset_overrides.find(files[k].stem().string());
    const std::vector<std::string> ov = it == preset_overrides.end() ? std::vector<std::string>{} : it->second;
    run_fixture(files[k], ov, per[k], offsets[k]);
  });
  rep.passed = true;
  for (std::size_t k = 0; k < files.size(); ++k) {
    rep.phase_offset_pi[files[k].stem().string()] = offsets[k];
    for (const auto& c : per[k]) {
      if (!c.informational && !c.pass) rep.passed = false;
      rep.cells.push_back(c);
    }
  }
  return rep;
}

std::string table_report_csv(const TableReport& report) {
  std::string out = "fixture,quantity,row,col,expected,actual,diff,tolerance,judged,status\n";
  for (const auto& c : report.cells) {
    out += c.fixture + "," + c.quantity + "," + std::to_string(c.row) + "," + std::to_string(c.col) + "," +
           fmt(c.expected) + "," + fmt(c.actual) + "," + fmt(c.actual - c.expected) + "," + fmt(c.tolerance) + "," +
           (c.informational ? "0" : "1") + "," + (c.informational ? "info" : (c.pass ? "PASS" : "FAIL")) + "\n";
  }
  for (const auto& [name, off] : report.phase_offset_pi) {
    out += name + ",global_phase_offset_pi,-1,-1,0," + fmt(off) + "," + fmt(off) + ",0,0,info\n";
  }
  return out;
}

}  // namespace rydswap
