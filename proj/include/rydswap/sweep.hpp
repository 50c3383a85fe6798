// Parameter scans, Nelder-Mead re-optimization and distance scans.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydswap/gates.hpp"
#include "rydswap/optim.hpp"

namespace rydswap {

// The refit metrics re-optimize single-atom Z phases before comparing.
enum class Metric { kFidelity, kRotationFidelity, kInfidelityWithLoss, kRefitFidelity, kRefitInfidelityWithLoss };
std::string metric_name(Metric m);
Metric parse_metric(const std::string& name);

// Named scalar fields of GateParams in internal units: omega1_max, omega2,
// delta, v_tt, v_ct, v_cc, v_block, gate_time, sigma_ratio, omega_c, tau.
double get_param(const GateParams& p, const std::string& name);
void set_param(GateParams& p, const std::string& name, double value);

struct PointResult {
  bool ok = true;
  std::string error;
  double fidelity = 0.0;
  double rotation_fidelity = 0.0;
  double fidelity_with_loss = 0.0;
  double refit_fidelity = 0.0;            // computed only when `refit_phases`
  double refit_fidelity_with_loss = 0.0;  // computed only when `refit_phases`
  double mean_loss = 0.0;
  double t_bar_r = 0.0;
};
PointResult evaluate_point(Variant variant, const GateParams& params, bool refit_phases = false);
bool needs_refit(Metric m);
// Quantity minimized by `optimize`; infidelity under `m`.
double metric_cost(const PointResult& r, Metric m);
// Value reported in scan tables: fidelity-type metrics as fidelities,
// the loss metrics as infidelities.
double metric_value(const PointResult& r, Metric m);

struct ScanSpec {
  Variant variant = Variant::kSwap;
  GateParams base;
  std::string parameter;
  std::vector<double> values;  // internal units
  Metric metric = Metric::kFidelity;
  int jobs = 1;
};
struct ScanRow {
  double value = 0.0;
  double metric = 0.0;
  PointResult point;
};
std::vector<ScanRow> scan(const ScanSpec& spec);

struct FreeParameter {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
};
struct OptimizeSpec {
  Variant variant = Variant::kSwap;
  GateParams base;
  std::vector<FreeParameter> free;
  Metric metric = Metric::kFidelity;
  int budget = 200;
};
struct OptimizeResult {
  GateParams params;
  double cost = 0.0;       // best infidelity under the metric
  double base_cost = 0.0;
  int evaluations = 0;
  bool budget_exhausted = false;
  std::vector<double> trace;  // best-so-far cost per evaluation
};
OptimizeResult optimize(const OptimizeSpec& spec);

// V = C6 / R^6 with C6 in THz um^6 and R in um, returned in rad/us. With
// `angular` the THz value is taken as a cyclic frequency and multiplied by 2 pi.
double c6_shift(double c6_thz_um6, double r_um, bool angular = true);

struct DistanceSpec {
  Variant variant = Variant::kCSwapCCSdag;
  GateParams base;
  std::vector<double> radii;            // um, control-target distance
  double c6_ct = -80.0;                 // THz um^6
  std::optional<double> c6_tt;          // THz um^6; V_tt from base when unset
  double target_spacing = 0.0;          // um, used with c6_tt
  bool angular = true;
  std::vector<FreeParameter> free;      // bounds relative to base when `relative_bounds`
  Metric metric = Metric::kRefitInfidelityWithLoss;
  bool relative_bounds = true;
  int budget = 40;
  int jobs = 1;
};
struct DistanceRow {
  double radius = 0.0;
  double v_ct = 0.0;                // rad/us
  double base_infidelity = 0.0;     // infidelity with loss before optimization
  double infidelity = 0.0;          // after optimization
  bool ok = true;
  bool budget_exhausted = false;
  std::string error;
  GateParams params;
};
std::vector<DistanceRow> distance_scan(const DistanceSpec& spec);

}  // namespace rydswap
