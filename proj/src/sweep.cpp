#include "rydswap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rydswap/parallel.hpp"

namespace rydswap {

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kFidelity: return "fidelity";
    case Metric::kRotationFidelity: return "rotation_fidelity";
    case Metric::kInfidelityWithLoss: return "infidelity_with_loss";
    case Metric::kRefitFidelity: return "refit_fidelity";
    case Metric::kRefitInfidelityWithLoss: return "refit_infidelity_with_loss";
  }
  return "fidelity";
}

Metric parse_metric(const std::string& name) {
  for (Metric m : {Metric::kFidelity, Metric::kRotationFidelity, Metric::kInfidelityWithLoss,
                   Metric::kRefitFidelity, Metric::kRefitInfidelityWithLoss}) {
    if (metric_name(m) == name) return m;
  }
  throw ModelError("unknown metric '" + name + "'");
}

namespace {

double* field(GateParams& p, const std::string& name) {
  if (name == "omega1_max") return &p.omega1_max;
  if (name == "omega2") return &p.omega2;
  if (name == "delta") return &p.delta;
  if (name == "v_tt") return &p.v_tt;
  if (name == "v_ct") return &p.v_ct;
  if (name == "v_block") return &p.v_block;
  if (name == "gate_time") return &p.gate_time;
  if (name == "sigma_ratio") return &p.sigma_ratio;
  if (name == "omega_c") return &p.omega_c;
  if (name == "tau") return &p.tau;
  return nullptr;
}

}  // namespace

double get_param(const GateParams& p, const std::string& name) {
  if (name == "v_cc") return p.v_cc.value_or(p.v_ct);
  GateParams copy = p;
  const double* f = field(copy, name);
  if (f == nullptr) throw ModelError("unknown parameter '" + name + "'");
  return *f;
}

void set_param(GateParams& p, const std::string& name, double value) {
  if (!std::isfinite(value)) throw ModelError("non-finite value for '" + name + "'");
  if (name == "v_cc") {
    p.v_cc = value;
    return;
  }
  double* f = field(p, name);
  if (f == nullptr) throw ModelError("unknown parameter '" + name + "'");
  *f = value;
  if (name == "v_ct") p.v_ct_targets.clear();
}

bool needs_refit(Metric m) { return m == Metric::kRefitFidelity || m == Metric::kRefitInfidelityWithLoss; }

PointResult evaluate_point(Variant variant, const GateParams& params, bool refit_phases) {
  PointResult r;
  try {
    const GateProtocol proto = make_protocol(variant, params);
    const GateReport rep = run_gate(proto);
    r.fidelity = rep.fidelity;
    r.rotation_fidelity = rotation_fidelity(rep.u_gate, proto.ideal);
    r.fidelity_with_loss = rep.fidelity_with_loss;
    if (refit_phases) {
      r.refit_fidelity = phase_optimized_fidelity(rep.u_gate, proto.ideal, proto.n_atoms);
      r.refit_fidelity_with_loss = phase_optimized_fidelity(rep.u_lossy, proto.ideal, proto.n_atoms);
    }
    r.mean_loss = rep.mean_loss;
    r.t_bar_r = rep.t_bar_r;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

double metric_cost(const PointResult& r, Metric m) {
  if (!r.ok) return std::numeric_limits<double>::infinity();
  switch (m) {
    case Metric::kFidelity: return 1.0 - r.fidelity;
    case Metric::kRotationFidelity: return 1.0 - r.rotation_fidelity;
    case Metric::kInfidelityWithLoss: return 1.0 - r.fidelity_with_loss;
    case Metric::kRefitFidelity: return 1.0 - r.refit_fidelity;
    case Metric::kRefitInfidelityWithLoss: return 1.0 - r.refit_fidelity_with_loss;
  }
  return 1.0 - r.fidelity;
}

double metric_value(const PointResult& r, Metric m) {
  if (!r.ok) return std::numeric_limits<double>::quiet_NaN();
  switch (m) {
    case Metric::kFidelity: return r.fidelity;
    case Metric::kRotationFidelity: return r.rotation_fidelity;
    case Metric::kInfidelityWithLoss: return 1.0 - r.fidelity_with_loss;
    case Metric::kRefitFidelity: return r.refit_fidelity;
    case Metric::kRefitInfidelityWithLoss: return 1.0 - r.refit_fidelity_with_loss;
  }
  return r.fidelity;
}

std::vector<ScanRow> scan(const ScanSpec& spec) {
  if (spec.values.empty()) throw ModelError("scan grid is empty");
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw ModelError("scan grid contains a non-finite value");
  }
  get_param(spec.base, spec.parameter);
  std::vector<ScanRow> rows(spec.values.size());
  parallel_for(static_cast<int>(rows.size()), spec.jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    GateParams p = spec.base;
    set_param(p, spec.parameter, spec.values[k]);
    rows[k].value = spec.values[k];
    rows[k].point = evaluate_point(spec.variant, p, needs_refit(spec.metric));
    rows[k].metric = metric_value(rows[k].point, spec.metric);
  });
  return rows;
}

OptimizeResult optimize(const OptimizeSpec& spec) {
  OptimizeResult out;
  out.params = spec.base;
  const bool refit = needs_refit(spec.metric);
  out.base_cost = metric_cost(evaluate_point(spec.variant, spec.base, refit), spec.metric);
  out.cost = out.base_cost;
  out.evaluations = 1;
  out.trace.push_back(out.base_cost);
  if (spec.free.empty()) return out;
  if (spec.budget < 1) throw ModelError("optimizer budget must be >= 1");

  std::vector<double> x0;
  std::vector<double> lower;
  std::vector<double> upper;
  for (const auto& f : spec.free) {
    if (!(f.upper > f.lower)) throw ModelError("free parameter '" + f.name + "' needs lower < upper");
    // Work in the unit box so simplex steps are comparable across parameters.
    const double v = get_param(spec.base, f.name);
    x0.push_back(std::clamp((v - f.lower) / (f.upper - f.lower), 0.0, 1.0));
    lower.push_back(0.0);
    upper.push_back(1.0);
  }
  auto to_params = [&](const std::vector<double>& x) {
    GateParams p = spec.base;
    for (std::size_t k = 0; k < spec.free.size(); ++k) {
      set_param(p, spec.free[k].name, spec.free[k].lower + x[k] * (spec.free[k].upper - spec.free[k].lower));
    }
    return p;
  };
  NelderMeadOptions opt;
  opt.max_evaluations = spec.budget;
  opt.initial_step = 0.1;
  opt.f_tolerance = 1e-9;
  opt.x_tolerance = 1e-7;
  const NelderMeadResult nm = nelder_mead(
      [&](const std::vector<double>& x) { return metric_cost(evaluate_point(spec.variant, to_params(x), refit), spec.metric); },
      x0, lower, upper, opt);
  out.evaluations += nm.evaluations;
  out.budget_exhausted = !nm.converged;
  for (double v : nm.trace) out.trace.push_back(std::min(v, out.trace.back()));
  if (nm.value < out.base_cost) {
    out.cost = nm.value;
    out.params = to_params(nm.x);
  }
  return out;
}

double c6_shift(double c6_thz_um6, double r_um, bool angular) {
  if (!(r_um > 0.0)) throw ModelError("distance must be positive");
  const double mhz = c6_thz_um6 * 1e6 / std::pow(r_um, 6);
  return angular ? kTwoPi * mhz : mhz;
}

std::vector<DistanceRow> distance_scan(const DistanceSpec& spec) {
  if (spec.radii.empty()) throw ModelError("distance grid is empty");
  if (spec.budget < 1) throw ModelError("optimizer budget must be >= 1");
  std::vector<DistanceRow> rows(spec.radii.size());
  parallel_for(static_cast<int>(rows.size()), spec.jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    DistanceRow& row = rows[k];
    row.radius = spec.radii[k];
    try {
      GateParams base = spec.base;
      row.v_ct = c6_shift(spec.c6_ct, row.radius, spec.angular);
      base.v_ct = row.v_ct;
      base.v_ct_targets.clear();
      base.v_cc.reset();
      if (spec.c6_tt) base.v_tt = c6_shift(*spec.c6_tt, spec.target_spacing, spec.angular);
      OptimizeSpec o;
      o.variant = spec.variant;
      o.base = base;
      o.metric = spec.metric;
      o.budget = spec.budget;
      for (FreeParameter f : spec.free) {
        if (spec.relative_bounds) {
          const double v = get_param(base, f.name);
          const double a = v * f.lower;
          const double b = v * f.upper;
          f.lower = std::min(a, b);
          f.upper = std::max(a, b);
        }
        o.free.push_back(f);
      }
      const OptimizeResult r = optimize(o);
      row.base_infidelity = r.base_cost;
      row.infidelity = r.cost;
      row.budget_exhausted = r.budget_exhausted;
      row.params = r.params;
      row.ok = std::isfinite(r.cost);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace rydswap
