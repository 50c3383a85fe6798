#include "rydswap/analytic.hpp"

#include <cmath>
#include <limits>

namespace rydswap {

EffectiveParams effective_params(double omega1, double omega2, double delta, double v) {
  if (delta == 0.0) throw ModelError("effective model needs a nonzero detuning");
  if (std::abs(delta - v) <= 1e-12 * std::max(std::abs(delta), std::abs(v))) {
    throw ModelError("interaction-induced resonance: Delta equals V");
  }
  EffectiveParams p;
  p.a = std::sqrt(2.0) * omega1 * omega2 / (4.0 * delta);
  p.b = v - 2.0 * omega2 * omega2 / (4.0 * delta);
  p.c = omega2 * omega2 / (4.0 * (delta - v));
  p.omega_eff = p.a * p.a / (p.b - p.c);
  p.lambda0 = p.c;
  const double root = std::sqrt(8.0 * p.a * p.a + (p.b - p.c) * (p.b - p.c));
  // Shifts x = lambda - C solve x^2 - (B - C) x - 2 A^2 = 0; take the non-cancelling root first.
  const double d = p.b - p.c;
  const double big = 0.5 * (d + std::copysign(root, d));
  const double small = big == 0.0 ? 0.0 : -2.0 * p.a * p.a / big;
  const double x_minus = d >= 0.0 ? small : big;
  const double x_plus = d >= 0.0 ? big : small;
  p.lambda_minus = p.c + x_minus;
  p.lambda_plus = p.c + x_plus;
  auto vec = [&](double x, const Eigen::Vector3d& fallback) {
    Eigen::Vector3d e(p.a, p.a, x);
    if (e.norm() == 0.0) e = fallback;
    return Eigen::Vector3d(e.normalized());
  };
  const Eigen::Vector3d sym(1.0, 1.0, 0.0);
  const Eigen::Vector3d ryd(0.0, 0.0, 1.0);
  p.eigvec_minus = vec(x_minus, d >= 0.0 ? sym : ryd);
  p.eigvec_plus = vec(x_plus, d >= 0.0 ? ryd : sym);
  return p;
}

Eigen::Matrix3d effective_hamiltonian(const EffectiveParams& p) {
  Eigen::Matrix3d h;
  h << p.c, 0.0, p.a, 0.0, p.c, p.a, p.a, p.a, p.b;
  return h;
}

double degeneracy_gap(const EffectiveParams& p) {
  return std::min(std::abs(p.lambda_minus - p.lambda0), std::abs(p.lambda_plus - p.lambda0));
}

Eigen::Vector3d dark_state(double omega1, double omega2) {
  const double n2 = 2.0 * omega1 * omega1 + omega2 * omega2;
  if (n2 == 0.0) throw ModelError("dark state needs a nonzero drive");
  return Eigen::Vector3d(omega2, -omega1, -omega1) / std::sqrt(n2);
}

double dark_rydberg_probability(double omega1, double omega2) {
  const Eigen::Vector3d d = dark_state(omega1, omega2);
  return d(1) * d(1) + d(2) * d(2);
}

SwapTimeEstimate swap_time_estimate(double omega1_max, double delta, EnvelopeKind kind, double sigma_ratio) {
  if (!(omega1_max > 0.0) || delta == 0.0) throw ModelError("swap time needs positive drive and nonzero detuning");
  // Integral of the squared unit envelope over the pulse in units of T.
  double shape = 1.0;
  if (kind == EnvelopeKind::kTruncatedGaussian) {
    const Envelope unit = Envelope::truncated_gaussian(1.0, 0.0, 1.0, sigma_ratio);
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double u = static_cast<double>(i) / n;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double e = envelope_value(unit, u);
      s += w * e * e;
    }
    shape = s / (3.0 * n);
  } else if (kind == EnvelopeKind::kZero) {
    throw ModelError("swap time needs a nonzero envelope");
  }
  const double full = 6.0 * kPi * std::abs(delta) / (omega1_max * omega1_max * shape);
  if (!std::isfinite(full) || full <= 0.0) throw ModelError("no positive swap time");
  return {full, 0.5 * full};
}

PhasePrediction predict_phases(double omega2, double delta, double v, double t, PhaseFormula formula) {
  if (std::abs(delta - v) <= 1e-12 * std::max(std::abs(delta), std::abs(v))) {
    throw ModelError("interaction-induced resonance: Delta equals V");
  }
  const double o2 = omega2 * omega2;
  const double offset = formula == PhaseFormula::kHalf ? 1.5 * kPi : 3.0 * kPi;
  PhasePrediction p;
  p.r_c01 = wrap_phase(o2 * t / (4.0 * (delta - v)));
  p.one_c01 = wrap_phase(o2 * t / (4.0 * delta));
  p.r_c00 = wrap_phase(-1.5 * kPi);
  p.r_c11 = wrap_phase(offset + o2 * t / (2.0 * (delta - v)));
  p.one_c11 = wrap_phase(offset + o2 * t / (2.0 * delta));
  return p;
}

namespace {

StagePlan target_stage_only(const GateProtocol& proto, bool decay) {
  StagePlan plan;
  for (const auto& s : proto.plan.stages) {
    if (s.name == "targets") plan.stages.push_back(s);
  }
  for (auto& s : plan.stages) s.spec.decay = decay;
  plan.policy = proto.plan.policy;
  return plan;
}

cplx reported_element(const GateProtocol& proto, const CMatrix& psi, std::size_t out, Eigen::Index col, double t) {
  const auto& spec = proto.plan.stages.front().spec;
  double energy = 0.0;
  for (int a = 0; a < spec.basis.atoms(); ++a) energy += spec.frame[a][spec.basis.level_of(out, a)];
  cplx z = std::exp(kI * energy * t) * psi(static_cast<Eigen::Index>(out), col);
  if (proto.params.convention == PhaseConvention::kPositiveEnergy) z = std::conj(z);
  return z;
}

}  // namespace

StagePhases simulate_stage_phases(const GateParams& params) {
  const GateProtocol proto = make_protocol(Variant::kCSwapCCSdag, params);
  StagePlan plan = target_stage_only(proto, false);
  plan.policy.record_trajectory = true;
  const auto& basis = plan.stages.front().spec.basis;
  auto idx = [&](const char* c, const char* t1, const char* t2) { return index_of(basis, {c, t1, t2}); };
  const std::vector<std::size_t> in{idx("r", "0", "0"), idx("r", "0", "1"), idx("r", "1", "1"),
                                    idx("1", "0", "1"), idx("1", "1", "1"), idx("1", "0", "0")};
  CMatrix psi0 = CMatrix::Zero(static_cast<Eigen::Index>(basis.dim), static_cast<Eigen::Index>(in.size()));
  for (std::size_t k = 0; k < in.size(); ++k) psi0(static_cast<Eigen::Index>(in[k]), static_cast<Eigen::Index>(k)) = 1.0;
  const PropagationResult res = propagate(plan, psi0);
  const double t = params.gate_time;
  const CMatrix& psi = res.final_state;

  StagePhases out;
  out.phase.r_c00 = std::arg(reported_element(proto, psi, in[0], 0, t));
  out.phase.r_c01 = std::arg(reported_element(proto, psi, in[1], 1, t));
  out.phase.r_c11 = std::arg(reported_element(proto, psi, in[2], 2, t));
  const std::size_t swapped = idx("1", "1", "0");
  out.phase.one_c01 = std::arg(reported_element(proto, psi, swapped, 3, t));
  out.phase.one_c11 = std::arg(reported_element(proto, psi, in[4], 4, t));
  const cplx dark = reported_element(proto, psi, in[5], 5, t);
  out.one_c00_phase = std::arg(dark);
  out.one_c00_population = std::norm(dark);
  out.r_c01_stay = std::norm(psi(static_cast<Eigen::Index>(in[1]), 1));
  out.r_c01_transfer = std::norm(psi(static_cast<Eigen::Index>(idx("r", "1", "0")), 1));
  out.one_c01_transfer = std::norm(psi(static_cast<Eigen::Index>(swapped), 3));
  out.one_c00_rydberg_time = res.rydberg_integral[5];
  // Rydberg population sampled nearest to the pulse centre.
  const double mid = plan.stages.front().t_begin + 0.5 * t;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    if (std::abs(res.times[k] - mid) < best) {
      best = std::abs(res.times[k] - mid);
      out.one_c00_peak_rydberg = res.rydberg[k][5];
    }
  }
  return out;
}

double exchange_ripple_period(const GateParams& params) {
  const EffectiveParams e = effective_params(params.omega1_max, params.omega2, params.delta, 0.0);
  return kTwoPi / std::abs(e.b);
}

namespace {

double exchange_amplitude(const GateParams& params, double t) {
  GateParams p = params;
  p.gate_time = t;
  const GateProtocol proto = make_protocol(Variant::kSwap, p);
  StagePlan plan = proto.plan;
  for (auto& s : plan.stages) s.spec.decay = false;
  const auto& basis = plan.stages.front().spec.basis;
  CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(basis.dim));
  psi0(static_cast<Eigen::Index>(basis.comp_indices[1])) = 1.0;
  const PropagationResult res = propagate(plan, psi0);
  return std::abs(res.final_state(static_cast<Eigen::Index>(basis.comp_indices[2]), 0));
}

}  // namespace

double smoothed_exchange(const GateParams& params, double t, int samples, int* evaluations) {
  const double w = exchange_ripple_period(params);
  // The abrupt end of the Rydberg pulse also leaves a ripple near the 1-r splitting.
  const double fast = kTwoPi / std::hypot(params.delta, params.omega2);
  constexpr int kFastSamples = 4;
  double s = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double tk = t + ((k + 0.5) / samples - 0.5) * w;
    for (int m = 0; m < kFastSamples; ++m) {
      s += exchange_amplitude(params, tk + (static_cast<double>(m) / kFastSamples) * fast);
    }
  }
  if (evaluations != nullptr) *evaluations += samples * kFastSamples;
  return s / (samples * kFastSamples);
}

CalibrationResult calibrate_swap_time(const GateParams& params, double seed, const CalibrationOptions& options) {
  if (!(seed > 0.0)) throw ModelError("calibration seed must be positive");
  CalibrationResult out;
  out.window = exchange_ripple_period(params);
  auto g = [&](double t) { return smoothed_exchange(params, t, options.window_samples, &out.evaluations); };
  const double lo = seed * options.lower_factor;
  const double hi = seed * options.upper_factor;
  const double step = 0.5 * out.window;
  std::vector<double> ts;
  for (double t = lo; t <= hi + 1e-12; t += step) ts.push_back(t);
  if (ts.size() < 3) throw ModelError("calibration bracket narrower than the ripple period");

  if (options.half_rotation) {
    const double target = 1.0 / std::sqrt(2.0);
    double prev_t = ts[0];
    double prev_g = g(prev_t);
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const double cur_g = g(ts[k]);
      if ((prev_g - target) * (cur_g - target) <= 0.0) {
        double a = prev_t;
        double b = ts[k];
        double ga = prev_g;
        while (b - a > options.tolerance) {
          const double m = 0.5 * (a + b);
          const double gm = g(m);
          if ((ga - target) * (gm - target) <= 0.0) {
            b = m;
          } else {
            a = m;
            ga = gm;
          }
        }
        out.gate_time = 0.5 * (a + b);
        out.objective = g(out.gate_time);
        return out;
      }
      prev_t = ts[k];
      prev_g = cur_g;
    }
    throw ModelError("half-rotation condition not met inside the bracket");
  }

  std::vector<double> vals(ts.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    vals[k] = g(ts[k]);
    if (vals[k] > vals[best]) best = k;
  }
  if (best == 0 || best + 1 == ts.size()) throw ModelError("no interior maximum in calibration bracket");
  // Golden-section refinement around the best grid point.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = ts[best - 1];
  double b = ts[best + 1];
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > options.tolerance) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
  }
  out.gate_time = 0.5 * (a + b);
  out.objective = std::max(gc, gd);
  return out;
}

double fitted_exchange_rate(double omega1, double omega2, double delta, double duration) {
  GateParams p;
  p.omega1_max = omega1;
  p.omega2 = omega2;
  p.delta = delta;
  p.gate_time = duration;
  p.tau = 0.0;
  GateProtocol proto = make_protocol(Variant::kSwap, p);
  StagePlan plan = proto.plan;
  for (auto& s : plan.stages) {
    for (auto& d : s.spec.drives) {
      if (d.family == DriveFamily::kMicrowave) d.envelope = Envelope::square(omega1, s.t_begin, s.t_begin + s.duration);
    }
  }
  plan.policy.max_step = duration / 4000.0;
  plan.policy.record_trajectory = true;
  const auto& basis = plan.stages.front().spec.basis;
  CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(basis.dim));
  psi0(static_cast<Eigen::Index>(basis.comp_indices[1])) = 1.0;
  const PropagationResult res = propagate(plan, psi0);
  const auto target = static_cast<Eigen::Index>(basis.comp_indices[2]);
  std::vector<double> ts;
  std::vector<double> ps;
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    ts.push_back(res.times[k]);
    ps.push_back(res.populations[k](target, 0));
  }
  auto sse = [&](double w) {
    double s = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double m = 0.5 * (1.0 - std::cos(w * ts[k]));
      s += (ps[k] - m) * (ps[k] - m);
    }
    return s;
  };
  // Coarse search over angular frequencies resolving at least one cycle.
  const double w_lo = kPi / duration;
  const double w_hi = 200.0 * kPi / duration;
  const int n = 20000;
  double best_w = w_lo;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double w = w_lo + (w_hi - w_lo) * i / n;
    const double s = sse(w);
    if (s < best) {
      best = s;
      best_w = w;
    }
  }
  double a = best_w - (w_hi - w_lo) / n;
  double b = best_w + (w_hi - w_lo) / n;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  while (b - a > 1e-10 * best_w) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (sse(c) < sse(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.25 * (a + b);  // population oscillates at twice the exchange rate
}

}  // namespace rydswap
