#include "rydswap/gates.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rydswap/optim.hpp"

namespace rydswap {

namespace {

const std::map<Variant, std::string>& variant_names() {
  static const std::map<Variant, std::string> names{
      {Variant::kSwap, "SWAP"},
      {Variant::kISwap, "iSWAP"},
      {Variant::kSqrtISwap, "sqrt_iSWAP"},
      {Variant::kBSwap, "bSWAP"},
      {Variant::kCISwap, "C_iSWAP"},
      {Variant::kCSwapCCSdag, "C_SWAP_CCSdag"},
      {Variant::kCkSwap, "Ck_SWAP"},
      {Variant::kMuxSwap4T, "MUX_SWAP_4T"},
      {Variant::kMuxSwap3T, "MUX_SWAP_3T"},
  };
  return names;
}

int control_count(Variant v, const GateParams& p) {
  switch (v) {
    case Variant::kCISwap:
    case Variant::kCSwapCCSdag:
    case Variant::kMuxSwap4T:
    case Variant::kMuxSwap3T:
      return 1;
    case Variant::kCkSwap:
      return p.controls;
    default:
      return 0;
  }
}

int target_count(Variant v) {
  if (v == Variant::kMuxSwap4T) return 4;
  if (v == Variant::kMuxSwap3T) return 3;
  return 2;
}

// Target index groups that blockade each other.
std::vector<std::vector<int>> blockade_groups(Variant v) {
  if (v == Variant::kMuxSwap4T) return {{0, 1}, {2, 3}};
  if (v == Variant::kMuxSwap3T) return {{0, 1, 2}};
  return {{0, 1}};
}

int bit_of(std::size_t idx, int atom, int n) { return static_cast<int>((idx >> (n - 1 - atom)) & 1U); }

// 2^n matrix applying the 4x4 gate g to atoms (p, q), q less significant.
CMatrix embed_two(int n, int p, int q, const CMatrix& g) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix u = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::size_t mp = std::size_t{1} << (n - 1 - p);
  const std::size_t mq = std::size_t{1} << (n - 1 - q);
  for (std::size_t j = 0; j < dim; ++j) {
    const int in = bit_of(j, p, n) * 2 + bit_of(j, q, n);
    const std::size_t rest = j & ~(mp | mq);
    for (int out = 0; out < 4; ++out) {
      const std::size_t i = rest | ((out >> 1) ? mp : 0) | ((out & 1) ? mq : 0);
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(out, in);
    }
  }
  return u;
}

CMatrix two_qubit(Variant v) {
  CMatrix g = CMatrix::Zero(4, 4);
  g(0, 0) = 1.0;
  g(3, 3) = 1.0;
  if (v == Variant::kSqrtISwap) {
    const double s = 1.0 / std::sqrt(2.0);
    g(1, 1) = s;
    g(2, 2) = s;
    g(1, 2) = kI * s;
    g(2, 1) = kI * s;
    return g;
  }
  const cplx off = (v == Variant::kISwap || v == Variant::kCISwap) ? kI : cplx(1.0);
  g(1, 2) = off;
  g(2, 1) = off;
  return g;
}

CMatrix pauli_x_on(int n, int atom) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix x = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::size_t m = std::size_t{1} << (n - 1 - atom);
  for (std::size_t j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(j ^ m), static_cast<Eigen::Index>(j)) = 1.0;
  return x;
}

}  // namespace

std::string variant_name(Variant v) { return variant_names().at(v); }

Variant parse_variant(const std::string& name) {
  for (const auto& [v, s] : variant_names()) {
    if (s == name) return v;
  }
  throw ModelError("unknown gate variant '" + name + "'");
}

bool is_controlled(Variant v) {
  return v == Variant::kCISwap || v == Variant::kCSwapCCSdag || v == Variant::kCkSwap ||
         v == Variant::kMuxSwap4T || v == Variant::kMuxSwap3T;
}

GateParams table1_params(Variant v) {
  GateParams p;
  switch (v) {
    case Variant::kSwap:
    case Variant::kBSwap:
      p.omega2 = kTwoPi * 190.8;
      p.delta = kTwoPi * 999.73;
      break;
    case Variant::kISwap:
      p.omega2 = kTwoPi * 145.82;
      p.delta = kTwoPi * 999.84;
      break;
    case Variant::kSqrtISwap:
      p.omega2 = kTwoPi * 137.56;
      p.delta = kTwoPi * 1000.3;
      p.gate_time = 2.3095;
      break;
    case Variant::kCISwap:
      p.omega2 = kTwoPi * 145.82;
      p.delta = kTwoPi * 1000.3;
      p.v_ct = 24800.0;
      break;
    case Variant::kCSwapCCSdag:
    case Variant::kCkSwap:
    case Variant::kMuxSwap4T:
    case Variant::kMuxSwap3T:
      p.omega2 = kTwoPi * 89.76;
      p.delta = kTwoPi * 1001.2;
      p.v_ct = 22140.0;
      break;
  }
  return p;
}

std::vector<PhaseAdjust> default_phase_adjust(Variant v, int n_controls, int n_targets) {
  std::vector<PhaseAdjust> out;
  auto on_targets = [&](double phi) {
    for (int t = 0; t < n_targets; ++t) out.push_back({n_controls + t, phi});
  };
  switch (v) {
    case Variant::kSwap:
    case Variant::kBSwap:
      on_targets(-0.2971 * kPi);
      break;
    case Variant::kISwap:
      on_targets(-0.5 * kPi);
      break;
    case Variant::kCISwap:
      out.push_back({0, -0.5 * kPi});
      on_targets(-0.5 * kPi);
      break;
    case Variant::kCSwapCCSdag:
      out.push_back({0, -0.5 * kPi});
      break;
    default:
      break;
  }
  return out;
}

CMatrix ideal_unitary(Variant v, int n_controls, int n_targets) {
  const int n = n_controls + n_targets;
  const int t0 = n_controls;
  switch (v) {
    case Variant::kSwap:
    case Variant::kISwap:
    case Variant::kSqrtISwap:
      return embed_two(n, t0, t0 + 1, two_qubit(v));
    case Variant::kBSwap: {
      const CMatrix x = pauli_x_on(n, t0 + 1);
      return x * embed_two(n, t0, t0 + 1, two_qubit(Variant::kSwap)) * x;
    }
    default:
      break;
  }
  const std::size_t dim = std::size_t{1} << n;
  CMatrix u = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const CMatrix id = CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const CMatrix swap12 = embed_two(n, t0, t0 + 1, two_qubit(Variant::kSwap));
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t config = j >> n_targets;
    const std::size_t all_ones = (std::size_t{1} << n_controls) - 1;
    const auto jj = static_cast<Eigen::Index>(j);
    switch (v) {
      case Variant::kCISwap:
        u.col(jj) = config == 1 ? CVector(embed_two(n, t0, t0 + 1, two_qubit(Variant::kCISwap)).col(jj)) : CVector(id.col(jj));
        break;
      case Variant::kCSwapCCSdag:
      case Variant::kCkSwap:
        u.col(jj) = config == all_ones ? CVector(swap12.col(jj)) : CVector(id.col(jj));
        break;
      case Variant::kMuxSwap4T:
        u.col(jj) = config == 0 ? CVector(swap12.col(jj))
                                : CVector(embed_two(n, t0 + 2, t0 + 3, two_qubit(Variant::kSwap)).col(jj));
        break;
      case Variant::kMuxSwap3T:
        u.col(jj) = config == 0 ? CVector(swap12.col(jj))
                                : CVector(embed_two(n, t0, t0 + 2, two_qubit(Variant::kSwap)).col(jj));
        break;
      default:
        break;
    }
  }
  if (v == Variant::kCSwapCCSdag) {
    const auto last = static_cast<Eigen::Index>(dim - 1);
    u(last, last) *= -kI;
  }
  return u;
}

GateProtocol make_protocol(Variant variant, const GateParams& params) {
  const int nc = control_count(variant, params);
  const int nt = target_count(variant);
  if (variant == Variant::kCkSwap && nc < 1) throw ModelError("Ck_SWAP needs at least one control");
  if (!(params.gate_time > 0.0)) throw ModelError("gate time must be positive");
  if (!(params.omega_c > 0.0) && nc > 0) throw ModelError("control Rabi frequency must be positive");
  if (!params.v_ct_targets.empty() && static_cast<int>(params.v_ct_targets.size()) != nt) {
    throw ModelError("v_ct_targets needs one entry per target");
  }
  const bool mux = variant == Variant::kMuxSwap4T || variant == Variant::kMuxSwap3T;
  const int n = nc + nt;

  std::vector<LevelScheme> schemes;
  for (int c = 0; c < nc; ++c) schemes.push_back(mux ? mux_control_scheme(params.tau) : three_level_scheme(params.tau));
  for (int t = 0; t < nt; ++t) schemes.push_back(three_level_scheme(params.tau));

  HamiltonianSpec base;
  base.basis = build_basis(schemes);
  base.frame.resize(n);
  for (int c = 0; c < nc; ++c) base.frame[c].assign(schemes[c].size(), 0.0);
  for (int t = 0; t < nt; ++t) base.frame[nc + t] = standard_target_frame(params.delta, schemes[nc + t]);

  const int r = 2;  // target Rydberg level
  const auto groups = blockade_groups(variant);
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) base.interactions.add(nc + g[i], r, nc + g[j], r, params.v_tt);
    }
  }
  if (mux) {
    const int rp = schemes[0].level("rP");
    const int rd = schemes[0].level("rD");
    if (variant == Variant::kMuxSwap4T) {
      for (int t : {2, 3}) base.interactions.add(0, rp, nc + t, r, params.v_block);
      for (int t : {0, 1}) base.interactions.add(0, rd, nc + t, r, params.v_block);
    } else {
      base.interactions.add(0, rp, nc + 2, r, params.v_block);
      base.interactions.add(0, rd, nc + 1, r, params.v_block);
    }
  } else if (nc > 0) {
    for (int c = 0; c < nc; ++c) {
      for (int t = 0; t < nt; ++t) {
        const double v = params.v_ct_targets.empty() ? params.v_ct : params.v_ct_targets[t];
        base.interactions.add(c, r, nc + t, r, v);
      }
      for (int c2 = c + 1; c2 < nc; ++c2) base.interactions.add(c, r, c2, r, params.v_cc.value_or(params.v_ct));
    }
  }
  for (const auto& e : params.extra_interactions) base.interactions.add(e.atom_i, e.level_a, e.atom_j, e.level_b, e.shift);

  GateProtocol proto;
  proto.variant = variant;
  proto.params = params;
  proto.n_controls = nc;
  proto.n_atoms = n;
  proto.flank_x = variant == Variant::kBSwap;
  proto.phase_adjust = params.phase_adjust.value_or(default_phase_adjust(variant, nc, nt));
  proto.ideal = ideal_unitary(variant, nc, nt);

  double t = 0.0;
  const double t_pi = nc > 0 ? kPi / params.omega_c : 0.0;
  auto control_stage = [&](int c, const std::string& name) {
    Stage s{name, t, t_pi, base};
    auto add = [&](int lower, int upper) {
      DriveTerm d;
      d.atom = c;
      d.lower = lower;
      d.upper = upper;
      d.envelope = Envelope::square(params.omega_c, t, t + t_pi);
      d.doppler_sensitive = true;
      d.family = DriveFamily::kControl;
      s.spec.drives.push_back(d);
    };
    if (mux) {
      add(schemes[c].logical(0), schemes[c].level("rP"));
      add(schemes[c].logical(1), schemes[c].level("rD"));
    } else {
      add(schemes[c].logical(0), r);
    }
    proto.plan.stages.push_back(std::move(s));
    t += t_pi;
  };

  for (int c = 0; c < nc; ++c) control_stage(c, "control_excite_" + std::to_string(c));

  Stage target{"targets", t, params.gate_time, base};
  const double t_end = t + params.gate_time;
  for (const auto& g : groups) {
    for (int ti : g) {
      const int atom = nc + ti;
      std::vector<int> inhibitors;
      if (params.blockade == BlockadeModel::kProjected) {
        for (int tj : g) {
          if (tj != ti) inhibitors.push_back(nc + tj);
        }
      }
      DriveTerm mw;
      mw.atom = atom;
      mw.lower = 0;
      mw.upper = 1;
      mw.envelope = Envelope::truncated_gaussian(params.omega1_max, t, t_end, params.sigma_ratio * params.gate_time);
      mw.family = DriveFamily::kMicrowave;
      mw.inhibitors = inhibitors;
      target.spec.drives.push_back(mw);
      DriveTerm ryd;
      ryd.atom = atom;
      ryd.lower = 1;
      ryd.upper = r;
      ryd.envelope = Envelope::square(params.omega2, t, t_end);
      ryd.doppler_sensitive = true;
      ryd.family = DriveFamily::kRydberg;
      ryd.inhibitors = inhibitors;
      target.spec.drives.push_back(ryd);
    }
  }
  proto.plan.stages.push_back(std::move(target));
  t = t_end;

  for (int c = nc - 1; c >= 0; --c) control_stage(c, "control_retrieve_" + std::to_string(c));
  proto.plan.validate();
  return proto;
}

CMatrix phase_adjust_matrix(int n_atoms, const std::vector<PhaseAdjust>& adjust) {
  const std::size_t dim = std::size_t{1} << n_atoms;
  CMatrix r = CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    double phi = 0.0;
    for (const auto& a : adjust) {
      if (a.atom < 0 || a.atom >= n_atoms) throw ModelError("phase adjustment on unknown atom");
      if (bit_of(i, a.atom, n_atoms)) phi += a.phi;
    }
    r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::exp(kI * phi);
  }
  return r;
}

CMatrix extract_gate(const GateProtocol& protocol, const CMatrix& final_state) {
  const auto& spec = protocol.plan.stages.front().spec;
  const auto& basis = spec.basis;
  const double total = protocol.plan.total_duration();
  const auto ncomp = static_cast<Eigen::Index>(basis.comp_indices.size());
  CMatrix u(ncomp, ncomp);
  for (Eigen::Index i = 0; i < ncomp; ++i) {
    const std::size_t idx = basis.comp_indices[static_cast<std::size_t>(i)];
    double energy = 0.0;
    for (int a = 0; a < basis.atoms(); ++a) energy += spec.frame[a][basis.level_of(idx, a)];
    const cplx frame = std::exp(kI * energy * total);
    for (Eigen::Index j = 0; j < ncomp; ++j) u(i, j) = frame * final_state(static_cast<Eigen::Index>(idx), j);
  }
  if (protocol.params.convention == PhaseConvention::kPositiveEnergy) u = u.conjugate().eval();
  return u;
}

double process_fidelity(const CMatrix& u, const CMatrix& ideal) {
  if (u.rows() != ideal.rows() || u.cols() != ideal.cols() || u.rows() != u.cols()) {
    throw ModelError("process fidelity needs square matrices of equal dimension");
  }
  const CMatrix m = ideal.adjoint() * u;
  const double n = static_cast<double>(u.rows());
  const double f = ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / (n * (n + 1.0));
  return std::clamp(f, 0.0, 1.0);
}

double rotation_fidelity(const CMatrix& u, const CMatrix& ideal) {
  CMatrix v(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double mod = std::abs(u(i, j));
      const double ideal_mod = std::abs(ideal(i, j));
      v(i, j) = ideal_mod > 0.0 ? mod * ideal(i, j) / ideal_mod : cplx(mod);
    }
  }
  return process_fidelity(v, ideal);
}

double phase_optimized_fidelity(const CMatrix& u, const CMatrix& ideal, int n_atoms, std::vector<double>* phases,
                                const std::vector<int>& atoms) {
  std::vector<int> free = atoms;
  if (free.empty()) {
    for (int a = 0; a < n_atoms; ++a) free.push_back(a);
  }
  auto objective = [&](const std::vector<double>& x) {
    std::vector<PhaseAdjust> adj;
    for (std::size_t k = 0; k < free.size(); ++k) adj.push_back({free[k], x[k]});
    return -process_fidelity(phase_adjust_matrix(n_atoms, adj) * u, ideal);
  };
  NelderMeadOptions opt;
  opt.max_evaluations = 400 * static_cast<int>(free.size());
  opt.initial_step = 0.3;
  opt.x_tolerance = 1e-10;
  double best = -objective(std::vector<double>(free.size(), 0.0));
  std::vector<double> best_x(free.size(), 0.0);
  for (double start : {0.0, 0.5 * kPi, -0.5 * kPi, kPi}) {
    auto res = nelder_mead(objective, std::vector<double>(free.size(), start), {}, {}, opt);
    // Polish from the best point with a small simplex.
    NelderMeadOptions fine = opt;
    fine.initial_step = 0.01;
    res = nelder_mead(objective, res.x, {}, {}, fine);
    if (-res.value > best) {
      best = -res.value;
      best_x = res.x;
    }
  }
  if (phases != nullptr) {
    phases->assign(n_atoms, 0.0);
    for (std::size_t k = 0; k < free.size(); ++k) (*phases)[free[k]] = wrap_phase(best_x[k]);
  }
  return best;
}

GateReport run_gate(const GateProtocol& protocol, const NoiseRealization* noise, const RunOptions& options) {
  const auto& basis = protocol.plan.stages.front().spec.basis;
  const auto ncomp = static_cast<Eigen::Index>(basis.comp_indices.size());
  CMatrix inputs = CMatrix::Zero(static_cast<Eigen::Index>(basis.dim), ncomp);
  for (Eigen::Index j = 0; j < ncomp; ++j) inputs(static_cast<Eigen::Index>(basis.comp_indices[j]), j) = 1.0;

  StagePlan coherent = protocol.plan;
  if (options.policy) coherent.policy = *options.policy;
  for (auto& s : coherent.stages) s.spec.decay = false;

  const CMatrix adjust = phase_adjust_matrix(protocol.n_atoms, protocol.phase_adjust);
  const CMatrix flank = protocol.flank_x ? pauli_x_on(protocol.n_atoms, protocol.n_atoms - 1)
                                         : CMatrix::Identity(ncomp, ncomp);
  auto realize = [&](const CMatrix& final_state) -> CMatrix {
    return flank * adjust * extract_gate(protocol, final_state) * flank;
  };

  GateReport rep;
  const PropagationResult clean = propagate(coherent, inputs, noise);
  rep.u_gate = realize(clean.final_state);
  rep.step_scale = clean.step_scale;
  rep.fidelity = process_fidelity(rep.u_gate, protocol.ideal);
  rep.fidelity_with_loss = rep.fidelity;
  std::vector<double> physical_loss(static_cast<std::size_t>(ncomp), 0.0);
  rep.rydberg_time = clean.rydberg_integral;

  if (options.with_loss) {
    StagePlan lossy = protocol.plan;
    if (options.policy) lossy.policy = *options.policy;
    const PropagationResult decayed = propagate(lossy, inputs, noise);
    rep.u_lossy = realize(decayed.final_state);
    rep.fidelity_with_loss = process_fidelity(rep.u_lossy, protocol.ideal);
    physical_loss = decayed.norm_loss;
    rep.rydberg_time = decayed.rydberg_integral;
  }

  // Logical input j enters the hardware as flank * j.
  rep.loss.assign(static_cast<std::size_t>(ncomp), 0.0);
  std::vector<double> exposure(static_cast<std::size_t>(ncomp), 0.0);
  for (Eigen::Index j = 0; j < ncomp; ++j) {
    Eigen::Index phys = j;
    flank.col(j).cwiseAbs().maxCoeff(&phys);
    rep.loss[static_cast<std::size_t>(j)] = std::max(0.0, physical_loss[static_cast<std::size_t>(phys)]);
    exposure[static_cast<std::size_t>(j)] = rep.rydberg_time[static_cast<std::size_t>(phys)];
  }
  rep.rydberg_time = exposure;
  rep.loss_matrix = CMatrix::Zero(ncomp, ncomp);
  for (Eigen::Index j = 0; j < ncomp; ++j) {
    for (Eigen::Index i = 0; i < ncomp; ++i) {
      if (std::abs(protocol.ideal(i, j)) > 1e-9) rep.loss_matrix(i, j) = rep.loss[static_cast<std::size_t>(j)];
    }
  }
  double sum_loss = 0.0;
  double sum_time = 0.0;
  for (Eigen::Index j = 0; j < ncomp; ++j) {
    sum_loss += rep.loss[static_cast<std::size_t>(j)];
    sum_time += rep.rydberg_time[static_cast<std::size_t>(j)];
  }
  rep.mean_loss = sum_loss / static_cast<double>(ncomp);
  rep.t_bar_r = sum_time / static_cast<double>(ncomp);

  if (options.phase_optimized) {
    rep.phase_optimized_fidelity =
        phase_optimized_fidelity(rep.u_gate, protocol.ideal, protocol.n_atoms, &rep.phase_optimal);
  }
  return rep;
}

double rydberg_exposure(const GateReport& report) { return report.t_bar_r; }

std::vector<ConditionalFidelity> conditional_fidelities(const GateProtocol& protocol, const GateReport& report) {
  const int nc = protocol.n_controls;
  const int nt = protocol.n_atoms - nc;
  const auto block = static_cast<Eigen::Index>(std::size_t{1} << nt);
  std::vector<ConditionalFidelity> out;
  for (int c = 0; c < (1 << nc); ++c) {
    const Eigen::Index off = c * block;
    const CMatrix u = report.u_gate.block(off, off, block, block);
    const CMatrix ideal = protocol.ideal.block(off, off, block, block);
    ConditionalFidelity cf;
    cf.control_config = c;
    cf.fidelity = rotation_fidelity(u, ideal);
    cf.phase_optimized = phase_optimized_fidelity(u, ideal, nt);
    double transfer = 0.0;
    for (Eigen::Index j = 0; j < block; ++j) {
      for (Eigen::Index i = 0; i < block; ++i) {
        if (std::abs(ideal(i, j)) > 1e-9) transfer += std::norm(u(i, j)) * std::norm(ideal(i, j));
      }
    }
    cf.transfer = transfer / static_cast<double>(block);
    out.push_back(cf);
  }
  return out;
}

double phase_pi(cplx z) { return wrap_phase(std::arg(z)) / kPi; }

}  // namespace rydswap
