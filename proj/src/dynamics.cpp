#include "rydswap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rydswap {

double StagePlan::total_duration() const {
  double t = 0.0;
  for (const auto& s : stages) t += s.duration;
  return t;
}

void StagePlan::validate() const {
  if (stages.empty()) throw ModelError("stage plan is empty");
  const std::size_t dim = stages.front().spec.basis.dim;
  double t = stages.front().t_begin;
  for (const auto& s : stages) {
    if (!(s.duration > 0.0)) throw ModelError("stage '" + s.name + "' has non-positive duration");
    if (s.spec.basis.dim != dim) throw ModelError("stages use different bases");
    if (std::abs(s.t_begin - t) > 1e-12 * std::max(1.0, t)) {
      throw ModelError("stage '" + s.name + "' is not contiguous");
    }
    t = s.t_begin + s.duration;
  }
}

double default_step(const Stage& stage) {
  double sigma = 0.0;
  for (const auto& d : stage.spec.drives) {
    if (d.envelope.kind == EnvelopeKind::kTruncatedGaussian) {
      sigma = sigma == 0.0 ? d.envelope.sigma : std::min(sigma, d.envelope.sigma);
    }
  }
  return sigma > 0.0 ? sigma / 400.0 : stage.duration / 200.0;
}

CVector evolve_step(const CMatrix& h, double dt, const CVector& psi) {
  return expm_minus_i(h, dt) * psi;
}

namespace {

int stage_steps(const Stage& stage, const StepPolicy& policy, double scale) {
  double dt = default_step(stage);
  if (policy.max_step > 0.0) dt = std::min(dt, policy.max_step);
  dt *= scale;
  return std::max(1, static_cast<int>(std::ceil(stage.duration / dt - 1e-9)));
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Enumerates mixed-radix offsets of `atoms` in the full basis.
std::vector<std::size_t> offsets(const ProductBasis& basis, const std::vector<int>& atoms) {
  std::vector<std::size_t> out{0};
  for (int a : atoms) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * basis.schemes[a].size());
    for (std::size_t o : out) {
      for (int l = 0; l < basis.schemes[a].size(); ++l) next.push_back(o + basis.strides[a] * l);
    }
    out = std::move(next);
  }
  return out;
}

struct Cluster {
  std::vector<int> atoms;
  std::vector<std::size_t> local;  // offsets of the cluster's own states
  std::vector<std::size_t> other;  // offsets of the remaining driven atoms
};

struct Layout {
  std::vector<int> frozen;
  std::vector<Cluster> clusters;
  std::vector<std::vector<int>> frozen_levels;
  std::vector<std::size_t> base;
  std::vector<std::size_t> driven_offsets;
};

Layout make_layout(const HamiltonianSpec& spec) {
  const auto& basis = spec.basis;
  const int n = basis.atoms();
  std::vector<bool> driven(n, false);
  for (const auto& d : spec.drives) {
    if (d.envelope.kind != EnvelopeKind::kZero && d.envelope.amplitude != 0.0) driven[d.atom] = true;
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto unite = [&](int a, int b) { parent[find_root(parent, a)] = find_root(parent, b); };
  for (const auto& d : spec.drives) {
    if (!driven[d.atom]) continue;
    for (int x : d.inhibitors) {
      if (driven[x]) unite(d.atom, x);
    }
  }
  for (const auto& e : spec.interactions.entries) {
    if (e.shift != 0.0 && driven[e.atom_i] && driven[e.atom_j]) unite(e.atom_i, e.atom_j);
  }

  Layout lay;
  std::vector<int> driven_atoms;
  for (int a = 0; a < n; ++a) (driven[a] ? driven_atoms : lay.frozen).push_back(a);
  std::vector<int> root_slot(n, -1);
  for (int a : driven_atoms) {
    const int r = find_root(parent, a);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(lay.clusters.size());
      lay.clusters.emplace_back();
    }
    lay.clusters[root_slot[r]].atoms.push_back(a);
  }
  for (auto& c : lay.clusters) {
    c.local = offsets(basis, c.atoms);
    std::vector<int> rest;
    for (int a : driven_atoms) {
      if (std::find(c.atoms.begin(), c.atoms.end(), a) == c.atoms.end()) rest.push_back(a);
    }
    c.other = offsets(basis, rest);
  }
  lay.driven_offsets = offsets(basis, driven_atoms);
  lay.base = offsets(basis, lay.frozen);
  for (std::size_t b : lay.base) {
    std::vector<int> levels(n, 0);
    for (int a : lay.frozen) levels[a] = basis.level_of(b, a);
    lay.frozen_levels.push_back(std::move(levels));
  }
  return lay;
}

void apply_fiber_op(CMatrix& psi, const CMatrix& u, std::size_t base, const Cluster& c,
                    CMatrix& gathered, CMatrix& product) {
  const auto d = static_cast<Eigen::Index>(c.local.size());
  const Eigen::Index m = psi.cols();
  gathered.resize(d, m);
  product.resize(d, m);
  for (std::size_t o : c.other) {
    const std::size_t b = base + o;
    for (Eigen::Index s = 0; s < d; ++s) {
      gathered.row(s) = psi.row(static_cast<Eigen::Index>(b + c.local[s]));
    }
    product.noalias() = u * gathered;
    for (Eigen::Index s = 0; s < d; ++s) {
      psi.row(static_cast<Eigen::Index>(b + c.local[s])) = product.row(s);
    }
  }
}

struct Sampler {
  std::vector<char> rydberg_mask;
  bool record = false;
  PropagationResult* out = nullptr;
  std::vector<double> last_pr;
  double last_t = 0.0;

  void sample(const CMatrix& psi, double t, bool first) {
    const Eigen::Index m = psi.cols();
    std::vector<double> pr(m, 0.0);
    std::vector<double> nrm(m, 0.0);
    for (Eigen::Index j = 0; j < m; ++j) {
      double p = 0.0;
      double q = 0.0;
      for (Eigen::Index i = 0; i < psi.rows(); ++i) {
        const double a = std::norm(psi(i, j));
        q += a;
        if (rydberg_mask[i]) p += a;
      }
      pr[j] = p;
      nrm[j] = q;
    }
    if (!first) {
      for (Eigen::Index j = 0; j < m; ++j) {
        out->rydberg_integral[j] += 0.5 * (t - last_t) * (pr[j] + last_pr[j]);
      }
    }
    if (record) {
      out->times.push_back(t);
      out->rydberg.push_back(pr);
      out->norm.push_back(nrm);
      out->populations.push_back(psi.cwiseAbs2());
    }
    last_pr = std::move(pr);
    last_t = t;
  }
};

void check_finite(const CMatrix& psi, const Stage& stage, double t) {
  if (!psi.allFinite()) {
    throw PropagationError("non-finite amplitudes in stage '" + stage.name + "' at t = " +
                           std::to_string(t) + " us");
  }
}

PropagationResult run_factorized(const StagePlan& plan, const CMatrix& psi0,
                                 const NoiseRealization* noise, double scale) {
  const auto& basis = plan.stages.front().spec.basis;
  PropagationResult res;
  res.final_state = psi0;
  res.step_scale = scale;
  res.rydberg_integral.assign(psi0.cols(), 0.0);
  Sampler sampler;
  sampler.record = plan.policy.record_trajectory;
  sampler.out = &res;
  sampler.rydberg_mask.resize(basis.dim);
  for (std::size_t i = 0; i < basis.dim; ++i) sampler.rydberg_mask[i] = basis.has_rydberg(i) ? 1 : 0;

  CMatrix& psi = res.final_state;
  sampler.sample(psi, plan.stages.front().t_begin, true);
  CMatrix gathered;
  CMatrix product;
  for (const auto& stage : plan.stages) {
    const Layout lay = make_layout(stage.spec);
    HamiltonianEvaluator ev(stage.spec, noise);
    const int steps = stage_steps(stage, plan.policy, scale);
    const double dt = stage.duration / steps;
    const std::size_t nf = lay.base.size();
    const std::size_t nc = lay.clusters.size();
    std::vector<cplx> frozen_phase(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      frozen_phase[f] = std::exp(-kI * dt * ev.frozen_energy(lay.frozen, lay.frozen_levels[f]));
    }
    std::vector<CMatrix> last_h(nf * nc);
    std::vector<CMatrix> last_u(nf * nc);
    for (int k = 0; k < steps; ++k) {
      const double t_mid = stage.t_begin + (k + 0.5) * dt;
      ev.set_time(t_mid);
      for (std::size_t f = 0; f < nf; ++f) {
        if (nc == 0) {
          for (std::size_t o : lay.driven_offsets) {
            psi.row(static_cast<Eigen::Index>(lay.base[f] + o)) *= frozen_phase[f];
          }
          continue;
        }
        for (std::size_t c = 0; c < nc; ++c) {
          const std::size_t slot = f * nc + c;
          CMatrix h = ev.block(lay.clusters[c].atoms, lay.frozen_levels[f]);
          if (last_h[slot].size() != h.size() || last_h[slot] != h) {
            last_u[slot] = expm_minus_i(h, dt);
            if (c == 0) last_u[slot] *= frozen_phase[f];
            last_h[slot] = std::move(h);
          }
          apply_fiber_op(psi, last_u[slot], lay.base[f], lay.clusters[c], gathered, product);
        }
      }
      const double t_end = stage.t_begin + (k + 1) * dt;
      if ((k + 1) % 100 == 0 || k + 1 == steps) check_finite(psi, stage, t_end);
      sampler.sample(psi, t_end, false);
    }
  }
  res.norm_loss.resize(psi.cols());
  for (Eigen::Index j = 0; j < psi.cols(); ++j) res.norm_loss[j] = 1.0 - psi.col(j).squaredNorm();
  return res;
}

}  // namespace

PropagationResult propagate(const StagePlan& plan, const CMatrix& psi0, const NoiseRealization* noise) {
  plan.validate();
  if (psi0.rows() != static_cast<Eigen::Index>(plan.stages.front().spec.basis.dim)) {
    throw ModelError("initial state dimension mismatch");
  }
  PropagationResult best = run_factorized(plan, psi0, noise, 1.0);
  if (plan.policy.convergence_target <= 0.0) return best;
  double scale = 1.0;
  for (int h = 0; h < plan.policy.max_halvings; ++h) {
    scale *= 0.5;
    PropagationResult finer = run_factorized(plan, psi0, noise, scale);
    const double change = (finer.final_state - best.final_state).cwiseAbs().maxCoeff();
    finer.refinement_change = change;
    best = std::move(finer);
    if (change < plan.policy.convergence_target) break;
  }
  return best;
}

PropagationResult propagate(const StagePlan& plan, const CVector& psi0, const NoiseRealization* noise) {
  return propagate(plan, CMatrix(psi0), noise);
}

CMatrix propagate_dense(const StagePlan& plan, const CMatrix& psi0, double step_scale,
                        const NoiseRealization* noise) {
  plan.validate();
  CMatrix psi = psi0;
  for (const auto& stage : plan.stages) {
    HamiltonianEvaluator ev(stage.spec, noise);
    const int steps = stage_steps(stage, plan.policy, step_scale);
    const double dt = stage.duration / steps;
    for (int k = 0; k < steps; ++k) {
      ev.set_time(stage.t_begin + (k + 0.5) * dt);
      psi = expm_minus_i(ev.full(), dt) * psi;
    }
    check_finite(psi, stage, stage.t_begin + stage.duration);
  }
  return psi;
}

CMatrix propagate_rk4(const StagePlan& plan, const CMatrix& psi0, long steps_per_stage,
                      const NoiseRealization* noise) {
  plan.validate();
  CMatrix psi = psi0;
  for (const auto& stage : plan.stages) {
    HamiltonianEvaluator ev(stage.spec, noise);
    const std::size_t nd = stage.spec.drives.size();
    ev.set_amplitudes(std::vector<double>(nd, 0.0));
    CMatrix h0 = ev.full();
    // Centering the spectrum keeps the explicit step stable.
    const double shift = h0.diagonal().real().mean();
    h0.diagonal().array() -= shift;
    std::vector<CMatrix> coupling(nd);
    for (std::size_t d = 0; d < nd; ++d) {
      std::vector<double> unit(nd, 0.0);
      unit[d] = 1.0;
      ev.set_amplitudes(unit);
      coupling[d] = ev.full() - h0;
      coupling[d].diagonal().array() -= shift;
    }
    const double dt = stage.duration / static_cast<double>(steps_per_stage);
    CMatrix h(h0.rows(), h0.cols());
    auto rhs = [&](double t, const CMatrix& y) -> CMatrix {
      const auto amp = ev.amplitudes_at(t);
      h = h0;
      for (std::size_t d = 0; d < nd; ++d) {
        if (amp[d] != 0.0) h += amp[d] * coupling[d];
      }
      return -kI * (h * y);
    };
    for (long k = 0; k < steps_per_stage; ++k) {
      const double t = stage.t_begin + k * dt;
      const CMatrix k1 = rhs(t, psi);
      const CMatrix k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
      const CMatrix k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
      const CMatrix k4 = rhs(t + dt, psi + dt * k3);
      psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    psi *= std::exp(-kI * shift * stage.duration);
  }
  return psi;
}

}  // namespace rydswap
