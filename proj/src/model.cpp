#include "rydswap/model.hpp"

#include <algorithm>
#include <cmath>

namespace rydswap {

Envelope Envelope::square(double amplitude, double t_start, double t_end) {
  return {EnvelopeKind::kSquare, amplitude, t_start, t_end, 0.0};
}

Envelope Envelope::truncated_gaussian(double amplitude, double t_start, double t_end, double sigma) {
  if (!(sigma > 0.0)) throw ModelError("Gaussian envelope needs sigma > 0");
  return {EnvelopeKind::kTruncatedGaussian, amplitude, t_start, t_end, sigma};
}

double envelope_value(const Envelope& env, double t) {
  switch (env.kind) {
    case EnvelopeKind::kZero:
      return 0.0;
    case EnvelopeKind::kSquare:
      return (t >= env.t_start && t < env.t_end) ? env.amplitude : 0.0;
    case EnvelopeKind::kTruncatedGaussian: {
      if (t < env.t_start || t > env.t_end) return 0.0;
      const double half = 0.5 * (env.t_end - env.t_start);
      const double mid = env.t_start + half;
      const double s2 = 2.0 * env.sigma * env.sigma;
      const double x = t - mid;
      return env.amplitude * (std::exp(-x * x / s2) - std::exp(-half * half / s2));
    }
  }
  return 0.0;
}

void InteractionGraph::add(int atom_i, int level_a, int atom_j, int level_b, double shift) {
  if (atom_i == atom_j) throw ModelError("interaction needs two distinct atoms");
  if (atom_i > atom_j) {
    std::swap(atom_i, atom_j);
    std::swap(level_a, level_b);
  }
  entries.push_back({atom_i, level_a, atom_j, level_b, shift});
}

double InteractionGraph::shift(int atom_i, int level_a, int atom_j, int level_b) const {
  if (atom_i > atom_j) {
    std::swap(atom_i, atom_j);
    std::swap(level_a, level_b);
  }
  double v = 0.0;
  for (const auto& e : entries) {
    if (e.atom_i == atom_i && e.atom_j == atom_j && e.level_a == level_a && e.level_b == level_b) {
      v += e.shift;
    }
  }
  return v;
}

double NoiseRealization::factor(DriveFamily family, double t) const {
  const std::vector<double>* f = nullptr;
  if (family == DriveFamily::kMicrowave) f = &microwave_factor;
  if (family == DriveFamily::kRydberg) f = &rydberg_factor;
  if (f == nullptr || f->empty()) return 1.0;
  long k = static_cast<long>(std::floor((t - t0) / interval));
  k = std::clamp(k, 0L, static_cast<long>(f->size()) - 1);
  return (*f)[k];
}

bool NoiseRealization::empty() const {
  const auto zero = [](double x) { return x == 0.0; };
  const auto one = [](double x) { return x == 1.0; };
  return std::all_of(doppler_shift.begin(), doppler_shift.end(), zero) &&
         std::all_of(microwave_factor.begin(), microwave_factor.end(), one) &&
         std::all_of(rydberg_factor.begin(), rydberg_factor.end(), one);
}

void HamiltonianSpec::validate() const {
  const int n = basis.atoms();
  if (static_cast<int>(frame.size()) != n) throw ModelError("frame size does not match atom count");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(frame[a].size()) != basis.schemes[a].size()) {
      throw ModelError("frame level count mismatch on atom " + std::to_string(a));
    }
  }
  for (const auto& d : drives) {
    if (d.atom < 0 || d.atom >= n) throw ModelError("drive on unknown atom");
    const int nl = basis.schemes[d.atom].size();
    if (d.lower < 0 || d.lower >= nl || d.upper < 0 || d.upper >= nl) {
      throw ModelError("drive on unknown level");
    }
    if (d.lower == d.upper) throw ModelError("drive lower and upper levels coincide");
    for (int x : d.inhibitors) {
      if (x < 0 || x >= n || x == d.atom) throw ModelError("bad drive inhibitor");
    }
  }
  for (const auto& e : interactions.entries) {
    if (e.atom_i < 0 || e.atom_j >= n) throw ModelError("interaction on unknown atom");
    if (!basis.schemes[e.atom_i].is_rydberg(e.level_a) ||
        !basis.schemes[e.atom_j].is_rydberg(e.level_b)) {
      throw ModelError("interaction between non-Rydberg levels");
    }
  }
}

std::vector<double> standard_target_frame(double delta, const LevelScheme& scheme) {
  std::vector<double> e(scheme.size(), 0.0);
  e[scheme.logical(1)] = delta;
  return e;
}

HamiltonianEvaluator::HamiltonianEvaluator(const HamiltonianSpec& spec, const NoiseRealization* noise)
    : spec_(spec), noise_(noise) {
  spec.validate();
  const int n = spec.basis.atoms();
  single_.resize(n);
  decay_.resize(n);
  for (int a = 0; a < n; ++a) {
    const auto& s = spec.basis.schemes[a];
    max_levels_ = std::max(max_levels_, s.size());
    single_[a] = spec.frame[a];
    decay_[a].assign(s.size(), 0.0);
    if (spec.decay) {
      for (int l = 0; l < s.size(); ++l) decay_[a][l] = -0.5 * s.decay_rate[l];
    }
  }
  for (const auto& d : spec.drives) single_[d.atom][d.upper] += d.detuning;
  if (noise != nullptr && !noise->doppler_shift.empty()) {
    if (static_cast<int>(noise->doppler_shift.size()) != n) {
      throw ModelError("noise realization atom count mismatch");
    }
    std::vector<std::vector<bool>> shifted(n);
    for (int a = 0; a < n; ++a) shifted[a].assign(spec.basis.schemes[a].size(), false);
    for (const auto& d : spec.drives) {
      if (!d.doppler_sensitive || shifted[d.atom][d.upper]) continue;
      shifted[d.atom][d.upper] = true;
      single_[d.atom][d.upper] += noise->doppler_shift[d.atom];
    }
  }
  const int m = max_levels_;
  pair_table_.assign(static_cast<std::size_t>(n * n * m * m), 0.0);
  for (const auto& e : spec.interactions.entries) {
    pair_table_[((e.atom_i * n + e.atom_j) * m + e.level_a) * m + e.level_b] += e.shift;
    pair_table_[((e.atom_j * n + e.atom_i) * m + e.level_b) * m + e.level_a] += e.shift;
  }
  amplitude_.assign(spec.drives.size(), 0.0);
}

double HamiltonianEvaluator::pair(int a, int la, int b, int lb) const {
  const int n = spec_.basis.atoms();
  const int m = max_levels_;
  return pair_table_[((a * n + b) * m + la) * m + lb];
}

std::vector<double> HamiltonianEvaluator::amplitudes_at(double t) const {
  std::vector<double> amp(spec_.drives.size());
  for (std::size_t k = 0; k < spec_.drives.size(); ++k) {
    const auto& d = spec_.drives[k];
    const double f = noise_ != nullptr ? noise_->factor(d.family, t) : 1.0;
    amp[k] = envelope_value(d.envelope, t) * f;
  }
  return amp;
}

void HamiltonianEvaluator::set_time(double t) { amplitude_ = amplitudes_at(t); }

CMatrix HamiltonianEvaluator::block(const std::vector<int>& atoms, std::vector<int> levels) const {
  const auto& basis = spec_.basis;
  const int n = basis.atoms();
  const int k = static_cast<int>(atoms.size());
  std::vector<bool> in_block(n, false);
  for (int a : atoms) in_block[a] = true;
  std::vector<std::size_t> stride(k, 1);
  for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * basis.schemes[atoms[i + 1]].size();
  const std::size_t dim = k == 0 ? 1 : stride[0] * basis.schemes[atoms[0]].size();
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  for (std::size_t s = 0; s < dim; ++s) {
    for (int i = 0; i < k; ++i) {
      levels[atoms[i]] = static_cast<int>((s / stride[i]) % basis.schemes[atoms[i]].size());
    }
    double re = 0.0;
    double im = 0.0;
    for (int i = 0; i < k; ++i) {
      const int a = atoms[i];
      re += single_real(a, levels[a]);
      im += decay_[a][levels[a]];
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        // Pairs inside the block counted once; block-frozen pairs always.
        if (in_block[b] && b < a) continue;
        re += pair(a, levels[a], b, levels[b]);
      }
    }
    const auto si = static_cast<Eigen::Index>(s);
    h(si, si) += cplx(re, im);
    for (std::size_t d = 0; d < spec_.drives.size(); ++d) {
      const auto& drive = spec_.drives[d];
      if (!in_block[drive.atom] || amplitude_[d] == 0.0) continue;
      if (levels[drive.atom] != drive.lower) continue;
      bool blocked = false;
      for (int x : drive.inhibitors) {
        if (basis.schemes[x].is_rydberg(levels[x])) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      int pos = 0;
      while (atoms[pos] != drive.atom) ++pos;
      const auto target = static_cast<Eigen::Index>(
          s + static_cast<std::size_t>(drive.upper - drive.lower) * stride[pos]);
      const double half = 0.5 * amplitude_[d];
      h(target, si) += half;
      h(si, target) += half;
    }
  }
  return h;
}

cplx HamiltonianEvaluator::frozen_energy(const std::vector<int>& frozen,
                                         const std::vector<int>& levels) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < frozen.size(); ++i) {
    const int a = frozen[i];
    re += single_real(a, levels[a]);
    im += decay_[a][levels[a]];
    for (std::size_t j = i + 1; j < frozen.size(); ++j) {
      re += pair(a, levels[a], frozen[j], levels[frozen[j]]);
    }
  }
  return {re, im};
}

CMatrix HamiltonianEvaluator::full() const {
  const int n = spec_.basis.atoms();
  std::vector<int> atoms(n);
  for (int a = 0; a < n; ++a) atoms[a] = a;
  return block(atoms, std::vector<int>(n, 0));
}

CMatrix assemble_hamiltonian(const HamiltonianSpec& spec, double t, const NoiseRealization* noise) {
  HamiltonianEvaluator ev(spec, noise);
  ev.set_time(t);
  return ev.full();
}

}  // namespace rydswap
