// Drives, envelopes, interactions and the rotating-frame Hamiltonian H(t).
#pragma once

#include <string>
#include <vector>

#include "rydswap/qcore.hpp"

namespace rydswap {

enum class EnvelopeKind { kZero, kSquare, kTruncatedGaussian };

struct Envelope {
  EnvelopeKind kind = EnvelopeKind::kZero;
  double amplitude = 0.0;  // rad/us
  double t_start = 0.0;    // us
  double t_end = 0.0;      // us
  double sigma = 0.0;      // us, Gaussian only

  static Envelope zero() { return {}; }
  static Envelope square(double amplitude, double t_start, double t_end);
  static Envelope truncated_gaussian(double amplitude, double t_start, double t_end, double sigma);
};

double envelope_value(const Envelope& env, double t);

// Drive families sharing one intensity-noise channel.
enum class DriveFamily { kMicrowave, kRydberg, kControl };

struct DriveTerm {
  int atom = 0;
  int lower = 0;
  int upper = 1;
  Envelope envelope;
  double detuning = 0.0;  // rad/us, added to the upper level while the drive is active
  bool doppler_sensitive = false;
  DriveFamily family = DriveFamily::kMicrowave;
  // Atoms whose Rydberg occupation switches this drive off (perfect blockade).
  std::vector<int> inhibitors;
};

struct InteractionEntry {
  int atom_i = 0;
  int level_a = 0;
  int atom_j = 0;
  int level_b = 0;
  double shift = 0.0;  // rad/us
};

// Pairwise shifts between Rydberg levels; stored once per unordered pair.
struct InteractionGraph {
  std::vector<InteractionEntry> entries;
  void add(int atom_i, int level_a, int atom_j, int level_b, double shift);
  double shift(int atom_i, int level_a, int atom_j, int level_b) const;
};

// Per-shot noise. Intensity factors are piecewise constant on a grid of
// `interval` starting at t0; an empty factor list means no noise.
struct NoiseRealization {
  std::vector<double> doppler_shift;  // rad/us per atom
  double interval = 0.01;
  double t0 = 0.0;
  std::vector<double> microwave_factor;
  std::vector<double> rydberg_factor;

  double factor(DriveFamily family, double t) const;
  bool empty() const;
};

struct HamiltonianSpec {
  ProductBasis basis;
  std::vector<DriveTerm> drives;
  InteractionGraph interactions;
  std::vector<std::vector<double>> frame;  // per atom, per level energy
  bool decay = true;

  void validate() const;
};

// Single-atom frame for a target: E(0)=0, E(1)=delta, E(r)=0.
std::vector<double> standard_target_frame(double delta, const LevelScheme& scheme);

// Evaluates H(t) on the full space or on blocks where some atoms are frozen.
class HamiltonianEvaluator {
 public:
  HamiltonianEvaluator(const HamiltonianSpec& spec, const NoiseRealization* noise);

  // Refreshes drive amplitudes for time t.
  void set_time(double t);
  std::vector<double> amplitudes_at(double t) const;
  void set_amplitudes(const std::vector<double>& amplitudes) { amplitude_ = amplitudes; }

  // Block over `atoms` with the remaining atoms held at `levels`. The block
  // excludes energies of atoms outside `atoms` except their interaction with
  // block atoms.
  CMatrix block(const std::vector<int>& atoms, std::vector<int> levels) const;
  // Energy of the frozen atoms alone (single-atom terms plus their mutual
  // interactions) for configuration `levels`.
  cplx frozen_energy(const std::vector<int>& frozen, const std::vector<int>& levels) const;
  CMatrix full() const;

  const HamiltonianSpec& spec() const { return spec_; }

 private:
  double single_real(int atom, int level) const { return single_[atom][level]; }
  double pair(int a, int la, int b, int lb) const;

  const HamiltonianSpec& spec_;
  const NoiseRealization* noise_;
  std::vector<std::vector<double>> single_;  // frame + detunings + Doppler
  std::vector<std::vector<double>> decay_;   // -Gamma/2 imaginary parts
  std::vector<double> pair_table_;
  int max_levels_ = 0;
  std::vector<double> amplitude_;  // current drive amplitudes
};

CMatrix assemble_hamiltonian(const HamiltonianSpec& spec, double t,
                             const NoiseRealization* noise = nullptr);

}  // namespace rydswap
