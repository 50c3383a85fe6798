// Monte Carlo Doppler and intensity noise.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rydswap/gates.hpp"

namespace rydswap {

struct DopplerSpec {
  double temperature = 0.0;          // K
  double mass = 2.2069e-25;          // kg (133Cs)
  double lambda1 = 459.6e-9;         // m
  double lambda2 = 1040e-9;          // m
  bool counter_propagating = true;
};

struct IntensitySpec {
  double microwave_width = 0.0;  // relative Gaussian width of Omega1
  double rydberg_width = 0.0;    // relative Gaussian width of Omega2
  double update_interval = 0.01; // us
};

struct NoiseSpec {
  DopplerSpec doppler;
  IntensitySpec intensity;
  int n_shots = 40;
  std::uint64_t seed = 1;

  void validate() const;
};

// Counter-based generator: output k of stream (seed, stream) is a SplitMix64
// finalizer of a key derived from all three, so every shot is reproducible on
// its own.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// sigma_delta = k_eff * sqrt(k_B T / M), rad/us.
double doppler_sigma(const DopplerSpec& spec);

// Realization for shot `shot` covering [0, duration].
NoiseRealization sample_realization(const NoiseSpec& spec, int n_atoms, double duration, int shot);

struct MonteCarloResult {
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;       // sample standard deviation over shots
  std::vector<double> fidelities;  // per shot
  std::vector<double> doppler_rms; // per shot, rad/us over atoms
};

MonteCarloResult monte_carlo_fidelity(const GateProtocol& protocol, const NoiseSpec& spec, int jobs = 0);

}  // namespace rydswap
