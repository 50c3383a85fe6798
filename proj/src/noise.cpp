#include "rydswap/noise.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rydswap/parallel.hpp"

namespace rydswap {

namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void NoiseSpec::validate() const {
  if (doppler.temperature < 0.0) throw ModelError("temperature must be >= 0");
  if (!(doppler.mass > 0.0)) throw ModelError("mass must be positive");
  if (!(doppler.lambda1 > 0.0) || !(doppler.lambda2 > 0.0)) throw ModelError("wavelengths must be positive");
  if (intensity.microwave_width < 0.0 || intensity.rydberg_width < 0.0) {
    throw ModelError("relative intensity widths must be >= 0");
  }
  if (!(intensity.update_interval > 0.0)) throw ModelError("update interval must be positive");
  if (n_shots < 1) throw ModelError("n_shots must be >= 1");
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix(splitmix(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

CounterRng::result_type CounterRng::operator()() { return splitmix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

double doppler_sigma(const DopplerSpec& spec) {
  const double k1 = kTwoPi / spec.lambda1;
  const double k2 = kTwoPi / spec.lambda2;
  const double k_eff = spec.counter_propagating ? std::abs(k1 - k2) : k1 + k2;  // 1/m
  const double v_rms = std::sqrt(kBoltzmann * spec.temperature / spec.mass);   // m/s
  return k_eff * v_rms * 1e-6;
}

NoiseRealization sample_realization(const NoiseSpec& spec, int n_atoms, double duration, int shot) {
  spec.validate();
  if (!(duration > 0.0)) throw ModelError("noise duration must be positive");
  CounterRng rng(spec.seed, static_cast<std::uint64_t>(shot));
  std::normal_distribution<double> normal(0.0, 1.0);
  NoiseRealization out;
  out.interval = spec.intensity.update_interval;
  out.t0 = 0.0;
  const double sigma = doppler_sigma(spec.doppler);
  out.doppler_shift.assign(static_cast<std::size_t>(n_atoms), 0.0);
  for (auto& d : out.doppler_shift) d = sigma * normal(rng);
  const auto n = static_cast<std::size_t>(std::ceil(duration / out.interval)) + 1;
  auto draw = [&](double width) {
    std::vector<double> f(n, 1.0);
    for (auto& x : f) x = std::max(0.0, 1.0 + width * normal(rng));
    return f;
  };
  out.microwave_factor = draw(spec.intensity.microwave_width);
  out.rydberg_factor = draw(spec.intensity.rydberg_width);
  return out;
}

MonteCarloResult monte_carlo_fidelity(const GateProtocol& protocol, const NoiseSpec& spec, int jobs) {
  spec.validate();
  MonteCarloResult out;
  out.fidelities.assign(static_cast<std::size_t>(spec.n_shots), 0.0);
  out.doppler_rms.assign(static_cast<std::size_t>(spec.n_shots), 0.0);
  const double duration = protocol.plan.total_duration();
  RunOptions options;
  options.with_loss = false;
  parallel_for(spec.n_shots, jobs, [&](int shot) {
    const NoiseRealization noise = sample_realization(spec, protocol.n_atoms, duration, shot);
    double ss = 0.0;
    for (double d : noise.doppler_shift) ss += d * d;
    out.doppler_rms[static_cast<std::size_t>(shot)] = std::sqrt(ss / static_cast<double>(noise.doppler_shift.size()));
    try {
      out.fidelities[static_cast<std::size_t>(shot)] = run_gate(protocol, &noise, options).fidelity;
    } catch (const std::exception& e) {
      throw PropagationError("shot " + std::to_string(shot) + " (seed " + std::to_string(spec.seed) +
                             "): " + e.what());
    }
  });
  double sum = 0.0;
  for (double f : out.fidelities) sum += f;
  out.mean_fidelity = sum / spec.n_shots;
  double var = 0.0;
  for (double f : out.fidelities) var += (f - out.mean_fidelity) * (f - out.mean_fidelity);
  out.std_fidelity = spec.n_shots > 1 ? std::sqrt(var / (spec.n_shots - 1)) : 0.0;
  return out;
}

}  // namespace rydswap
