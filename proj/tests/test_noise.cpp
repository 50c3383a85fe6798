#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rydswap/noise.hpp"

using namespace rydswap;

namespace {

NoiseSpec at_temperature(double kelvin) {
  NoiseSpec s;
  s.doppler.temperature = kelvin;
  return s;
}

}  // namespace

TEST(Doppler, SigmaExamples) {
  const double s150 = doppler_sigma(at_temperature(150e-6).doppler);
  EXPECT_NEAR(s150 / kTwoPi, 0.1176, 0.0005);
  EXPECT_EQ(doppler_sigma(at_temperature(0.0).doppler), 0.0);
  EXPECT_NEAR(doppler_sigma(at_temperature(600e-6).doppler), 2.0 * s150, 1e-12);
  auto co = at_temperature(150e-6);
  co.doppler.counter_propagating = false;
  EXPECT_GT(doppler_sigma(co.doppler), s150);
}

TEST(NoiseSpec, Validation) {
  NoiseSpec s;
  s.n_shots = 0;
  EXPECT_THROW(s.validate(), ModelError);
  s = NoiseSpec{};
  s.doppler.mass = 0.0;
  EXPECT_THROW(s.validate(), ModelError);
  s = NoiseSpec{};
  s.intensity.rydberg_width = -0.1;
  EXPECT_THROW(s.validate(), ModelError);
  s = NoiseSpec{};
  s.doppler.lambda1 = 0.0;
  EXPECT_THROW(s.validate(), ModelError);
  EXPECT_NO_THROW(NoiseSpec{}.validate());
}

TEST(CounterRng, StreamsIndependentAndRepeatable) {
  CounterRng a(1, 0);
  CounterRng b(1, 0);
  CounterRng c(1, 1);
  CounterRng d(2, 0);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c() ? 1 : 0;
    same_d += x == d() ? 1 : 0;
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
}

TEST(Realization, ZeroNoiseIsIdentity) {
  const auto r = sample_realization(NoiseSpec{}, 3, 5.0, 7);
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.doppler_shift.size(), 3u);
}

TEST(Realization, Deterministic) {
  NoiseSpec s = at_temperature(150e-6);
  s.intensity.microwave_width = 0.01;
  s.intensity.rydberg_width = 0.02;
  const auto a = sample_realization(s, 3, 5.0, 4);
  const auto b = sample_realization(s, 3, 5.0, 4);
  EXPECT_EQ(a.doppler_shift, b.doppler_shift);
  EXPECT_EQ(a.microwave_factor, b.microwave_factor);
  EXPECT_EQ(a.rydberg_factor, b.rydberg_factor);
  const auto c = sample_realization(s, 3, 5.0, 5);
  EXPECT_NE(a.doppler_shift, c.doppler_shift);
  EXPECT_GE(a.microwave_factor.size(), static_cast<std::size_t>(5.0 / 0.01));
}

TEST(Realization, IntensityFactorsClippedAtZero) {
  NoiseSpec s;
  s.intensity.rydberg_width = 2.0;
  const auto r = sample_realization(s, 2, 10.0, 0);
  double lowest = 1.0;
  for (double f : r.rydberg_factor) lowest = std::min(lowest, f);
  EXPECT_EQ(lowest, 0.0);
}

TEST(Realization, DopplerSampleSpread) {
  const NoiseSpec s = at_temperature(150e-6);
  const double sigma = doppler_sigma(s.doppler);
  double sum = 0.0;
  double ss = 0.0;
  const int n = 10000;
  for (int shot = 0; shot < n; ++shot) {
    const double d = sample_realization(s, 1, 0.01, shot).doppler_shift[0];
    sum += d;
    ss += d * d;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(ss / n - mean * mean);
  EXPECT_NEAR(sd, sigma, 0.03 * sigma);
}

TEST(MonteCarlo, ZeroNoiseSingleShotEqualsRunGate) {
  const auto p = make_protocol(Variant::kSwap, table1_params(Variant::kSwap));
  NoiseSpec s;
  s.n_shots = 1;
  const auto mc = monte_carlo_fidelity(p, s, 1);
  RunOptions o;
  o.with_loss = false;
  EXPECT_EQ(mc.mean_fidelity, run_gate(p, nullptr, o).fidelity);
  EXPECT_EQ(mc.std_fidelity, 0.0);
}

TEST(MonteCarlo, SeedReproducibleAcrossJobCounts) {
  const auto p = make_protocol(Variant::kSwap, table1_params(Variant::kSwap));
  NoiseSpec s = at_temperature(150e-6);
  s.intensity.rydberg_width = 0.01;
  s.n_shots = 4;
  const auto a = monte_carlo_fidelity(p, s, 1);
  const auto b = monte_carlo_fidelity(p, s, 3);
  EXPECT_EQ(a.fidelities, b.fidelities);
  EXPECT_EQ(a.mean_fidelity, b.mean_fidelity);
  s.seed = 2;
  const auto c = monte_carlo_fidelity(p, s, 1);
  EXPECT_NE(a.fidelities, c.fidelities);
}

TEST(MonteCarlo, DopplerOnlyShiftsDrivenLevels) {
  // With both drives off the Doppler shift has nothing to act on.
  auto params = table1_params(Variant::kSwap);
  params.omega1_max = 0.0;
  params.omega2 = 0.0;
  const auto p = make_protocol(Variant::kSwap, params);
  NoiseSpec s = at_temperature(300e-6);
  s.n_shots = 3;
  const auto mc = monte_carlo_fidelity(p, s, 1);
  RunOptions o;
  o.with_loss = false;
  const double clean = run_gate(p, nullptr, o).fidelity;
  for (double f : mc.fidelities) EXPECT_NEAR(f, clean, 1e-12);
}
