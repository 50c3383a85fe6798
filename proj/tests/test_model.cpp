#include <gtest/gtest.h>

#include <cmath>

#include "rydswap/model.hpp"

using namespace rydswap;

namespace {

HamiltonianSpec single_target(double omega2, double delta, bool decay) {
  HamiltonianSpec spec;
  const auto s = three_level_scheme(400.0);
  spec.basis = build_basis({s});
  spec.frame = {standard_target_frame(delta, s)};
  DriveTerm d;
  d.atom = 0;
  d.lower = 1;
  d.upper = 2;
  d.envelope = Envelope::square(omega2, 0.0, 1.0);
  d.family = DriveFamily::kRydberg;
  spec.drives.push_back(d);
  spec.decay = decay;
  return spec;
}

}  // namespace

TEST(Envelope, TruncatedGaussianTableValue) {
  const double t = 4.7259;
  const auto env = Envelope::truncated_gaussian(kTwoPi * 33.5, 0.0, t, t / 4.0);
  EXPECT_NEAR(envelope_value(env, t / 2.0), kTwoPi * 33.5 * (1.0 - std::exp(-2.0)), 1e-12);
  EXPECT_NEAR(envelope_value(env, t / 2.0) / kTwoPi, 28.966, 1e-3);
  EXPECT_NEAR(envelope_value(env, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(envelope_value(env, t), 0.0, 1e-12);
  EXPECT_EQ(envelope_value(env, -0.1), 0.0);
  EXPECT_EQ(envelope_value(env, t + 0.1), 0.0);
}

TEST(Envelope, Square) {
  const auto env = Envelope::square(3.0, 1.0, 2.0);
  EXPECT_EQ(envelope_value(env, 1.0), 3.0);
  EXPECT_EQ(envelope_value(env, 1.5), 3.0);
  EXPECT_EQ(envelope_value(env, 2.0), 0.0);
  EXPECT_EQ(envelope_value(env, 0.5), 0.0);
  EXPECT_EQ(envelope_value(Envelope::zero(), 0.5), 0.0);
  EXPECT_THROW(Envelope::truncated_gaussian(1.0, 0.0, 1.0, 0.0), ModelError);
}

TEST(Interaction, SymmetricLookup) {
  InteractionGraph g;
  g.add(2, 2, 0, 3, 5.0);
  EXPECT_EQ(g.shift(0, 3, 2, 2), 5.0);
  EXPECT_EQ(g.shift(2, 2, 0, 3), 5.0);
  EXPECT_EQ(g.shift(0, 2, 2, 3), 0.0);
  EXPECT_THROW(g.add(1, 2, 1, 2, 1.0), ModelError);
}

TEST(Hamiltonian, SingleTargetEntries) {
  const double omega2 = kTwoPi * 190.8;
  const double delta = kTwoPi * 999.73;
  const CMatrix h = assemble_hamiltonian(single_target(omega2, delta, true), 0.5);
  EXPECT_NEAR(std::abs(h(1, 2) - cplx(omega2 / 2.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h(2, 1) - cplx(omega2 / 2.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h(1, 1) - cplx(delta)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(h(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h(2, 2) - cplx(0.0, -0.5 / 400.0)), 0.0, 1e-15);
  const CMatrix off = assemble_hamiltonian(single_target(omega2, delta, true), 2.0);
  EXPECT_NEAR(std::abs(off(1, 2)), 0.0, 1e-15);
}

TEST(Hamiltonian, HermitianPartWithDecay) {
  HamiltonianSpec spec;
  const auto s = three_level_scheme(400.0);
  spec.basis = build_basis({s, s, s});
  spec.frame = {standard_target_frame(0.0, s), standard_target_frame(kTwoPi * 999.73, s),
                standard_target_frame(kTwoPi * 999.73, s)};
  for (int a = 0; a < 3; ++a) {
    DriveTerm d;
    d.atom = a;
    d.lower = a == 0 ? 0 : 1;
    d.upper = 2;
    d.envelope = Envelope::truncated_gaussian(kTwoPi * (30.0 + a), 0.0, 4.0, 1.0);
    spec.drives.push_back(d);
  }
  spec.interactions.add(0, 2, 1, 2, 22140.0);
  spec.interactions.add(1, 2, 2, 2, kTwoPi * 700.0);
  const CMatrix h = assemble_hamiltonian(spec, 1.3);
  const CMatrix decay_part = CMatrix((h - h.adjoint()) / 2.0);
  const CMatrix herm = h - decay_part;
  EXPECT_LT((herm - herm.adjoint()).norm(), 1e-12);
  EXPECT_LT((decay_part - CMatrix(decay_part.diagonal().asDiagonal())).norm(), 1e-15);
  for (std::size_t i = 0; i < spec.basis.dim; ++i) {
    const double gamma = -2.0 * decay_part(i, i).imag();
    int n_r = 0;
    for (int a = 0; a < 3; ++a) n_r += spec.basis.level_of(i, a) == 2 ? 1 : 0;
    EXPECT_NEAR(gamma, n_r / 400.0, 1e-15);
  }
  const std::size_t rr = index_of(spec.basis, {"0", "r", "r"});
  EXPECT_NEAR(h(rr, rr).real(), kTwoPi * 700.0, 1e-9);
}

TEST(Hamiltonian, TargetFrameBookkeeping) {
  const double delta = kTwoPi * 999.73;
  HamiltonianSpec spec;
  const auto s = three_level_scheme(400.0);
  spec.basis = build_basis({s, s});
  spec.frame = {standard_target_frame(delta, s), standard_target_frame(delta, s)};
  spec.decay = false;
  const CMatrix h = assemble_hamiltonian(spec, 0.0);
  EXPECT_NEAR(h(index_of(spec.basis, {"0", "0"}), index_of(spec.basis, {"0", "0"})).real(), 0.0, 1e-12);
  EXPECT_NEAR(h(index_of(spec.basis, {"0", "1"}), index_of(spec.basis, {"0", "1"})).real(), delta, 1e-9);
  EXPECT_NEAR(h(index_of(spec.basis, {"1", "0"}), index_of(spec.basis, {"1", "0"})).real(), delta, 1e-9);
  EXPECT_NEAR(h(index_of(spec.basis, {"1", "1"}), index_of(spec.basis, {"1", "1"})).real(), 2.0 * delta, 1e-9);
  EXPECT_NEAR(h(index_of(spec.basis, {"0", "r"}), index_of(spec.basis, {"0", "r"})).real(), 0.0, 1e-12);

  spec.frame = {standard_target_frame(0.0, s), standard_target_frame(0.0, s)};
  const CMatrix h0 = assemble_hamiltonian(spec, 0.0);
  EXPECT_LT(h0.norm(), 1e-15);
}

TEST(Hamiltonian, InhibitorSwitchesDriveOff) {
  HamiltonianSpec spec;
  const auto s = three_level_scheme(400.0);
  spec.basis = build_basis({s, s});
  spec.frame = {standard_target_frame(0.0, s), standard_target_frame(0.0, s)};
  spec.decay = false;
  DriveTerm d;
  d.atom = 1;
  d.lower = 1;
  d.upper = 2;
  d.envelope = Envelope::square(2.0, 0.0, 1.0);
  d.inhibitors = {0};
  spec.drives.push_back(d);
  const CMatrix h = assemble_hamiltonian(spec, 0.5);
  EXPECT_NEAR(h(index_of(spec.basis, {"0", "1"}), index_of(spec.basis, {"0", "r"})).real(), 1.0, 1e-15);
  EXPECT_EQ(std::abs(h(index_of(spec.basis, {"r", "1"}), index_of(spec.basis, {"r", "r"}))), 0.0);
}

TEST(Hamiltonian, ValidationErrors) {
  auto spec = single_target(1.0, 1.0, true);
  spec.drives[0].upper = 1;
  EXPECT_THROW(assemble_hamiltonian(spec, 0.0), ModelError);
  spec = single_target(1.0, 1.0, true);
  spec.drives[0].upper = 7;
  EXPECT_THROW(assemble_hamiltonian(spec, 0.0), ModelError);
  spec = single_target(1.0, 1.0, true);
  spec.frame.clear();
  EXPECT_THROW(assemble_hamiltonian(spec, 0.0), ModelError);
  HamiltonianSpec pair;
  const auto s = three_level_scheme(400.0);
  pair.basis = build_basis({s, s});
  pair.frame = {standard_target_frame(0.0, s), standard_target_frame(0.0, s)};
  pair.interactions.add(0, 1, 1, 2, 1.0);
  EXPECT_THROW(assemble_hamiltonian(pair, 0.0), ModelError);
}

TEST(Noise, FactorGrid) {
  NoiseRealization n;
  n.interval = 0.01;
  n.microwave_factor = {1.0, 0.5, 2.0};
  EXPECT_EQ(n.factor(DriveFamily::kMicrowave, 0.005), 1.0);
  EXPECT_EQ(n.factor(DriveFamily::kMicrowave, 0.015), 0.5);
  EXPECT_EQ(n.factor(DriveFamily::kMicrowave, 0.5), 2.0);
  EXPECT_EQ(n.factor(DriveFamily::kRydberg, 0.015), 1.0);
  EXPECT_EQ(n.factor(DriveFamily::kControl, 0.015), 1.0);
  EXPECT_FALSE(n.empty());
  EXPECT_TRUE(NoiseRealization{}.empty());
}
