#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rydswap/gates.hpp"

using namespace rydswap;

namespace {

StagePlan single_atom_plan(const std::vector<DriveTerm>& drives, double duration, double delta, bool decay) {
  StagePlan plan;
  Stage st;
  st.name = "drive";
  st.duration = duration;
  const auto s = three_level_scheme(400.0);
  st.spec.basis = build_basis({s});
  st.spec.frame = {standard_target_frame(delta, s)};
  st.spec.drives = drives;
  st.spec.decay = decay;
  plan.stages.push_back(st);
  return plan;
}

DriveTerm drive(int lower, int upper, Envelope env) {
  DriveTerm d;
  d.lower = lower;
  d.upper = upper;
  d.envelope = env;
  return d;
}

CMatrix comp_inputs(const GateProtocol& p) {
  const auto& basis = p.plan.stages.front().spec.basis;
  CMatrix psi = CMatrix::Zero(static_cast<Eigen::Index>(basis.dim), static_cast<Eigen::Index>(basis.comp_indices.size()));
  for (std::size_t k = 0; k < basis.comp_indices.size(); ++k) psi(basis.comp_indices[k], k) = 1.0;
  return psi;
}

}  // namespace

TEST(EvolveStep, DiagonalPhases) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = -2.5;
  h(2, 2) = 0.3;
  const CVector psi = CVector::Ones(3);
  const CVector out = evolve_step(h, 0.7, psi);
  for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(out(i) - std::exp(-kI * h(i, i).real() * 0.7)), 1e-14);
}

TEST(EvolveStep, DecayFactor) {
  CMatrix h = CMatrix::Zero(2, 2);
  const double gamma = 0.8;
  h(1, 1) = cplx(0.0, -gamma / 2.0);
  const CVector out = evolve_step(h, 0.5, CVector::Ones(2));
  EXPECT_NEAR(out(0).real(), 1.0, 1e-15);
  EXPECT_NEAR(out(1).real(), std::exp(-gamma * 0.5 / 2.0), 1e-14);
}

TEST(EvolveStep, RandomHermitianUnitary) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = cplx(g(rng), g(rng));
    const CMatrix h = 10.0 * (a + a.adjoint());
    const CMatrix u = expm_minus_i(h, 0.37);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(4, 4)).norm(), 1e-10);
  }
}

TEST(Propagate, ZeroHamiltonianIsIdentity) {
  auto plan = single_atom_plan({}, 3.0, 0.0, false);
  CVector psi(3);
  psi << 0.6, cplx(0.0, 0.8), 0.0;
  const auto res = propagate(plan, psi);
  EXPECT_LT((res.final_state.col(0) - psi).norm(), 1e-15);
}

TEST(Propagate, RabiPiPulse) {
  const double omega = kTwoPi * 5.0;
  auto plan = single_atom_plan({drive(0, 1, Envelope::square(omega, 0.0, kPi / omega))}, kPi / omega, 0.0, true);
  CVector psi = CVector::Zero(3);
  psi(0) = 1.0;
  const auto res = propagate(plan, psi);
  EXPECT_LT(std::abs(res.final_state(1, 0) - cplx(0.0, -1.0)), 1e-12);
  EXPECT_LT(std::abs(res.final_state(0, 0)), 1e-12);
}

TEST(Propagate, DecayOnlySurvival) {
  auto plan = single_atom_plan({}, 4.7259, 0.0, true);
  CVector psi = CVector::Zero(3);
  psi(2) = 1.0;
  const auto res = propagate(plan, psi);
  EXPECT_NEAR(res.final_state.col(0).squaredNorm(), std::exp(-4.7259 / 400.0), 1e-12);
  EXPECT_NEAR(res.final_state.col(0).squaredNorm(), 0.98825, 1e-5);
  EXPECT_NEAR(res.norm_loss[0], 1.0 - std::exp(-4.7259 / 400.0), 1e-12);
  EXPECT_NEAR(res.rydberg_integral[0], 400.0 * (1.0 - std::exp(-4.7259 / 400.0)), 1e-6);
}

TEST(Propagate, NormAndRydbergBounds) {
  auto p = make_protocol(Variant::kCSwapCCSdag, table1_params(Variant::kCSwapCCSdag));
  p.plan.policy.record_trajectory = true;
  const auto res = propagate(p.plan, comp_inputs(p));
  const double total = p.plan.total_duration();
  for (std::size_t j = 0; j < res.norm_loss.size(); ++j) {
    EXPECT_GE(res.norm_loss[j], 0.0);
    EXPECT_LE(res.norm_loss[j], 1.0);
    EXPECT_GE(res.rydberg_integral[j], 0.0);
    EXPECT_LE(res.rydberg_integral[j], total);
    for (std::size_t k = 1; k < res.norm.size(); ++k) EXPECT_LE(res.norm[k][j], res.norm[k - 1][j] + 1e-12);
  }
}

TEST(Propagate, NormConservedWithoutDecay) {
  for (Variant v : {Variant::kSwap, Variant::kCSwapCCSdag, Variant::kMuxSwap4T}) {
    auto params = table1_params(v);
    params.tau = 0.0;
    const auto p = make_protocol(v, params);
    const auto res = propagate(p.plan, comp_inputs(p));
    for (double loss : res.norm_loss) EXPECT_LT(std::abs(loss), 1e-10) << variant_name(v);
  }
}

TEST(Propagate, FactorizedMatchesDense) {
  const auto p = make_protocol(Variant::kCISwap, table1_params(Variant::kCISwap));
  const CMatrix psi = comp_inputs(p);
  const auto fact = propagate(p.plan, psi);
  const CMatrix dense = propagate_dense(p.plan, psi);
  EXPECT_LT((fact.final_state - dense).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Propagate, MatchesRungeKutta) {
  auto params = table1_params(Variant::kSwap);
  const auto p = make_protocol(Variant::kSwap, params);
  const CMatrix psi = comp_inputs(p);
  StagePlan fine = p.plan;
  fine.policy.max_step = 1e-4;
  const auto expo = propagate(fine, psi);
  const CMatrix rk = propagate_rk4(p.plan, psi, 8000000);
  EXPECT_LT((expo.final_state - rk).cwiseAbs().maxCoeff(), 5e-7);
}

TEST(Propagate, StepHalvingConverges) {
  auto p = make_protocol(Variant::kSwap, table1_params(Variant::kSwap));
  p.plan.policy.convergence_target = 1e-7;
  p.plan.policy.max_halvings = 6;
  const auto res = propagate(p.plan, comp_inputs(p));
  EXPECT_LT(res.refinement_change, 1e-7);
  EXPECT_LT(res.step_scale, 1.0);
}

TEST(Propagate, SwapAmplitude) {
  const auto p = make_protocol(Variant::kSwap, table1_params(Variant::kSwap));
  const auto res = propagate(p.plan, comp_inputs(p));
  const CMatrix u = extract_gate(p, res.final_state);
  EXPECT_NEAR(std::abs(u(2, 1)), 0.9962, 0.002);
}

TEST(Propagate, NonFiniteDetected) {
  auto plan = single_atom_plan({drive(0, 1, Envelope::square(std::numeric_limits<double>::infinity(), 0.0, 1.0))},
                               1.0, 0.0, false);
  CVector psi = CVector::Zero(3);
  psi(0) = 1.0;
  EXPECT_THROW(propagate(plan, psi), std::exception);
}

TEST(StagePlan, Validation) {
  auto plan = single_atom_plan({}, 1.0, 0.0, false);
  plan.stages[0].duration = 0.0;
  EXPECT_THROW(propagate(plan, CVector(CVector::Unit(3, 0))), ModelError);
  plan = single_atom_plan({}, 1.0, 0.0, false);
  Stage second = plan.stages[0];
  second.t_begin = 2.0;
  plan.stages.push_back(second);
  EXPECT_THROW(propagate(plan, CVector(CVector::Unit(3, 0))), ModelError);
  plan.stages.pop_back();
  EXPECT_THROW(propagate(plan, CVector(CVector::Unit(9, 0))), ModelError);
}

TEST(StagePlan, DefaultStep) {
  auto plan = single_atom_plan({drive(0, 2, Envelope::truncated_gaussian(1.0, 0.0, 4.0, 1.0))}, 4.0, 0.0, false);
  EXPECT_DOUBLE_EQ(default_step(plan.stages[0]), 1.0 / 400.0);
  plan = single_atom_plan({}, 4.0, 0.0, false);
  EXPECT_DOUBLE_EQ(default_step(plan.stages[0]), 4.0 / 200.0);
}
