#include <gtest/gtest.h>

#include <cmath>

#include "rydswap/sweep.hpp"

using namespace rydswap;

TEST(Params, GetSetRoundTrip) {
  GateParams p = table1_params(Variant::kCSwapCCSdag);
  p.v_ct_targets = {1.0, 2.0};
  for (const char* name : {"omega1_max", "omega2", "delta", "v_tt", "v_ct", "v_cc", "v_block", "gate_time",
                           "sigma_ratio", "omega_c", "tau"}) {
    set_param(p, name, 1.5);
    EXPECT_EQ(get_param(p, name), 1.5) << name;
  }
  EXPECT_TRUE(p.v_ct_targets.empty());
  EXPECT_THROW(get_param(p, "omega3"), ModelError);
  EXPECT_THROW(set_param(p, "delta", std::nan("")), ModelError);
}

TEST(Metric, NamesAndCosts) {
  for (Metric m : {Metric::kFidelity, Metric::kRotationFidelity, Metric::kInfidelityWithLoss,
                   Metric::kRefitFidelity, Metric::kRefitInfidelityWithLoss}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  EXPECT_THROW(parse_metric("bogus"), ModelError);
  PointResult r;
  r.fidelity = 0.9;
  r.rotation_fidelity = 0.95;
  r.fidelity_with_loss = 0.8;
  EXPECT_NEAR(metric_cost(r, Metric::kFidelity), 0.1, 1e-15);
  EXPECT_NEAR(metric_value(r, Metric::kFidelity), 0.9, 1e-15);
  EXPECT_NEAR(metric_value(r, Metric::kInfidelityWithLoss), 0.2, 1e-15);
  r.ok = false;
  EXPECT_TRUE(std::isinf(metric_cost(r, Metric::kFidelity)));
}

TEST(Scan, SinglePointEqualsRunGate) {
  ScanSpec s;
  s.variant = Variant::kSwap;
  s.base = table1_params(Variant::kSwap);
  s.parameter = "gate_time";
  s.values = {s.base.gate_time};
  const auto rows = scan(s);
  ASSERT_EQ(rows.size(), 1u);
  const auto r = run_gate(make_protocol(Variant::kSwap, s.base));
  EXPECT_EQ(rows[0].point.fidelity, r.fidelity);
  EXPECT_EQ(rows[0].metric, r.fidelity);
  EXPECT_EQ(rows[0].point.fidelity_with_loss, r.fidelity_with_loss);
}

TEST(Scan, DeterministicAndRotationDominates) {
  ScanSpec s;
  s.variant = Variant::kSwap;
  s.base = table1_params(Variant::kSwap);
  s.parameter = "omega2";
  for (double f : {0.5, 1.0, 1.5, 2.0}) s.values.push_back(f * s.base.omega2);
  s.jobs = 2;
  const auto a = scan(s);
  s.jobs = 1;
  const auto b = scan(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].metric, b[k].metric);
    EXPECT_EQ(a[k].point.fidelity_with_loss, b[k].point.fidelity_with_loss);
    EXPECT_GE(a[k].point.rotation_fidelity, a[k].point.fidelity - 1e-9);
  }
}

TEST(Scan, Errors) {
  ScanSpec s;
  s.base = table1_params(Variant::kSwap);
  s.parameter = "delta";
  EXPECT_THROW(scan(s), ModelError);
  s.values = {1.0};
  s.parameter = "nope";
  EXPECT_THROW(scan(s), ModelError);
}

TEST(Scan, FailedPointIsFlagged) {
  ScanSpec s;
  s.base = table1_params(Variant::kSwap);
  s.parameter = "gate_time";
  s.values = {-1.0, s.base.gate_time};
  const auto rows = scan(s);
  EXPECT_FALSE(rows[0].point.ok);
  EXPECT_FALSE(rows[0].point.error.empty());
  EXPECT_TRUE(rows[1].point.ok);
}

TEST(Optimize, EmptyFreeReturnsBase) {
  OptimizeSpec o;
  o.base = table1_params(Variant::kSwap);
  const auto r = optimize(o);
  EXPECT_EQ(r.cost, r.base_cost);
  EXPECT_EQ(r.params.delta, o.base.delta);
  EXPECT_EQ(r.evaluations, 1);
}

TEST(Optimize, RecoversPerturbedSwap) {
  OptimizeSpec o;
  o.base = table1_params(Variant::kSwap);
  const GateParams ref = o.base;
  o.metric = Metric::kRefitFidelity;
  o.base.omega2 *= 1.05;
  o.base.delta *= 1.05;
  o.base.gate_time *= 1.05;
  o.free = {{"omega2", 0.85 * ref.omega2, 1.15 * ref.omega2},
            {"delta", 0.85 * ref.delta, 1.15 * ref.delta},
            {"gate_time", 0.85 * ref.gate_time, 1.15 * ref.gate_time}};
  o.budget = 200;
  const auto r = optimize(o);
  EXPECT_LE(r.cost, r.base_cost);
  EXPECT_GE(1.0 - r.cost, 0.995);
  EXPECT_LE(r.evaluations, 201);
}

TEST(Optimize, MonotoneTraceFromDetunedSeed) {
  OptimizeSpec o;
  o.base = table1_params(Variant::kSwap);
  o.base.delta *= 1.2;
  o.free = {{"delta", 0.7 * o.base.delta, 1.1 * o.base.delta}};
  o.budget = 25;
  const auto r = optimize(o);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front(), r.base_cost);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
  EXPECT_LE(r.cost, r.base_cost);
  EXPECT_EQ(r.cost, r.trace.back());
}

TEST(Optimize, Errors) {
  OptimizeSpec o;
  o.base = table1_params(Variant::kSwap);
  o.free = {{"delta", 2.0, 1.0}};
  EXPECT_THROW(optimize(o), ModelError);
  o.free = {{"delta", 1.0, 2.0}};
  o.budget = 0;
  EXPECT_THROW(optimize(o), ModelError);
}

TEST(C6, Arithmetic) {
  EXPECT_NEAR(c6_shift(-80.0, 10.0, false), -80.0, 1e-12);
  EXPECT_NEAR(c6_shift(-80.0, 10.0, true), -kTwoPi * 80.0, 1e-10);
  EXPECT_NEAR(c6_shift(-80.0, 5.0, false) / c6_shift(-80.0, 10.0, false), 64.0, 1e-12);
  EXPECT_THROW(c6_shift(-80.0, 0.0), ModelError);
}

TEST(Distance, DeepBlockadeMatchesTableRegime) {
  DistanceSpec d;
  d.base = table1_params(Variant::kCSwapCCSdag);
  d.radii = {3.5};
  d.free = {{"delta", 0.9, 1.1}, {"gate_time", 0.9, 1.1}};
  d.budget = 15;
  const auto rows = distance_scan(d);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_GE(std::abs(rows[0].v_ct), kTwoPi * 20000.0);
  EXPECT_LE(rows[0].infidelity, rows[0].base_infidelity);
  EXPECT_GT(rows[0].infidelity, 0.005);
  EXPECT_LT(rows[0].infidelity, 0.012);
}

TEST(Distance, WeakInteractionWorse) {
  DistanceSpec d;
  d.base = table1_params(Variant::kCSwapCCSdag);
  d.radii = {8.0, 12.0, 20.0};
  d.free = {};
  d.metric = Metric::kRotationFidelity;
  d.budget = 1;
  const auto rows = distance_scan(d);
  EXPECT_LE(rows[0].infidelity, rows[1].infidelity);
  EXPECT_LE(rows[1].infidelity, rows[2].infidelity);
}
