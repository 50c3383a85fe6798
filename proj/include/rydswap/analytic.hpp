// Effective-model quantities and calibration of the exchange time.
#pragma once

#include <Eigen/Dense>

#include "rydswap/gates.hpp"

namespace rydswap {

// Reduced model on {|01>, |10>, |1r-bar>}:
//   H = A[(|01>+|10>)<1r-bar| + h.c.] + B|1r-bar><1r-bar| + C(|01><01| + |10><10|).
struct EffectiveParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double omega_eff = 0.0;  // A^2 / (B - C)
  double lambda0 = 0.0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  Eigen::Vector3d eigvec_minus;
  Eigen::Vector3d eigvec_plus;
};

EffectiveParams effective_params(double omega1, double omega2, double delta, double v);
Eigen::Matrix3d effective_hamiltonian(const EffectiveParams& p);
// Distance of the closest symmetric-branch eigenvalue to lambda0.
double degeneracy_gap(const EffectiveParams& p);

// Dark state over {|00>, |0r>, |r0>}.
Eigen::Vector3d dark_state(double omega1, double omega2);
// Rydberg probability carried by the dark state.
double dark_rydberg_probability(double omega1, double omega2);

struct SwapTimeEstimate {
  double full = 0.0;  // integral of Omega1^2/(6 Delta) equals pi
  double half = 0.0;  // the same integral equals pi/2
};
// Envelope shape enters only through `kind` and `sigma_ratio` (sigma = ratio * T).
SwapTimeEstimate swap_time_estimate(double omega1_max, double delta, EnvelopeKind kind = EnvelopeKind::kTruncatedGaussian,
                                    double sigma_ratio = 0.25);

enum class PhaseFormula { kHalf, kPrinted };

struct PhasePrediction {
  double r_c01 = 0.0;
  double one_c01 = 0.0;
  double r_c00 = 0.0;
  double r_c11 = 0.0;
  double one_c11 = 0.0;
};
// Phases in rad wrapped to (-pi, pi].
PhasePrediction predict_phases(double omega2, double delta, double v, double t, PhaseFormula formula = PhaseFormula::kHalf);

// Phases and populations of the target stage alone with the control held in
// |r> or |1>, in the reporting phase convention.
struct StagePhases {
  PhasePrediction phase;
  double one_c00_phase = 0.0;
  double one_c00_population = 0.0;
  double r_c01_stay = 0.0;       // |<r01|U|r01>|^2
  double r_c01_transfer = 0.0;   // |<r10|U|r01>|^2
  double one_c01_transfer = 0.0; // |<110|U|101>|^2
  double one_c00_rydberg_time = 0.0;
  double one_c00_peak_rydberg = 0.0;
};
StagePhases simulate_stage_phases(const GateParams& params);

struct CalibrationOptions {
  bool half_rotation = false;  // solve |<10|U|01>| = 1/sqrt(2) instead of maximizing
  double lower_factor = 0.9;   // bracket relative to the seed
  double upper_factor = 1.15;
  int window_samples = 8;
  double tolerance = 1e-4;     // us
};
struct CalibrationResult {
  double gate_time = 0.0;
  double objective = 0.0;
  double window = 0.0;
  int evaluations = 0;
};
// Ripple-averaged exchange amplitude |<10|U(T)|01>| of the two-target stage.
double smoothed_exchange(const GateParams& params, double t, int samples, int* evaluations = nullptr);
double exchange_ripple_period(const GateParams& params);
CalibrationResult calibrate_swap_time(const GateParams& params, double seed, const CalibrationOptions& options = {});

// Exchange frequency |Omega_eff| fitted from |01> -> |10> population with
// constant drives over `duration`.
double fitted_exchange_rate(double omega1, double omega2, double delta, double duration);

}  // namespace rydswap
