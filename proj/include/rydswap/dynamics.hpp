// Time propagation under piecewise-smooth H(t).
#pragma once

#include <string>
#include <vector>

#include "rydswap/model.hpp"

namespace rydswap {

struct Stage {
  std::string name;
  double t_begin = 0.0;  // us, absolute
  double duration = 0.0;
  HamiltonianSpec spec;
};

struct StepPolicy {
  double max_step = 0.0;            // us; 0 selects the per-stage default
  double convergence_target = 0.0;  // max amplitude change on halving; 0 disables refinement
  int max_halvings = 4;
  bool record_trajectory = false;
};

struct StagePlan {
  std::vector<Stage> stages;
  StepPolicy policy;

  double total_duration() const;
  void validate() const;
};

struct PropagationResult {
  CMatrix final_state;                       // one column per input
  std::vector<double> norm_loss;             // per column
  std::vector<double> rydberg_integral;      // per column, us
  std::vector<double> times;                 // trajectory sample times
  std::vector<std::vector<double>> rydberg;  // [sample][column]
  std::vector<std::vector<double>> norm;     // [sample][column]
  std::vector<Eigen::MatrixXd> populations;  // [sample] dim x columns, if recorded
  double step_scale = 1.0;                   // final refinement factor applied to default steps
  double refinement_change = 0.0;            // amplitude change of the last halving
};

class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Default step for a stage: sigma/400 for Gaussian drives, duration/200 otherwise.
double default_step(const Stage& stage);

// exp(-i H dt) psi via dense matrix exponential.
CVector evolve_step(const CMatrix& h, double dt, const CVector& psi);

// Midpoint exponential propagation. Atoms without drives in a stage are
// treated as frozen labels and driven atoms are split into independent
// clusters, so each step exponentiates only small blocks.
PropagationResult propagate(const StagePlan& plan, const CMatrix& psi0,
                            const NoiseRealization* noise = nullptr);
PropagationResult propagate(const StagePlan& plan, const CVector& psi0,
                            const NoiseRealization* noise = nullptr);

// Same stepping on the full dense H(t); reference for the factorized path.
CMatrix propagate_dense(const StagePlan& plan, const CMatrix& psi0, double step_scale = 1.0,
                        const NoiseRealization* noise = nullptr);

// Classical fourth-order Runge-Kutta with a fixed number of steps per stage.
CMatrix propagate_rk4(const StagePlan& plan, const CMatrix& psi0, long steps_per_stage,
                      const NoiseRealization* noise = nullptr);

}  // namespace rydswap
