// Derivative-free minimization (Nelder-Mead simplex with box bounds).
#pragma once

#include <functional>
#include <vector>

namespace rydswap {

struct NelderMeadOptions {
  int max_evaluations = 200;
  double initial_step = 0.05;  // fraction of the box width (or absolute if unbounded)
  double f_tolerance = 1e-10;
  double x_tolerance = 1e-9;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> trace;  // best value after each evaluation
};

// Bounds may be empty (unbounded). Points are clamped into the box.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& lower,
                             const std::vector<double>& upper, const NelderMeadOptions& options);

}  // namespace rydswap
