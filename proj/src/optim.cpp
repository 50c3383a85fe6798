#include "rydswap/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rydswap {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& lower,
                             const std::vector<double>& upper, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  const bool bounded = !lower.empty();
  auto clamp = [&](std::vector<double> x) {
    if (bounded) {
      for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
    return x;
  };

  NelderMeadResult res;
  x0 = clamp(x0);
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++res.evaluations;
    const double val = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    const double best = res.trace.empty() ? val : std::min(res.trace.back(), val);
    res.trace.push_back(best);
    return val;
  };

  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> values{eval(x0)};
  if (n == 0) {
    res.x = x0;
    res.value = values[0];
    res.converged = true;
    return res;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    double step = options.initial_step * (bounded ? (upper[i] - lower[i]) : std::max(1.0, std::abs(x0[i])));
    if (step == 0.0) step = options.initial_step;
    if (bounded && x[i] + step > upper[i]) step = -step;
    x[i] += step;
    x = clamp(x);
    simplex.push_back(x);
    values.push_back(eval(x));
  }

  std::vector<std::size_t> order(n + 1);
  while (res.evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
    }
    if (std::abs(values[worst] - values[best]) < options.f_tolerance && spread < options.x_tolerance) {
      res.converged = true;
      break;
    }
    if (spread < options.x_tolerance) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }
    auto along = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
      return clamp(x);
    };

    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      simplex[i] = clamp(simplex[i]);
      values[i] = eval(simplex[i]);
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  res.x = simplex[static_cast<std::size_t>(it - values.begin())];
  res.value = *it;
  return res;
}

}  // namespace rydswap
