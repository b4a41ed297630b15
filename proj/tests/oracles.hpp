#pragma once

// Independent test oracles. These deliberately re-derive results with their
// own arithmetic instead of calling the library code they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Brute-force threshold scan: F1 of (p >= tau) recomputed from raw counts at
// every grid point; returns the smallest tau attaining the maximum.
inline double scan_threshold(const std::vector<double>& probs, const std::vector<int>& labels,
                             double step) {
  double best_tau = step;
  double best_f1 = -1.0;
  for (long k = 1; static_cast<double>(k) * step < 1.0; ++k) {
    const double tau = static_cast<double>(k) * step;
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const bool pred = probs[i] >= tau;
      if (pred && labels[i] == 1) ++tp;
      if (pred && labels[i] == 0) ++fp;
      if (!pred && labels[i] == 1) ++fn;
    }
    double f1 = 0.0;
    if (2 * tp + fp + fn > 0) {
      f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    }
    if (f1 > best_f1) {
      best_f1 = f1;
      best_tau = tau;
    }
  }
  return best_tau;
}

// Central finite difference of a scalar function with respect to one
// parameter, evaluated in place.
inline double central_diff(const std::function<double()>& loss, double& param, double h = 1e-5) {
  const double saved = param;
  param = saved + h;
  const double up = loss();
  param = saved - h;
  const double down = loss();
  param = saved;
  return (up - down) / (2.0 * h);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1e-6, std::abs(a) + std::abs(b));
}

}  // namespace oracles
