#pragma once

#include <cmath>

namespace hypolab::cutoff {

/// Standard bump exp(-1/(1-t²)) on |t| < 1, zero elsewhere.
inline double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

/// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1, built from the same exponential
/// profile as bump() (ratio of the one-sided halves).
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

/// 1 on [0, inner], 0 on [outer, ∞), smooth in between (r ≥ 0).
inline double plateau(double r, double inner, double outer) {
  return 1.0 - smooth_step((r - inner) / (outer - inner));
}

}  // namespace hypolab::cutoff
