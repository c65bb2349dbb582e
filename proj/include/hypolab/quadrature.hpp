#pragma once

// Small quadrature toolkit: Gauss–Legendre rules of any order and an
// adaptive Gauss–Kronrod (7/15) integrator for real or complex integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hypolab::quad {

struct Rule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule, by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[k] = -x;
    r.nodes[n - 1 - k] = x;
    r.weights[k] = w;
    r.weights[n - 1 - k] = w;
  }
  if (n == 1) {
    r.nodes[0] = 0;
    r.weights[0] = 2;
  }
  return r;
}

/// Applies a rule on [a, b].
template <class F>
auto apply_rule(const Rule& r, F&& f, double a, double b) {
  double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  using T = decltype(f(mid));
  T acc{};
  for (std::size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * f(mid + half * r.nodes[k]);
  return acc * half;
}

/// Composite rule over `panels` equal panels of [a, b].
template <class F>
auto composite(const Rule& r, F&& f, double a, double b, int panels) {
  using T = decltype(f(a));
  T acc{};
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) acc += apply_rule(r, f, a + p * h, a + (p + 1) * h);
  return acc;
}

namespace detail {

constexpr std::array<double, 8> kXk = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                       0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                       0.207784955007898468, 0.000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                       0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                       0.204432940075298892, 0.209482141084727828};
constexpr std::array<double, 4> kWg = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                       0.417959183673469388};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

// Kronrod value, |K − G| error estimate, and the roundoff floor
// (a small multiple of ∫|f| on the panel).
template <class F, class T>
void gk15(F& f, double a, double b, T& kronrod, double& err, double& floor) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T k = fc * kWk[7];
  T g = fc * kWg[3];
  double abs_sum = kWk[7] * magnitude(fc);
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXk[j];
    T f1 = f(c - dx), f2 = f(c + dx);
    k += kWk[j] * (f1 + f2);
    abs_sum += kWk[j] * (magnitude(f1) + magnitude(f2));
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  kronrod = k * h;
  err = magnitude(T((k - g) * h));
  floor = 50 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(h);
}

template <class F, class T>
void adapt(F& f, double a, double b, double tol, int depth, T& sum, double& err, int& evals) {
  T k{};
  double e = 0, floor = 0;
  gk15(f, a, b, k, e, floor);
  evals += 15;
  if (e <= tol || e <= floor || depth <= 0 || b - a < 1e-14 * (1 + std::abs(a))) {
    sum += k;
    err += e;
    return;
  }
  double m = 0.5 * (a + b);
  adapt(f, a, m, 0.5 * tol, depth - 1, sum, err, evals);
  adapt(f, m, b, 0.5 * tol, depth - 1, sum, err, evals);
}

}  // namespace detail

template <class T>
struct Result {
  T value{};
  double error = 0;
  int evaluations = 0;
};

/// Adaptive integration after splitting [a, b] into `pieces` equal panels
/// (e.g. to resolve oscillations before refinement starts). Refinement stops
/// once the error estimate is below max(tol, rel_tol·∫|f|), the budget being
/// shared among panels by length.
template <class F>
auto integrate_panels(F f, double a, double b, int pieces, double tol = 1e-12, double rel_tol = 1e-13,
                      int max_depth = 30) {
  using T = decltype(f(a));
  Result<T> r;
  if (a == b) return r;
  if (pieces < 1) pieces = 1;
  const double h = (b - a) / pieces;
  std::vector<T> coarse(static_cast<std::size_t>(pieces));
  std::vector<double> errs(static_cast<std::size_t>(pieces));
  double abs_total = 0;
  for (int p = 0; p < pieces; ++p) {
    double floor = 0;
    detail::gk15(f, a + p * h, a + (p + 1) * h, coarse[p], errs[p], floor);
    abs_total += floor / (50 * std::numeric_limits<double>::epsilon());
  }
  r.evaluations = 15 * pieces;
  const double budget = std::max(tol, rel_tol * abs_total) / pieces;
  for (int p = 0; p < pieces; ++p) {
    if (errs[p] <= budget) {
      r.value += coarse[p];
      r.error += errs[p];
      continue;
    }
    double lo = a + p * h, mid = lo + 0.5 * h, hi = a + (p + 1) * h;
    detail::adapt(f, lo, mid, 0.5 * budget, max_depth - 1, r.value, r.error, r.evaluations);
    detail::adapt(f, mid, hi, 0.5 * budget, max_depth - 1, r.value, r.error, r.evaluations);
  }
  return r;
}

/// Adaptive Gauss–Kronrod on [a, b].
template <class F>
auto integrate(F f, double a, double b, double tol = 1e-12, double rel_tol = 1e-13, int max_depth = 30) {
  return integrate_panels(std::move(f), a, b, 1, tol, rel_tol, max_depth);
}

}  // namespace hypolab::quad
