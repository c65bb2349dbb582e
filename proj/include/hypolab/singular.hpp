#pragma once

// The explicit non-smooth solutions of A u = 0 for A = [[∂x, x∂y], [−x∂y, ∂x]]:
// û₁(x, η) = χ(η) e^{−x²η/2}, u₂ = −i u₁, and the rotated family
// (u₁e^{iθ}, −iu₁e^{iθ}).

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypolab/grid.hpp"

namespace hypolab::singular {

using grid::cplx;

struct ChiSpec {
  enum class Kind { Indicator, SmoothBump };
  Kind kind = Kind::Indicator;
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  /// Truncation used when b = ∞.
  std::optional<double> lambda;

  static ChiSpec indicator(double a, double b = std::numeric_limits<double>::infinity(),
                           std::optional<double> lambda = std::nullopt);
  /// Bump normalized to peak 1 at (a+b)/2, supported in (a, b).
  static ChiSpec smooth_bump(double a, double b);

  void validate() const;
  double operator()(double eta) const;
  /// Effective upper limit of the η-integral: b, or Λ when b = ∞ (∞ if neither).
  double upper() const;
  std::string to_string() const;
};

struct CounterexampleSolution {
  ChiSpec chi;
  double theta = 0.0;

  CounterexampleSolution() = default;
  CounterexampleSolution(ChiSpec c, double th);
};

/// u₁(x, y)·e^{iθ} where u₁ = ∫ e^{iyη} e^{−x²η/2} χ(η) dη. Indicators use
/// the closed form of ∫_a^b e^{ηz} dη (z = iy − x²/2); bumps use quadrature.
cplx eval_u1(const CounterexampleSolution& sol, double x, double y);
/// Always by adaptive quadrature (panels ≤ π/(4|y|) wide).
cplx eval_u1_quadrature(const CounterexampleSolution& sol, double x, double y);
/// 1/(x²/2 − iy): the indicator(0, ∞) value.
cplx u1_closed_form(double x, double y);

/// Grid realization of u₁e^{iθ} from its exact y-spectrum (smooth χ only).
grid::GridField realize_u1(const CounterexampleSolution& sol, const grid::Box& box);

/// ‖A u‖/‖u‖ for u = (u₁e^{iθ}, −iu₁e^{iθ}) on the grid.
double residual_au(const CounterexampleSolution& sol, const grid::Box& box);

struct GrowthRow {
  double lambda;
  double reduced;     // 2π·√π·∫₀^Λ η^{−1/2} dη
  double quadrature;  // 2π·∫₀^Λ ∫ e^{−x²η} dx dη, by 2D quadrature
};

/// ‖u₁‖²_{L²(ℝ²)} for χ = 1_{(0,Λ)}, Λ over the (increasing) list.
std::vector<GrowthRow> l2_growth(const std::vector<double>& lambdas);
/// Log-log least-squares slope of quadrature value against Λ.
double growth_slope(const std::vector<GrowthRow>& rows);
/// ‖u₁‖² = 2π √π ∫ |χ(η)|² η^{−1/2} dη for a χ with finite upper limit.
double l2_norm_squared(const ChiSpec& chi);

/// φ(y) = (Σ c_k y^k) · e^{−y²/(2w²)}.
struct TestFunction {
  double width = 1.0;
  std::vector<double> poly{1.0};

  static TestFunction gaussian(double w = 1.0) { return {w, {1.0}}; }
  static TestFunction odd_gaussian(double w = 1.0) { return {w, {0.0, 1.0}}; }
  double operator()(double y) const;
};

struct TracePair {
  double re_pair = 0.0;  // ∫ φ(y) sin(Λy)/y dy
  double im_pair = 0.0;  // ∫ φ(y) (1 − cos Λy)/y dy
};

/// ⟨u₁(0, ·), φ⟩ for χ = 1_{(0,Λ)}, by quadrature of the y-integral
/// folded onto y > 0 (the even part of φ pairs with the real part).
TracePair trace_pairing(double lambda, const TestFunction& phi);

}  // namespace hypolab::singular
