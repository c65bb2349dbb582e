#pragma once

// Direct solvers for the Grushin operator G = ∂x² + x²∂y², the complex
// vector field P = ∂x − i x ∂y, the polarized first-order system and the
// 2×2 hypoelliptic system, plus the regularity-gain probe built on them.

#include <string>
#include <utility>
#include <vector>

#include "hypolab/grid.hpp"

namespace hypolab::solvers {

using grid::Box;
using grid::cplx;
using grid::GridField;

struct GrushinSolveParams {
  enum class Gauge { ZeroMean };
  enum class Boundary { Periodic };
  Gauge gauge = Gauge::ZeroMean;
  Boundary bc = Boundary::Periodic;
};

struct SolveDiagnostics {
  /// ‖Lu − f‖/‖f‖ with L applied spectrally (0 when f = 0).
  double residual = 0.0;
  /// L² norm of the part of f the gauge had to discard.
  double gauge_deviation = 0.0;
  /// solve_p only: fraction of ‖F‖² outside η < 0.
  double off_cone_energy = 0.0;
};

/// Solves G u = f: FFT in y, then per η a periodic second-order
/// finite-difference solve of û'' − x²η²û = f̂ in x. The η = 0 slice is
/// solved with its x-mean projected out and u's constant mode set to zero.
GridField solve_grushin(const GridField& f, const GrushinSolveParams& params = {},
                        SolveDiagnostics* diag = nullptr);

/// Solves P ν = F slice by slice in η using the integrating factor e^{x²η/2}.
/// The ODE is posed for ν₃ = |D_y|^δ ν with right side |η|^δ F̂, then the
/// weight is removed again. For η < 0 each half line x ≷ 0 is integrated
/// inward from the box edge; for η ≥ 0 outward from x = 0.
GridField solve_p(const GridField& F, double delta, SolveDiagnostics* diag = nullptr);

/// One-dimensional core of solve_p: the ν̂(·, η) profile for samples g of
/// the right-hand side on the x-nodes of box (product trapezoid rule).
std::vector<cplx> integrate_p_slice(const Box& box, double eta, const std::vector<cplx>& g);

struct PolarizedInput {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  GridField f1, f2;
};

struct PolarizedResult {
  GridField v;
  /// ‖∂x v − (λ₁f₁+λ₂f₂)‖ / ‖f‖ and ‖x∂y v − (λ₂f₁−λ₁f₂)‖ / ‖f‖.
  double residual_dx = 0.0;
  double residual_xdy = 0.0;
};

/// Recovers v from A(λv) = f, A = [[∂x, x∂y], [−x∂y, ∂x]], through
/// Δv = ∂x a + ∂xy b − x∂y² a with a = λ₁f₁+λ₂f₂, b = λ₂f₁−λ₁f₂.
PolarizedResult polarized_reduction(const PolarizedInput& inp);

struct HypoSystemResult {
  GridField u1, u2;
  /// ‖M u − f‖ / ‖f‖ for M = [[∂x, ∂y], [−x²∂y, ∂x]].
  double residual = 0.0;
};

/// Solves M u = f via the cofactor C = [[∂x, −∂y], [x²∂y, ∂x]], using
/// C M = [[G, 0], [−2x∂y, G]].
HypoSystemResult solve_hypo_system(const GridField& f1, const GridField& f2);

/// Spectral inverse of Δ with zero-mean gauge.
GridField solve_laplacian(const GridField& f);

enum class ProbeOperator { Grushin, POperator, Laplacian };
std::string to_string(ProbeOperator op);
ProbeOperator probe_operator_from_string(const std::string& s);

struct RegularityProbeReport {
  ProbeOperator op = ProbeOperator::Grushin;
  std::vector<double> widths;
  double s = 0.0;
  std::vector<double> norms;
  double fitted_exponent = 0.0;
  bool bounded = false;
};

inline constexpr double kBoundedSlope = 0.1;

/// Solves op·u = μ_w for each width, records ‖⟨D⟩^s u‖_{L¹([−1,1]²)} and
/// fits the slope of log norm against log(1/w). For the P operator the
/// forcing is the η < −2|ξ| piece of the measure.
RegularityProbeReport regularity_probe(ProbeOperator op, const grid::MeasureSpec& spec, double s,
                                       const std::vector<double>& widths, const Box& box);

/// Least-squares slope of log(norm) against log(1/width).
double fit_growth_exponent(const std::vector<double>& widths, const std::vector<double>& norms);

}  // namespace hypolab::solvers
