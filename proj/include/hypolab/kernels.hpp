#pragma once

// The oscillatory kernel
//   K_pq(x, y, x', y') = 1_{(x,1)}(x') φ(x) ∫ e^{i(y−y')η + (x'²−x²)η/2} |η|^δ χ_pq(η) dη
// with χ_pq a smooth window supported in (−p−1, −q), its pointwise bounds
// and the sup_{x',y'} L¹_{x,y} decay in p.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypolab::kernels {

using cplx = std::complex<double>;

struct KernelParams {
  double p = 32;
  double q = 16;
  double delta = 0.25;

  /// p ≥ q ≥ 2 (p = q is the empty window), 0 ≤ δ < 1/2.
  void validate() const;
  /// 1 on (−p, −q−1), 0 outside (−p−1, −q); S(η+p+1) − S(η+q+1) with S the smooth step.
  double chi(double eta) const;
  /// x-cutoff: 1 on |x| < 1, 0 on |x| > 2.
  static double phi(double x);
};

/// Composite Gauss–Legendre over η with panels no longer than a quarter
/// oscillation period, the damping length 2/(x'²−x²), and 1/4 on the ramps.
cplx eval_kernel(const KernelParams& k, double x, double y, double xp, double yp, int panel_scale = 1);
/// The same integral as a function of d = x'² − x² > 0 and Y = y − y'.
cplx eval_kernel_dY(const KernelParams& k, double d, double Y, int panel_scale = 1);

enum class BoundExponent { Q, P };

struct BoundFit {
  double c0 = 0, c1 = 0, c2 = 0;
  int violations = 0;
  int samples = 0;
  /// Same fit against the e^{−p(x'²−x²)} version of the bounds.
  double c0_p = 0, c1_p = 0, c2_p = 0;
};

/// Bound right-hand sides at (d, Y):
///   N=0: E/d^{1+δ},  N=1: E/((2|Y|+d) d^δ),  N=2: E/(2|Y|+d)²
/// with E = e^{−q d/2} (BoundExponent::Q) or e^{−p d} (BoundExponent::P).
double bound_rhs(const KernelParams& k, int N, double d, double Y, BoundExponent e = BoundExponent::Q);

/// Samples admissible (x, y, x', y') with 0 < x < x' < 1 and y, y' ∈ (−2, 2),
/// fits c_N = max |K|/bound_N and counts violations of c_N(1 + 1e−6).
BoundFit verify_pointwise_bounds(const KernelParams& k, int sample_points, std::uint64_t seed = 7);

struct KernelQuadrature {
  double eta_step = 1.0 / 32;  // η spacing of the FFT tabulation
  int fft_size = 1 << 16;
  int d_nodes = 160;  // geometric d-grid on [d_min, 1]
  double d_min = 1e-6;
  int x_points = 8;  // Gauss–Legendre points per graded x-panel
  /// Twice as fine in every direction.
  KernelQuadrature refined() const;
};

struct DecayRow {
  double p, q, delta;
  double sup_l1;
  int samples;
  double argmax_xp, argmax_yp;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

/// L¹_{x,y} norm of K over (0,1)×(−2,2) at one (x', y') together with the
/// split into the regions |Y| < d, d < |Y| < d^δ and |Y| > d^δ.
struct L1Split {
  double total = 0;
  double inner = 0, middle = 0, outer = 0;
};

/// Tabulates |K(d, ·)| by FFT for one parameter set and answers L¹ queries.
class KernelL1 {
 public:
  KernelL1(const KernelParams& k, const KernelQuadrature& quad = {});
  L1Split norm(double xp, double yp) const;
  /// |K(d, Y)| from the table (for cross-checks against eval_kernel_dY).
  double table_abs(double d, double Y) const;

 private:
  double window_integral(double d, double lo, double hi) const;
  double cumulative(std::size_t dk, double Y) const;

  KernelParams k_;
  KernelQuadrature quad_;
  std::vector<double> log_d_;
  double y_step_ = 0;
  int y_half_ = 0;                          // table covers Y ∈ [−y_half·ΔY, y_half·ΔY]
  std::vector<std::vector<double>> abs_;    // |K| per d-node on the Y-grid
  std::vector<std::vector<double>> cum_;    // cumulative trapezoid of |K| from the left end
};

/// For each p: q = ratio·p, sup over sampled (x', y') of the L¹ norm. Samples
/// are a Latin hypercube on (0,1)×(−2,2) plus x' ∈ {0.9, 0.99, 0.999} at y' = 0.
DecayTable decay_study(const std::vector<double>& p_list, double ratio, double delta, const KernelQuadrature& quad,
                       int samples = 128, std::uint64_t seed = 11);

}  // namespace hypolab::kernels
