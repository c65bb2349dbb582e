#pragma once

// Windowed Fourier (Gabor) probe of the wavefront set of a grid field and
// the antipodal asymmetry test on it.

#include <vector>

#include "hypolab/grid.hpp"
#include "json.hpp"

namespace hypolab::wavefront {

using grid::cplx;

struct Point {
  double x = 0, y = 0;
};

struct GaborProbe {
  double sigma = 0.5;                        // window width (physical units)
  std::vector<double> scales = {1, 2, 4, 8};  // frequency radii |k|
  int n_directions = 32;                     // θ_j = 2πj/n, k = r (cos θ_j, sin θ_j)
  double decay_threshold = -2.0;             // slope above this ⇒ singular direction

  /// Checks everything except the octave span, against a box.
  void validate(const grid::Box& box) const;
  double octaves() const;
  double angle(int j) const;
  /// Direction bins lying on the η = 0 axis.
  bool is_boundary(int j) const;
};

/// ∫ f(w) e^{−|w−z|²/(2σ²)} e^{−ik·w} dw by grid quadrature (window wrapped
/// periodically and cut at 8σ).
cplx gabor(const grid::GridField& f, Point z, Point k, double sigma);

struct ConeReport {
  Point z;
  std::vector<double> angles;
  std::vector<double> slopes;
  std::vector<int> singular_directions;
  /// Singular bins on the η = 0 axis (reported separately).
  std::vector<int> boundary_singular;
  /// No bin j with both j and j + n/2 singular.
  bool asymmetry_ok = true;
  /// The same test with the η = 0 bins left out.
  bool interior_asymmetry_ok = true;

  bool singular_in_upper_half() const;  // every singular bin has sin θ > 0
  nlohmann::json to_json() const;
};

/// Fits log|gabor(z, r ω_j)| against log r for each direction.
ConeReport cone_at(const grid::GridField& f, Point z, const GaborProbe& probe);

struct ScanResult {
  bool all_ok = true;
  std::vector<ConeReport> reports;
  nlohmann::json to_json() const;
};

ScanResult brummelhuis_scan(const grid::GridField& f, const std::vector<Point>& base_points, const GaborProbe& probe);

/// n×n base points on the square [−a, a]².
std::vector<Point> base_grid(double a, int n);

}  // namespace hypolab::wavefront
