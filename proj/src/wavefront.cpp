#include "hypolab/wavefront.hpp"

#include <cmath>
#include <numbers>

#include "hypolab/error.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab::wavefront {

namespace {

constexpr double kPi = std::numbers::pi;

void check_inside(const grid::Box& b, Point z) {
  if (!(z.x >= -0.5 * b.Lx && z.x < 0.5 * b.Lx && z.y >= -0.5 * b.Ly && z.y < 0.5 * b.Ly))
    throw DomainError("base point outside the box");
}

double fit_slope(const std::vector<double>& r, const std::vector<double>& m) {
  double n = static_cast<double>(r.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    double X = std::log(r[k]), Y = std::log(m[k]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

void GaborProbe::validate(const grid::Box& box) const {
  double h = std::max(box.hx(), box.hy());
  if (!(sigma > 0)) throw DomainError("Gabor window width must be positive");
  if (sigma < 2 * h) throw DomainError("Gabor window width is not resolved by the grid");
  if (8 * sigma > 0.5 * std::min(box.Lx, box.Ly)) throw DomainError("Gabor window does not fit the box");
  if (n_directions < 16 || n_directions % 2 != 0) throw DomainError("need an even number of directions, at least 16");
  if (scales.size() < 2) throw DomainError("need at least two scales");
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0)) throw DomainError("scales must be positive");
    if (k > 0 && !(scales[k] > scales[k - 1])) throw DomainError("scales must be increasing");
  }
  if (!(scales.back() < kPi / h)) throw DomainError("largest scale exceeds the grid Nyquist radius");
}

double GaborProbe::octaves() const { return std::log2(scales.back() / scales.front()); }

double GaborProbe::angle(int j) const { return 2 * kPi * j / n_directions; }

bool GaborProbe::is_boundary(int j) const { return j == 0 || 2 * j == n_directions; }

cplx gabor(const grid::GridField& f, Point z, Point k, double sigma) {
  const grid::Box& b = f.box();
  check_inside(b, z);
  if (!(sigma > 0)) throw DomainError("Gabor window width must be positive");
  const double cut = 8 * sigma;
  const int ri = static_cast<int>(std::ceil(cut / b.hx())), rj = static_cast<int>(std::ceil(cut / b.hy()));
  const int ci = static_cast<int>(std::lround((z.x + 0.5 * b.Lx) / b.hx()));
  const int cj = static_cast<int>(std::lround((z.y + 0.5 * b.Ly) / b.hy()));
  const double inv = 1 / (2 * sigma * sigma);
  // Row factors in x, then a y-sum per row.
  std::vector<cplx> ey(static_cast<std::size_t>(2 * rj + 1));
  std::vector<int> jj(ey.size());
  for (int s = -rj; s <= rj; ++s) {
    double y = b.y(0) + (cj + s) * b.hy();
    double dy = y - z.y;
    ey[s + rj] = std::exp(-dy * dy * inv) * std::polar(1.0, -k.y * y);
    jj[s + rj] = ((cj + s) % b.Ny + b.Ny) % b.Ny;
  }
  cplx acc = 0;
  for (int s = -ri; s <= ri; ++s) {
    double x = b.x(0) + (ci + s) * b.hx();
    double dx = x - z.x;
    double wx = std::exp(-dx * dx * inv);
    if (wx < 1e-300) continue;
    int i = ((ci + s) % b.Nx + b.Nx) % b.Nx;
    cplx row = 0;
    for (std::size_t t = 0; t < ey.size(); ++t) row += f.at(i, jj[t]) * ey[t];
    acc += wx * std::polar(1.0, -k.x * x) * row;
  }
  return acc * b.hx() * b.hy();
}

bool ConeReport::singular_in_upper_half() const {
  for (int j : singular_directions)
    if (!(std::sin(angles[static_cast<std::size_t>(j)]) > 1e-12)) return false;
  return true;
}

nlohmann::json ConeReport::to_json() const {
  return {{"z", {z.x, z.y}},
          {"angles", angles},
          {"slopes", slopes},
          {"singular_directions", singular_directions},
          {"boundary_singular", boundary_singular},
          {"asymmetry_ok", asymmetry_ok},
          {"interior_asymmetry_ok", interior_asymmetry_ok}};
}

nlohmann::json ScanResult::to_json() const {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& c : reports) r.push_back(c.to_json());
  return {{"all_ok", all_ok}, {"reports", r}};
}

ConeReport cone_at(const grid::GridField& f, Point z, const GaborProbe& probe) {
  probe.validate(f.box());
  check_inside(f.box(), z);
  if (probe.octaves() < 3 - 1e-9) throw DomainError("insufficient-octaves: scales must span at least 3 octaves");
  const int n = probe.n_directions;
  const std::size_t ns = probe.scales.size();
  std::vector<double> mag(static_cast<std::size_t>(n) * ns);
  parallel_for(mag.size(), [&](std::size_t t) {
    int j = static_cast<int>(t / ns);
    double r = probe.scales[t % ns], th = probe.angle(j);
    mag[t] = std::abs(gabor(f, z, {r * std::cos(th), r * std::sin(th)}, probe.sigma));
  });
  // Coefficients below roundoff of the windowed mass count as decayed.
  double mass = std::abs(gabor(f.map([](cplx v, double, double) { return cplx(std::abs(v)); }), z, {0, 0}, probe.sigma));
  double floor = 1e-12 * mass + 1e-300;

  ConeReport rep;
  rep.z = z;
  std::vector<bool> sing(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<double> m(ns);
    for (std::size_t s = 0; s < ns; ++s) m[s] = std::max(mag[j * ns + s], floor);
    double slope = fit_slope(probe.scales, m);
    rep.angles.push_back(probe.angle(j));
    rep.slopes.push_back(slope);
    sing[j] = slope > probe.decay_threshold && m.back() > floor;
    if (sing[j]) {
      rep.singular_directions.push_back(j);
      if (probe.is_boundary(j)) rep.boundary_singular.push_back(j);
    }
  }
  for (int j = 0; j < n / 2; ++j) {
    if (sing[j] && sing[j + n / 2]) {
      rep.asymmetry_ok = false;
      if (!probe.is_boundary(j)) rep.interior_asymmetry_ok = false;
    }
  }
  return rep;
}

ScanResult brummelhuis_scan(const grid::GridField& f, const std::vector<Point>& base_points, const GaborProbe& probe) {
  if (base_points.empty()) throw DomainError("no base points");
  for (const Point& z : base_points) check_inside(f.box(), z);
  ScanResult out;
  for (const Point& z : base_points) {
    out.reports.push_back(cone_at(f, z, probe));
    out.all_ok = out.all_ok && out.reports.back().asymmetry_ok;
  }
  return out;
}

std::vector<Point> base_grid(double a, int n) {
  if (n < 1) throw DomainError("base grid needs at least one point per side");
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = n == 1 ? 0.0 : -a + 2 * a * i / (n - 1);
      double t = n == 1 ? 0.0 : -a + 2 * a * j / (n - 1);
      pts.push_back({s, t});
    }
  return pts;
}

}  // namespace hypolab::wavefront
