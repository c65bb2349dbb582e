#include "hypolab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "hypolab/cutoff.hpp"
#include "hypolab/error.hpp"
#include "hypolab/fft.hpp"
#include "hypolab/parallel.hpp"
#include "hypolab/quadrature.hpp"

namespace hypolab::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

const quad::Rule& gl16() {
  static const quad::Rule r = quad::gauss_legendre(16);
  return r;
}

double weight(const KernelParams& k, double d, double eta) {
  double c = k.chi(eta);
  if (c == 0) return 0.0;
  return std::exp(d * eta / 2) * std::pow(std::abs(eta), k.delta) * c;
}

}  // namespace

// ---- parameters ----------------------------------------------------------------------

void KernelParams::validate() const {
  if (!(q >= 2) || !(p >= q) || !std::isfinite(p)) throw DomainError("kernel window needs p >= q >= 2");
  if (!(delta >= 0 && delta < 0.5)) throw DomainError("delta must lie in [0, 1/2)");
}

double KernelParams::chi(double eta) const {
  return cutoff::smooth_step(eta + p + 1) - cutoff::smooth_step(eta + q + 1);
}

double KernelParams::phi(double x) { return cutoff::plateau(std::abs(x), 1.0, 2.0); }

// ---- pointwise evaluation ---------------------------------------------------------------

cplx eval_kernel_dY(const KernelParams& k, double d, double Y, int panel_scale) {
  k.validate();
  if (k.p == k.q) return 0.0;
  if (panel_scale < 1) panel_scale = 1;
  std::vector<double> cuts = {-k.p - 1, -k.p, -k.q - 1, -k.q};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double lo = -k.p - 1, hi = -k.q;
  double base = 1e300;
  if (Y != 0) base = std::min(base, kPi / (2 * std::abs(Y)));
  if (d > 0) base = std::min(base, 2.0 / d);
  cplx acc = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double a = std::max(cuts[s], lo), b = std::min(cuts[s + 1], hi);
    if (!(b > a)) continue;
    bool ramp = (a < -k.p + 1e-12) || (b > -k.q - 1 - 1e-12);
    double len = std::min(base, ramp ? 0.25 : 1e300);
    if (len > b - a) len = b - a;
    int panels = static_cast<int>(std::ceil((b - a) / len - 1e-9)) * panel_scale;
    acc += quad::composite(
        gl16(), [&](double eta) { return weight(k, d, eta) * std::polar(1.0, Y * eta); }, a, b, panels);
  }
  return acc;
}

cplx eval_kernel(const KernelParams& k, double x, double y, double xp, double yp, int panel_scale) {
  if (!(x > 0 && x < xp && xp < 1)) return 0.0;
  double ph = KernelParams::phi(x);
  if (ph == 0) return 0.0;
  return ph * eval_kernel_dY(k, xp * xp - x * x, y - yp, panel_scale);
}

// ---- pointwise bounds ---------------------------------------------------------------------

double bound_rhs(const KernelParams& k, int N, double d, double Y, BoundExponent e) {
  double E = e == BoundExponent::Q ? std::exp(-k.q * d / 2) : std::exp(-k.p * d);
  double s = 2 * std::abs(Y) + d;
  switch (N) {
    case 0: return E / std::pow(d, 1 + k.delta);
    case 1: return E / (s * std::pow(d, k.delta));
    case 2: return E / (s * s);
    default: throw DomainError("bound index must be 0, 1 or 2");
  }
}

BoundFit verify_pointwise_bounds(const KernelParams& k, int sample_points, std::uint64_t seed) {
  k.validate();
  if (sample_points < 100) throw DomainError("verify_pointwise_bounds needs at least 100 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0), uy(-2.0, 2.0);
  struct Sample {
    double d, Y, absk;
  };
  std::vector<Sample> pts(static_cast<std::size_t>(sample_points));
  for (auto& s : pts) {
    double xp = u01(rng);
    double x = xp * u01(rng);
    double y = uy(rng), yp = uy(rng);
    if (!(x > 0)) x = 0.5 * xp;
    s.d = xp * xp - x * x;
    s.Y = y - yp;
  }
  parallel_for(pts.size(), [&](std::size_t i) { pts[i].absk = std::abs(eval_kernel_dY(k, pts[i].d, pts[i].Y)); });

  BoundFit fit;
  fit.samples = sample_points;
  std::array<double*, 3> cq = {&fit.c0, &fit.c1, &fit.c2};
  std::array<double*, 3> cp = {&fit.c0_p, &fit.c1_p, &fit.c2_p};
  for (int N = 0; N < 3; ++N)
    for (const auto& s : pts) {
      if (s.d <= 0) continue;
      *cq[N] = std::max(*cq[N], s.absk / bound_rhs(k, N, s.d, s.Y, BoundExponent::Q));
      *cp[N] = std::max(*cp[N], s.absk / bound_rhs(k, N, s.d, s.Y, BoundExponent::P));
    }
  for (int N = 0; N < 3; ++N)
    for (const auto& s : pts)
      if (s.d > 0 && s.absk > *cq[N] * (1 + 1e-6) * bound_rhs(k, N, s.d, s.Y, BoundExponent::Q)) ++fit.violations;
  return fit;
}

// ---- L¹ tabulation ---------------------------------------------------------------------------

KernelQuadrature KernelQuadrature::refined() const {
  KernelQuadrature r = *this;
  r.eta_step /= 2;
  r.fft_size *= 4;
  r.d_nodes *= 2;
  r.x_points *= 2;
  return r;
}

KernelL1::KernelL1(const KernelParams& k, const KernelQuadrature& quad) : k_(k), quad_(quad) {
  k_.validate();
  if (quad_.d_nodes < 2 || !(quad_.d_min > 0) || !(quad_.d_min < 1)) throw DomainError("bad d-grid");
  const int n = quad_.fft_size;
  const double deta = quad_.eta_step;
  const int m = static_cast<int>(std::ceil((k_.p + 1 - k_.q) / deta)) + 1;
  if (m > n) throw DomainError("FFT size too small for the frequency window");
  y_step_ = 2 * kPi / (n * deta);
  y_half_ = static_cast<int>(std::ceil(4.0 / y_step_)) + 2;
  if (2 * y_half_ + 1 > n) throw DomainError("FFT size too small for the Y range");

  log_d_.resize(static_cast<std::size_t>(quad_.d_nodes));
  const double l0 = std::log(quad_.d_min);
  for (int i = 0; i < quad_.d_nodes; ++i) log_d_[i] = l0 + (0.0 - l0) * i / (quad_.d_nodes - 1);
  const std::size_t ny = static_cast<std::size_t>(2 * y_half_ + 1);
  abs_.assign(log_d_.size(), std::vector<double>(ny, 0.0));
  cum_.assign(log_d_.size(), std::vector<double>(ny, 0.0));
  if (k_.p == k_.q) return;

  const double eta0 = -k_.p - 1;
  parallel_for(log_d_.size(), [&](std::size_t dk) {
    double d = std::exp(log_d_[dk]);
    std::vector<cplx> buf(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < m; ++j) buf[j] = weight(k_, d, eta0 + j * deta);
    fft::transform_1d(buf, fft::Direction::Backward);
    auto& a = abs_[dk];
    for (int s = -y_half_; s <= y_half_; ++s) a[s + y_half_] = deta * std::abs(buf[(s + n) % n]);
    auto& c = cum_[dk];
    for (std::size_t i = 1; i < ny; ++i) c[i] = c[i - 1] + 0.5 * y_step_ * (a[i - 1] + a[i]);
  });
}

double KernelL1::cumulative(std::size_t dk, double Y) const {
  const auto& a = abs_[dk];
  const auto& c = cum_[dk];
  double pos = (Y + y_half_ * y_step_) / y_step_;
  if (pos <= 0) return 0.0;
  std::size_t last = a.size() - 1;
  if (pos >= static_cast<double>(last)) return c[last];
  std::size_t i = static_cast<std::size_t>(pos);
  double t = pos - static_cast<double>(i);
  return c[i] + y_step_ * (t * a[i] + 0.5 * t * t * (a[i + 1] - a[i]));
}

double KernelL1::window_integral(double d, double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  double ld = std::log(std::max(d, quad_.d_min));
  double pos = (ld - log_d_.front()) / (log_d_[1] - log_d_[0]);
  std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(log_d_.size() - 2)));
  double t = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  double v0 = cumulative(i, hi) - cumulative(i, lo);
  double v1 = cumulative(i + 1, hi) - cumulative(i + 1, lo);
  return (1 - t) * v0 + t * v1;
}

double KernelL1::table_abs(double d, double Y) const {
  double eps = 1e-3 * y_step_;
  return window_integral(d, Y - eps, Y + eps) / (2 * eps);
}

L1Split KernelL1::norm(double xp, double yp) const {
  L1Split out;
  if (!(xp > 0 && xp < 1) || k_.p == k_.q) return out;
  const double lo = -2 - yp, hi = 2 - yp;
  auto clip = [&](double a, double b) { return std::pair{std::max(a, lo), std::min(b, hi)}; };
  static thread_local std::vector<double> edges;
  edges = {0.0};
  for (double e = 1e-8; e < 0.5; e *= 10) edges.push_back(e);
  edges.push_back(1.0);
  const quad::Rule rule = quad::gauss_legendre(quad_.x_points);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    double a = edges[s], b = edges[s + 1];
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      double u = mid + half * rule.nodes[q];
      double w = rule.weights[q] * half * xp;  // dx = x' du
      double d = xp * xp * u * (2 - u);
      double dd = std::pow(d, k_.delta);
      auto [i0, i1] = clip(-d, d);
      double inner = window_integral(d, i0, i1);
      auto [m0, m1] = clip(d, dd);
      auto [m2, m3] = clip(-dd, -d);
      double middle = window_integral(d, m0, m1) + window_integral(d, m2, m3);
      auto [o0, o1] = clip(dd, 1e300);
      auto [o2, o3] = clip(-1e300, -dd);
      double outer = window_integral(d, o0, o1) + window_integral(d, o2, o3);
      out.inner += w * inner;
      out.middle += w * middle;
      out.outer += w * outer;
      out.total += w * window_integral(d, lo, hi);
    }
  }
  return out;
}

// ---- decay study --------------------------------------------------------------------------------

void DecayTable::write_csv(std::ostream& out) const {
  out << "p,q,delta,sup_l1,samples\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", r.p, r.q, r.delta, r.sup_l1, r.samples);
    out << buf;
  }
}

std::string DecayTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

DecayTable decay_study(const std::vector<double>& p_list, double ratio, double delta, const KernelQuadrature& quad,
                       int samples, std::uint64_t seed) {
  if (p_list.empty()) throw DomainError("empty p list");
  for (std::size_t i = 1; i < p_list.size(); ++i)
    if (!(p_list[i] > p_list[i - 1])) throw DomainError("p list must be increasing");
  if (!(ratio > 0 && ratio <= 1)) throw DomainError("ratio must lie in (0, 1]");
  if (samples < 64) throw DomainError("decay study needs at least 64 samples");

  // Latin hypercube on (0,1) × (−2,2) plus the edge candidates.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<int> px(static_cast<std::size_t>(samples)), py(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) px[i] = py[i] = i;
  std::shuffle(px.begin(), px.end(), rng);
  std::shuffle(py.begin(), py.end(), rng);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < samples; ++i)
    pts.emplace_back((px[i] + u01(rng)) / samples, -2 + 4 * (py[i] + u01(rng)) / samples);
  for (double xp : {0.9, 0.99, 0.999}) pts.emplace_back(xp, 0.0);

  DecayTable table;
  for (double p : p_list) {
    KernelParams k{p, std::max(2.0, ratio * p), delta};
    KernelL1 l1(k, quad);
    std::vector<double> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { vals[i] = l1.norm(pts[i].first, pts[i].second).total; });
    std::size_t best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    table.rows.push_back({k.p, k.q, delta, vals[best], static_cast<int>(pts.size()), pts[best].first, pts[best].second});
  }
  return table;
}

}  // namespace hypolab::kernels
