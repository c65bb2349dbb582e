#include "hypolab/singular.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hypolab/cutoff.hpp"
#include "hypolab/error.hpp"
#include "hypolab/fft.hpp"
#include "hypolab/parallel.hpp"
#include "hypolab/quadrature.hpp"

namespace hypolab::singular {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double X = std::log(xs[k]), Y = std::log(ys[k]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

// ---- χ ----------------------------------------------------------------------------

ChiSpec ChiSpec::indicator(double a, double b, std::optional<double> lambda) {
  ChiSpec c;
  c.kind = Kind::Indicator;
  c.a = a;
  c.b = b;
  c.lambda = lambda;
  c.validate();
  return c;
}

ChiSpec ChiSpec::smooth_bump(double a, double b) {
  ChiSpec c;
  c.kind = Kind::SmoothBump;
  c.a = a;
  c.b = b;
  c.validate();
  return c;
}

void ChiSpec::validate() const {
  if (!(a >= 0) || !(b > a)) throw DomainError("chi support must satisfy 0 <= a < b");
  if (kind == Kind::SmoothBump && !std::isfinite(b)) throw DomainError("smooth_bump needs a finite upper end");
  if (lambda && !(*lambda > a)) throw DomainError("truncation lambda must exceed a");
}

double ChiSpec::operator()(double eta) const {
  if (kind == Kind::Indicator) return eta > a && eta < upper() ? 1.0 : 0.0;
  double t = (2 * eta - a - b) / (b - a);
  return std::exp(1.0) * cutoff::bump(t);
}

double ChiSpec::upper() const {
  if (std::isfinite(b)) return lambda ? std::min(b, *lambda) : b;
  return lambda ? *lambda : kInf;
}

std::string ChiSpec::to_string() const {
  std::ostringstream os;
  os << (kind == Kind::Indicator ? "indicator(" : "smooth_bump(") << a << ", " << b << ")";
  if (lambda) os << " truncated at " << *lambda;
  return os.str();
}

CounterexampleSolution::CounterexampleSolution(ChiSpec c, double th) : chi(c), theta(std::remainder(th, 2 * kPi)) {
  if (theta < 0) theta += 2 * kPi;
  chi.validate();
}

// ---- pointwise evaluation ---------------------------------------------------------------

cplx u1_closed_form(double x, double y) { return 1.0 / cplx(x * x / 2, -y); }

cplx eval_u1_quadrature(const CounterexampleSolution& sol, double x, double y) {
  const ChiSpec& chi = sol.chi;
  double lo = chi.a, hi = chi.upper();
  if (!std::isfinite(hi)) {
    if (x == 0) throw DomainError("divergent integral: x = 0 with unbounded chi and no truncation");
    hi = lo + 80.0 / (x * x);
  }
  const cplx z(-x * x / 2, y);
  auto f = [&](double eta) { return chi(eta) * std::exp(eta * z); };
  double panel = y == 0 ? hi - lo : std::min(hi - lo, kPi / (4 * std::abs(y)));
  if (x != 0) panel = std::min(panel, 8.0 / (x * x));
  int pieces = static_cast<int>(std::min(1e6, std::ceil((hi - lo) / panel)));
  auto r = quad::integrate_panels(f, lo, hi, std::max(pieces, 1), 0.0, 1e-13);
  return r.value * std::polar(1.0, sol.theta);
}

cplx eval_u1(const CounterexampleSolution& sol, double x, double y) {
  const ChiSpec& chi = sol.chi;
  if (chi.kind == ChiSpec::Kind::SmoothBump) return eval_u1_quadrature(sol, x, y);
  const cplx z(-x * x / 2, y);
  double hi = chi.upper();
  cplx value;
  if (!std::isfinite(hi)) {
    if (x == 0) throw DomainError("divergent integral: x = 0 with unbounded chi and no truncation");
    value = -std::exp(chi.a * z) / z;
  } else if (std::abs(z) < 1e-8) {
    // Series of (e^{bz} − e^{az})/z about z = 0.
    value = (hi - chi.a) + 0.5 * (hi * hi - chi.a * chi.a) * z;
  } else {
    value = (std::exp(hi * z) - std::exp(chi.a * z)) / z;
  }
  return value * std::polar(1.0, sol.theta);
}

// ---- grid realization ---------------------------------------------------------------------

grid::GridField realize_u1(const CounterexampleSolution& sol, const grid::Box& box) {
  if (sol.chi.kind != ChiSpec::Kind::SmoothBump)
    throw DomainError("grid realization needs a smooth chi (indicators would ring on the torus)");
  if (sol.chi.b >= kPi / box.hy()) throw DomainError("chi support exceeds the resolved y-frequencies");
  const double deta = 2 * kPi / box.Ly;
  const cplx rot = std::polar(1.0, sol.theta);
  std::vector<cplx> data(box.size());
  parallel_for(static_cast<std::size_t>(box.Nx), [&](std::size_t i) {
    double x = box.x(static_cast<int>(i));
    for (int j = 0; j < box.Ny; ++j) {
      double eta = box.eta(j);
      int m = grid::Box::signed_index(j, box.Ny);
      double sign = (m % 2 == 0) ? 1.0 : -1.0;
      double c = sol.chi(eta);
      data[i * box.Ny + j] = c == 0 ? cplx(0) : rot * (deta * sign * c * std::exp(-x * x * eta / 2));
    }
  });
  fft::transform_y(data, box.Nx, box.Ny, fft::Direction::Backward);
  return {box, std::move(data)};
}

double residual_au(const CounterexampleSolution& sol, const grid::Box& box) {
  static const auto A = opalg::parse_operator("[[dx, x*dy], [-x*dy, dx]]");
  grid::GridField u1 = realize_u1(sol, box);
  grid::GridField u2 = cplx(0, -1) * u1;
  auto au = grid::apply_diffop(A, {u1, u2});
  auto l2 = [](const grid::GridField& f) { return grid::norm(f, grid::Norm::l2()); };
  double num = std::hypot(l2(au[0]), l2(au[1]));
  double den = std::hypot(l2(u1), l2(u2));
  return den > 0 ? num / den : num;
}

// ---- L² growth ------------------------------------------------------------------------

std::vector<GrowthRow> l2_growth(const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw DomainError("empty lambda list");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0)) throw DomainError("lambda must be positive");
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) throw DomainError("lambda list must be increasing");
  }
  std::vector<GrowthRow> rows;
  const double sqrt_pi = std::sqrt(kPi);
  for (double lam : lambdas) {
    // η = t²; the x-integral over [0, ∞) is mapped onto [0, 1).
    auto inner = [](double t) {
      auto g = [t](double s) {
        double x = s / (1 - s);
        return std::exp(-x * x * t * t) / ((1 - s) * (1 - s));
      };
      return 2.0 * quad::integrate(g, 0.0, 1.0, 0.0, 1e-13).value;
    };
    auto outer = [&](double t) { return 2 * t * inner(t); };
    double q = 2 * kPi * quad::integrate(outer, 0.0, std::sqrt(lam), 0.0, 1e-12).value;
    rows.push_back({lam, 2 * kPi * sqrt_pi * 2 * std::sqrt(lam), q});
  }
  return rows;
}

double growth_slope(const std::vector<GrowthRow>& rows) {
  if (rows.size() < 2) throw DomainError("need at least two rows for a slope");
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r.lambda);
    ys.push_back(r.quadrature);
  }
  return log_slope(xs, ys);
}

double l2_norm_squared(const ChiSpec& chi) {
  double hi = chi.upper();
  if (!std::isfinite(hi)) throw DomainError("unbounded chi has infinite L2 norm");
  auto f = [&](double t) {
    double c = chi(t * t);
    return 2 * c * c;
  };
  double lo = std::sqrt(chi.a), up = std::sqrt(hi);
  return 2 * kPi * std::sqrt(kPi) * quad::integrate_panels(f, lo, up, 16, 1e-13).value;
}

// ---- trace pairing ------------------------------------------------------------------------

double TestFunction::operator()(double y) const {
  double p = 0;
  for (std::size_t k = poly.size(); k-- > 0;) p = p * y + poly[k];
  return p * std::exp(-y * y / (2 * width * width));
}

TracePair trace_pairing(double lambda, const TestFunction& phi) {
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  if (!(phi.width > 0)) throw DomainError("test function width must be positive");
  double Y = phi.width * (10.0 + 2.0 * static_cast<double>(phi.poly.size()));
  int pieces = std::max(4, static_cast<int>(std::ceil(Y / (kPi / (4 * lambda)))));
  auto even = [&](double y) { return 0.5 * (phi(y) + phi(-y)); };
  auto odd = [&](double y) { return 0.5 * (phi(y) - phi(-y)); };
  auto re_f = [&](double y) { return even(y) * std::sin(lambda * y) / y; };
  auto im_f = [&](double y) {
    double s = std::sin(lambda * y / 2);
    return odd(y) * 2 * s * s / y;
  };
  TracePair t;
  t.re_pair = 2 * quad::integrate_panels(re_f, 0.0, Y, pieces, 1e-13).value;
  t.im_pair = 2 * quad::integrate_panels(im_f, 0.0, Y, pieces, 1e-13).value;
  return t;
}

}  // namespace hypolab::singular
