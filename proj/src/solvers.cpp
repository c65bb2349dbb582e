#include "hypolab/solvers.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hypolab/error.hpp"
#include "hypolab/fft.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab::solvers {

namespace {

constexpr double kPi = std::numbers::pi;

const opalg::DiffOp& grushin_op() {
  static const opalg::DiffOp op = opalg::parse_scalar("dx^2 + x^2*dy^2");
  return op;
}

const opalg::DiffOp& p_op() {
  static const opalg::DiffOp op = opalg::parse_scalar("dx - i*x*dy");
  return op;
}

double l2(const GridField& f) { return grid::norm(f, grid::Norm::l2()); }

double relative(double num, double den) { return den > 0 ? num / den : num; }

void require_finite(const GridField& f, const char* what) {
  if (!f.is_finite()) throw DomainError(std::string(what) + " contains non-finite values");
}

// Cyclic tridiagonal solve with constant off-diagonals `off` and diagonal
// `diag`, by Sherman–Morrison on top of the Thomas algorithm.
class CyclicTridiagonal {
 public:
  CyclicTridiagonal(std::vector<double> diag, double off) : n_(diag.size()), off_(off), b_(std::move(diag)) {
    gamma_ = -b_[0];
    b_[0] -= gamma_;
    b_[n_ - 1] -= off_ * off_ / gamma_;
    // Thomas factorization of the modified matrix.
    cp_.resize(n_);
    denom_.resize(n_);
    denom_[0] = b_[0];
    if (denom_[0] == 0) throw InternalError("singular tridiagonal system");
    cp_[0] = off_ / denom_[0];
    for (std::size_t i = 1; i < n_; ++i) {
      denom_[i] = b_[i] - off_ * cp_[i - 1];
      if (denom_[i] == 0 || !std::isfinite(denom_[i])) throw InternalError("singular tridiagonal system");
      cp_[i] = off_ / denom_[i];
    }
    std::vector<double> u(n_, 0.0);
    u[0] = gamma_;
    u[n_ - 1] = off_;
    z_ = thomas(u);
    vz_ = z_[0] + off_ / gamma_ * z_[n_ - 1];
    if (1.0 + vz_ == 0) throw InternalError("singular tridiagonal system");
  }

  std::vector<cplx> solve(const std::vector<cplx>& d) const {
    std::vector<cplx> y = thomas(d);
    cplx vy = y[0] + off_ / gamma_ * y[n_ - 1];
    cplx factor = vy / (1.0 + vz_);
    for (std::size_t i = 0; i < n_; ++i) y[i] -= factor * z_[i];
    return y;
  }

 private:
  template <class T>
  std::vector<T> thomas(const std::vector<T>& d) const {
    std::vector<T> x(n_);
    x[0] = d[0] / denom_[0];
    for (std::size_t i = 1; i < n_; ++i) x[i] = (d[i] - off_ * x[i - 1]) / denom_[i];
    for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= cp_[i] * x[i + 1];
    return x;
  }

  std::size_t n_;
  double off_;
  std::vector<double> b_;
  double gamma_;
  std::vector<double> cp_, denom_, z_;
  double vz_;
};

std::vector<cplx> column(const std::vector<cplx>& data, const Box& b, int j) {
  std::vector<cplx> c(static_cast<std::size_t>(b.Nx));
  for (int i = 0; i < b.Nx; ++i) c[i] = data[static_cast<std::size_t>(i) * b.Ny + j];
  return c;
}

void set_column(std::vector<cplx>& data, const Box& b, int j, const std::vector<cplx>& c) {
  for (int i = 0; i < b.Nx; ++i) data[static_cast<std::size_t>(i) * b.Ny + j] = c[i];
}

// Gauss–Legendre nodes/weights on [0, 1].
constexpr std::array<double, 8> kGlNode = {0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
                                           0.4082826787521751,   0.5917173212478249,  0.7627662049581645,
                                           0.8983332387068134,   0.9801449282487681};
constexpr std::array<double, 8> kGlWeight = {0.05061426814518813, 0.11119051722668724, 0.15685332293894363,
                                             0.18134189168918100, 0.18134189168918100, 0.15685332293894363,
                                             0.11119051722668724, 0.05061426814518813};

}  // namespace

// ---- Grushin ---------------------------------------------------------------------

GridField solve_grushin(const GridField& f, const GrushinSolveParams&, SolveDiagnostics* diag) {
  require_finite(f, "Grushin forcing");
  const Box& b = f.box();
  const double h = b.hx();
  std::vector<cplx> spec = grid::spectrum_y(f);

  // Constant mode of f in the zero-mean gauge.
  cplx mean = grid::integral(f) / (b.Lx * b.Ly);

  parallel_for(static_cast<std::size_t>(b.Ny), [&](std::size_t jj) {
    int j = static_cast<int>(jj);
    double eta = b.eta(j);
    std::vector<cplx> rhs = column(spec, b, j);
    std::vector<cplx> sol;
    if (j == 0) {
      // u'' = f on the periodic grid: diagonal in the discrete Fourier basis.
      fft::transform_1d(rhs, fft::Direction::Forward);
      rhs[0] = 0.0;
      for (int k = 1; k < b.Nx; ++k) {
        double s = std::sin(kPi * k / b.Nx);
        rhs[k] /= -4.0 * s * s / (h * h);
      }
      fft::transform_1d(rhs, fft::Direction::Backward);
      for (cplx& z : rhs) z /= b.Nx;
      sol = std::move(rhs);
    } else {
      std::vector<double> d(static_cast<std::size_t>(b.Nx));
      for (int i = 0; i < b.Nx; ++i) {
        double x = b.x(i);
        d[i] = -2.0 / (h * h) - x * x * eta * eta;
      }
      CyclicTridiagonal T(std::move(d), 1.0 / (h * h));
      sol = T.solve(rhs);
    }
    set_column(spec, b, j, sol);
  });

  GridField u = grid::from_spectrum_y(b, std::move(spec));
  if (diag) {
    GridField fp = f.map([mean](cplx v, double, double) { return v - mean; });
    diag->gauge_deviation = std::abs(mean) * std::sqrt(b.Lx * b.Ly);
    diag->residual = relative(l2(grid::apply_diffop(grushin_op(), u) - fp), l2(fp));
  }
  return u;
}

// ---- P = ∂x − i x ∂y ---------------------------------------------------------------------

std::vector<cplx> integrate_p_slice(const Box& box, double eta, const std::vector<cplx>& g) {
  const int n = box.Nx;
  if (static_cast<int>(g.size()) != n) throw DomainError("slice length does not match the box");
  const int i0 = n / 2;  // x = 0
  // Node n is the right box edge, periodically identified with node 0.
  auto xs = [&](int i) { return i == n ? 0.5 * box.Lx : box.x(i); };
  auto gs = [&](int i) { return g[static_cast<std::size_t>(i == n ? 0 : i)]; };

  // ν(d) = e^{(s²−d²)η/2} ν(s) + ∫_s^d e^{(x'²−d²)η/2} G(x') dx', G linear on the cell.
  auto step = [&](int s, int d, cplx nu) {
    double a = xs(s), b = xs(d);
    double hd = b - a;
    cplx ga = gs(s), gb = gs(d);
    cplx acc = 0.0;
    for (std::size_t q = 0; q < kGlNode.size(); ++q) {
      double t = kGlNode[q];
      double xp = a + t * hd;
      acc += kGlWeight[q] * std::exp((xp * xp - b * b) * eta / 2) * (ga * (1 - t) + gb * t);
    }
    return std::exp((a * a - b * b) * eta / 2) * nu + hd * acc;
  };

  std::vector<cplx> nu(static_cast<std::size_t>(n), 0.0);
  if (eta < 0) {
    cplx v = 0.0;
    for (int i = n; i > i0; --i) {
      v = step(i, i - 1, v);
      nu[i - 1] = v;
    }
    v = 0.0;
    nu[0] = 0.0;
    for (int i = 0; i + 1 < i0; ++i) {
      v = step(i, i + 1, v);
      nu[i + 1] = v;
    }
  } else {
    cplx v = 0.0;
    for (int i = i0; i + 1 < n; ++i) {
      v = step(i, i + 1, v);
      nu[i + 1] = v;
    }
    v = 0.0;
    for (int i = i0; i > 0; --i) {
      v = step(i, i - 1, v);
      nu[i - 1] = v;
    }
  }
  return nu;
}

GridField solve_p(const GridField& F, double delta, SolveDiagnostics* diag) {
  if (!(delta >= 0.0 && delta < 0.5)) throw DomainError("delta must lie in [0, 1/2)");
  require_finite(F, "P forcing");
  const Box& b = F.box();
  std::vector<cplx> spec = grid::spectrum_y(F);

  double off = 0.0, total = 0.0;
  for (int i = 0; i < b.Nx; ++i)
    for (int j = 0; j < b.Ny; ++j) {
      double e = std::norm(spec[static_cast<std::size_t>(i) * b.Ny + j]);
      total += e;
      if (b.eta(j) >= 0) off += e;
    }

  parallel_for(static_cast<std::size_t>(b.Ny), [&](std::size_t jj) {
    int j = static_cast<int>(jj);
    double eta = b.eta(j);
    double weight = eta == 0 ? 1.0 : std::pow(std::abs(eta), delta);
    std::vector<cplx> g = column(spec, b, j);
    for (cplx& z : g) z *= weight;
    std::vector<cplx> nu = integrate_p_slice(b, eta, g);
    for (cplx& z : nu) z /= weight;
    set_column(spec, b, j, nu);
  });

  GridField nu = grid::from_spectrum_y(b, std::move(spec));
  if (diag) {
    diag->off_cone_energy = total > 0 ? off / total : 0.0;
    diag->residual = relative(l2(grid::apply_diffop(p_op(), nu) - F), l2(F));
  }
  return nu;
}

// ---- Laplacian and the polarized system ------------------------------------------------

GridField solve_laplacian(const GridField& f) {
  require_finite(f, "Laplacian forcing");
  return grid::apply_symbol(f, [](double xi, double eta) {
    double k2 = xi * xi + eta * eta;
    return k2 == 0 ? cplx(0.0) : cplx(-1.0 / k2);
  });
}

PolarizedResult polarized_reduction(const PolarizedInput& inp) {
  double l1 = inp.lambda1, l2v = inp.lambda2;
  if (std::abs(l1 * l1 + l2v * l2v - 1.0) > 1e-12) throw DomainError("polarization must be a unit vector");
  if (!(inp.f1.box() == inp.f2.box())) throw DomainError("f1 and f2 live on different boxes");
  GridField a = cplx(l1) * inp.f1 + cplx(l2v) * inp.f2;
  GridField bb = cplx(l2v) * inp.f1 - cplx(l1) * inp.f2;
  static const auto dx = opalg::parse_scalar("dx");
  static const auto dxy = opalg::parse_scalar("dx*dy");
  static const auto xdyy = opalg::parse_scalar("x*dy^2");
  static const auto xdy = opalg::parse_scalar("x*dy");
  GridField rhs = grid::apply_diffop(dx, a) + grid::apply_diffop(dxy, bb) - grid::apply_diffop(xdyy, a);

  PolarizedResult out;
  out.v = solve_laplacian(rhs);
  double fn = std::hypot(l2(inp.f1), l2(inp.f2));
  out.residual_dx = relative(l2(grid::apply_diffop(dx, out.v) - a), fn);
  out.residual_xdy = relative(l2(grid::apply_diffop(xdy, out.v) - bb), fn);
  return out;
}

HypoSystemResult solve_hypo_system(const GridField& f1, const GridField& f2) {
  if (!(f1.box() == f2.box())) throw DomainError("f1 and f2 live on different boxes");
  static const auto dx = opalg::parse_scalar("dx");
  static const auto dy = opalg::parse_scalar("dy");
  static const auto x2dy = opalg::parse_scalar("x^2*dy");
  static const auto two_xdy = opalg::parse_scalar("2*x*dy");
  static const auto system = opalg::parse_operator("[[dx, dy], [-x^2*dy, dx]]");

  HypoSystemResult out;
  out.u1 = solve_grushin(grid::apply_diffop(dx, f1) - grid::apply_diffop(dy, f2));
  out.u2 = solve_grushin(grid::apply_diffop(x2dy, f1) + grid::apply_diffop(dx, f2) +
                         grid::apply_diffop(two_xdy, out.u1));
  auto back = grid::apply_diffop(system, {out.u1, out.u2});
  double num = std::hypot(l2(back[0] - f1), l2(back[1] - f2));
  out.residual = relative(num, std::hypot(l2(f1), l2(f2)));
  return out;
}

// ---- regularity probe ---------------------------------------------------------------------

std::string to_string(ProbeOperator op) {
  switch (op) {
    case ProbeOperator::Grushin: return "grushin";
    case ProbeOperator::POperator: return "p_operator";
    case ProbeOperator::Laplacian: return "laplacian";
  }
  return "?";
}

ProbeOperator probe_operator_from_string(const std::string& s) {
  if (s == "grushin") return ProbeOperator::Grushin;
  if (s == "p_operator") return ProbeOperator::POperator;
  if (s == "laplacian") return ProbeOperator::Laplacian;
  throw DomainError("unknown probe operator '" + s + "'");
}

double fit_growth_exponent(const std::vector<double>& widths, const std::vector<double>& norms) {
  if (widths.size() != norms.size() || widths.size() < 2) throw DomainError("need at least two (width, norm) pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(widths.size());
  for (std::size_t k = 0; k < widths.size(); ++k) {
    if (!(widths[k] > 0) || !(norms[k] > 0)) throw DomainError("widths and norms must be positive");
    double X = std::log(1.0 / widths[k]);
    double Y = std::log(norms[k]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RegularityProbeReport regularity_probe(ProbeOperator op, const grid::MeasureSpec& spec, double s,
                                       const std::vector<double>& widths, const Box& box) {
  if (!(s >= 0) || !std::isfinite(s)) throw DomainError("regularity index s must be >= 0");
  if (widths.size() < 2) throw DomainError("regularity probe needs at least two widths");
  for (std::size_t k = 1; k < widths.size(); ++k)
    if (!(widths[k] < widths[k - 1])) throw DomainError("widths must be strictly decreasing");

  RegularityProbeReport rep;
  rep.op = op;
  rep.widths = widths;
  rep.s = s;
  const grid::Region unit{-1, 1, -1, 1};
  for (double w : widths) {
    grid::MeasureSpec m = spec;
    m.width = w;
    GridField mu = grid::realize_measure(m, box);
    GridField u;
    switch (op) {
      case ProbeOperator::Grushin: u = solve_grushin(mu); break;
      case ProbeOperator::Laplacian: u = solve_laplacian(mu); break;
      case ProbeOperator::POperator: u = solve_p(grid::conical_partition(mu)[3], 0.25); break;
    }
    double nrm = grid::norm(u, grid::Norm::ws1(s), unit);
    if (!std::isfinite(nrm)) throw InternalError("regularity probe produced a non-finite norm");
    rep.norms.push_back(nrm);
  }
  rep.fitted_exponent = fit_growth_exponent(rep.widths, rep.norms);
  rep.bounded = rep.fitted_exponent < kBoundedSlope;
  return rep;
}

}  // namespace hypolab::solvers
