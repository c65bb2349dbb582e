#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hypolab/error.hpp"
#include "hypolab/solvers.hpp"

using namespace hypolab;
using namespace hypolab::grid;
using namespace hypolab::solvers;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(const GridField& a, const GridField& b) { return norm(a - b, Norm::l2()) / norm(b, Norm::l2()); }

// Mean-zero in x, so the gauge does not touch it.
GridField profile(const Box& b) {
  return GridField::from_function(b, [](double x, double y) { return cplx((1 - x * x) * std::exp(-x * x / 2 - y * y / 2)); });
}

GridField p_target(const Box& b) {
  return GridField::from_function(b, [](double x, double y) { return std::exp(-x * x / 2 - y * y / 2) * std::exp(cplx(0, -8 * y)); });
}

GridField second_component(const Box& b) {
  return GridField::from_function(b, [](double x, double y) { return cplx(x * (1 + y) * std::exp(-x * x / 2 - y * y / 2)); });
}

const opalg::DiffOp G = opalg::parse_scalar("dx^2 + x^2*dy^2");
const opalg::DiffOp P = opalg::parse_scalar("dx - i*x*dy");
const opalg::DiffOpMatrix A = opalg::parse_operator("[[dx, x*dy], [-x*dy, dx]]");
const opalg::DiffOpMatrix M = opalg::parse_operator("[[dx, dy], [-x^2*dy, dx]]");

double grushin_error(int n) {
  Box b = Box::square(4 * kPi, n);
  GridField u = profile(b);
  return rel(solve_grushin(apply_diffop(G, u)), u);
}

double p_error(int n) {
  Box b = Box::square(4 * kPi, n);
  GridField nu = p_target(b);
  return rel(solve_p(apply_diffop(P, nu), 0.25), nu);
}

}  // namespace

TEST_CASE("grushin manufactured solution converges at second order") {
  double e256 = grushin_error(256);
  double e512 = grushin_error(512);
  CHECK(e256 <= 2e-3);
  CHECK(e256 / e512 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("grushin zero forcing and mode decoupling") {
  Box b = Box::square(4 * kPi, 64);
  SolveDiagnostics d;
  CHECK(solve_grushin(GridField::zeros(b), {}, &d).max_abs() == 0.0);
  CHECK(d.residual == 0.0);

  const double eta0 = b.eta(3);
  GridField f = GridField::from_function(
      b, [eta0](double x, double y) { return (1 - x * x) * std::exp(-x * x / 2) * std::exp(cplx(0, eta0 * y)); });
  auto spec = spectrum_y(solve_grushin(f));
  double peak = 0, leak = 0;
  for (int i = 0; i < b.Nx; ++i)
    for (int j = 0; j < b.Ny; ++j) {
      double a = std::abs(spec[i * b.Ny + j]);
      (j == 3 ? peak : leak) = std::max(j == 3 ? peak : leak, a);
    }
  CHECK(peak > 1e-3);
  CHECK(leak < 1e-12 * peak);
}

TEST_CASE("grushin slices match a dense finite-difference solve") {
  Box b = Box::square(4 * kPi, 32);
  GridField f = GridField::from_function(b, [](double x, double y) {
    return cplx(std::exp(-(x - 0.5) * (x - 0.5) - y * y), std::sin(y) * std::exp(-x * x));
  });
  auto fs = spectrum_y(f);
  auto us = spectrum_y(solve_grushin(f));
  const int n = b.Nx;
  const double h = b.hx();
  for (int j = 1; j < b.Ny; ++j) {
    double eta = b.eta(j);
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) {
      double x = b.x(i);
      T(i, i) = -2 / (h * h) - x * x * eta * eta;
      T(i, (i + 1) % n) += 1 / (h * h);
      T(i, (i + n - 1) % n) += 1 / (h * h);
      rhs(i) = fs[i * b.Ny + j];
    }
    Eigen::VectorXcd ref = T.partialPivLu().solve(rhs);
    double err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(ref(i) - us[i * b.Ny + j]));
    CHECK(err < 1e-10 * (1 + ref.cwiseAbs().maxCoeff()));
  }
  // η = 0 slice: discrete u'' equals the mean-free forcing.
  cplx mean = 0;
  for (int i = 0; i < n; ++i) mean += fs[i * b.Ny];
  mean /= n;
  for (int i = 0; i < n; ++i) {
    cplx lap = (us[((i + 1) % n) * b.Ny] - 2.0 * us[i * b.Ny] + us[((i + n - 1) % n) * b.Ny]) / (h * h);
    CHECK(std::abs(lap - (fs[i * b.Ny] - mean)) < 1e-9 * (1 + std::abs(fs[i * b.Ny])));
  }
}

TEST_CASE("solvers are linear") {
  Box b = Box::square(4 * kPi, 64);
  GridField f = profile(b);
  GridField g = p_target(b);
  cplx a(1.5, -0.5), c(-2.0, 0.25);
  GridField lhs = solve_grushin(a * f + c * g);
  GridField rhs = a * solve_grushin(f) + c * solve_grushin(g);
  CHECK((lhs - rhs).max_abs() < 1e-10 * (1 + rhs.max_abs()));
  GridField lp = solve_p(a * f + c * g, 0.2);
  GridField rp = a * solve_p(f, 0.2) + c * solve_p(g, 0.2);
  CHECK((lp - rp).max_abs() < 1e-10 * (1 + rp.max_abs()));
}

TEST_CASE("solve_p manufactured solution") {
  double e256 = p_error(256);
  double e512 = p_error(512);
  CHECK(e256 <= 1e-3);
  CHECK(e256 / e512 == doctest::Approx(4.0).epsilon(0.125));

  Box b = Box::square(4 * kPi, 128);
  SolveDiagnostics d;
  solve_p(apply_diffop(P, p_target(b)), 0.1, &d);
  CHECK(d.off_cone_energy < 1e-12);
  CHECK(d.residual < 1e-2);
}

TEST_CASE("solve_p zero forcing and delta range") {
  Box b = Box::square(4 * kPi, 32);
  CHECK(solve_p(GridField::zeros(b), 0.0).max_abs() == 0.0);
  CHECK_THROWS_AS(solve_p(GridField::zeros(b), 0.5), DomainError);
  CHECK_THROWS_AS(solve_p(GridField::zeros(b), -0.1), DomainError);
}

TEST_CASE("solve_p single mode matches the integrating-factor formula") {
  Box b = Box::square(4 * kPi, 128);
  const double eta0 = b.eta(b.Ny - 5);  // negative
  REQUIRE(eta0 < 0);
  GridField F = GridField::from_function(b, [eta0](double, double y) { return std::exp(cplx(0, eta0 * y)); });
  GridField nu = solve_p(F, 0.3);
  // Closed form: ν̂(x) = −∫_x^{L/2} e^{(x'²−x²)η/2} dx' for x ≥ 0, ∫_{−L/2}^x … for x < 0.
  const double a = std::sqrt(-eta0 / 2);
  const double edge = b.Lx / 2;
  double worst = 0;
  for (int i = 0; i < b.Nx; ++i) {
    double x = b.x(i);
    double ax = std::abs(x);
    double mag = std::exp(a * a * ax * ax) * std::sqrt(kPi) / (2 * a) * (std::erfc(a * ax) - std::erfc(a * edge));
    double expected = x >= 0 ? -mag : mag;
    cplx got = nu.at(i, 7) * std::exp(cplx(0, -eta0 * b.y(7)));
    worst = std::max(worst, std::abs(got - expected));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("polarized reduction recovers the potential") {
  Box b = Box::square(8 * kPi, 256);
  GridField v = profile(b);
  for (auto [l1, l2] : {std::pair{0.6, 0.8}, std::pair{1.0, 0.0}}) {
    auto f = apply_diffop(A, {cplx(l1) * v, cplx(l2) * v});
    PolarizedResult r = polarized_reduction({l1, l2, f[0], f[1]});
    CHECK(rel(r.v, v) <= 1e-6);
    CHECK(r.residual_dx <= 1e-6);
    CHECK(r.residual_xdy <= 1e-6);
  }
  PolarizedResult z = polarized_reduction({0.6, 0.8, GridField::zeros(b), GridField::zeros(b)});
  CHECK(z.v.max_abs() == 0.0);
  CHECK_THROWS_AS(polarized_reduction({0.6, 0.81, v, v}), DomainError);
}

TEST_CASE("cofactor identity for the hypoelliptic system") {
  auto C = opalg::parse_operator("[[dx, -dy], [x^2*dy, dx]]");
  auto CM = opalg::compose(C, M);
  CHECK(CM(0, 0) == G);
  CHECK(CM(0, 1).is_zero());
  CHECK(CM(1, 0) == opalg::parse_scalar("-2*x*dy"));
  CHECK(CM(1, 1) == G);
}

TEST_CASE("hypoelliptic system manufactured round trip") {
  Box b = Box::square(4 * kPi, 256);
  GridField u1 = profile(b);
  GridField u2 = second_component(b);
  auto f = apply_diffop(M, {u1, u2});
  HypoSystemResult r = solve_hypo_system(f[0], f[1]);
  CHECK(rel(r.u1, u1) <= 5e-3);
  CHECK(rel(r.u2, u2) <= 5e-3);
  CHECK(r.residual <= 5e-3);

  HypoSystemResult z = solve_hypo_system(GridField::zeros(b), GridField::zeros(b));
  CHECK(z.u1.max_abs() == 0.0);
  CHECK(z.u2.max_abs() == 0.0);
}

TEST_CASE("hypoelliptic system keeps H1 data in H1") {
  auto h1_norms = [](int n) {
    Box b = Box::square(4 * kPi, n);
    GridField f1 = apply_multiplier(realize_measure(MeasureSpec::point_atom(0.5), b), JapaneseBracket{-1});
    GridField f2 = apply_multiplier(realize_measure(MeasureSpec::point_atom(0.5, 1.0, 0.7, -0.4), b), JapaneseBracket{-1});
    HypoSystemResult r = solve_hypo_system(f1, f2);
    return std::pair{norm(r.u1, Norm::hs(1)), norm(r.u2, Norm::hs(1))};
  };
  auto [a1, a2] = h1_norms(256);
  auto [b1, b2] = h1_norms(512);
  CHECK(std::isfinite(a1));
  CHECK(std::isfinite(a2));
  CHECK(std::abs(b1 / a1 - 1) < 0.05);
  CHECK(std::abs(b2 / a2 - 1) < 0.05);
}

TEST_CASE("growth exponent fit") {
  std::vector<double> w{0.4, 0.2, 0.1, 0.05};
  std::vector<double> n;
  for (double x : w) n.push_back(3.0 * std::pow(x, -0.25));
  CHECK(fit_growth_exponent(w, n) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(fit_growth_exponent({0.1}, {1.0}), DomainError);
}

TEST_CASE("regularity probe") {
  Box b = Box::square(2 * kPi, 256);
  const std::vector<double> w{0.4, 0.2, 0.1, 0.05};
  auto atom = MeasureSpec::point_atom(0.1);

  auto lap_ok = regularity_probe(ProbeOperator::Laplacian, atom, 1.5, w, b);
  CHECK(lap_ok.bounded);
  auto lap_bad = regularity_probe(ProbeOperator::Laplacian, atom, 2.5, w, b);
  CHECK(lap_bad.fitted_exponent >= 0.4);
  CHECK_FALSE(lap_bad.bounded);

  for (double s : {0.0, 0.45}) {
    auto r = regularity_probe(ProbeOperator::Grushin, atom, s, w, b);
    CHECK(r.bounded);
    CHECK(r.norms.size() == w.size());
  }
  // The coarsest width still carries mollifier bias; finer widths isolate the growth.
  Box fine = Box::square(2 * kPi, 512);
  auto r0 = regularity_probe(ProbeOperator::Grushin, atom, 0.0, {0.2, 0.1, 0.05, 0.025}, fine);
  CHECK(r0.fitted_exponent <= 0.02);

  auto p0 = regularity_probe(ProbeOperator::POperator, MeasureSpec::line_on_x0(0.1), 0.0, w, b);
  CHECK(p0.bounded);

  CHECK_THROWS_AS(regularity_probe(ProbeOperator::Grushin, atom, 0.0, {0.1, 0.2}, b), DomainError);
  CHECK_THROWS_AS(regularity_probe(ProbeOperator::Grushin, atom, -1.0, w, b), DomainError);
  CHECK_THROWS_AS(regularity_probe(ProbeOperator::Grushin, atom, 0.0, {0.1, 0.01}, b), DomainError);
  CHECK(probe_operator_from_string(to_string(ProbeOperator::POperator)) == ProbeOperator::POperator);
}
