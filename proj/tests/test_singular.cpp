#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hypolab/error.hpp"
#include "hypolab/quadrature.hpp"
#include "hypolab/singular.hpp"

using namespace hypolab;
using namespace hypolab::singular;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

grid::Box residual_box() { return grid::Box::make(16.0, 16 * kPi, 256, 256); }

}  // namespace

TEST_CASE("quadrature rules") {
  auto r = quad::gauss_legendre(10);
  double s = 0;
  for (double w : r.weights) s += w;
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quad::apply_rule(r, [](double x) { return std::pow(x, 18); }, -1, 1) == doctest::Approx(2.0 / 19).epsilon(1e-13));
  auto g = quad::integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-13);
  CHECK(std::abs(g.value - std::sqrt(kPi)) < 1e-12);
}

TEST_CASE("closed form at reference points") {
  CounterexampleSolution sol(ChiSpec::indicator(0), 0.0);
  cplx v = eval_u1(sol, 1, 0);
  CHECK(std::abs(v - cplx(2.0, 0.0)) < 1e-14);
  CHECK(std::abs(eval_u1_quadrature(sol, 1, 0) - 2.0) < 1e-10);
  cplx expected = 1.0 / cplx(0.5, -1.0);
  CHECK(std::abs(eval_u1_quadrature(sol, 1, 1) - expected) < 1e-10);
  CHECK(std::abs(u1_closed_form(1, 1) - expected) < 1e-15);
  CHECK_THROWS_AS(eval_u1(sol, 0, 1), DomainError);
  CHECK_THROWS_AS(eval_u1_quadrature(sol, 0, 1), DomainError);

  CounterexampleSolution trunc(ChiSpec::indicator(0, kInfinity, 5.0), 0.0);
  CHECK(std::abs(eval_u1(trunc, 0, 0) - 5.0) < 1e-14);
}

TEST_CASE("closed form agrees with quadrature at random points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(0.2, 3.0), uy(-4.0, 4.0);
  CounterexampleSolution sol(ChiSpec::indicator(0), 0.0);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    double x = ux(rng), y = uy(rng);
    cplx exact = u1_closed_form(x, y);
    worst = std::max(worst, std::abs(eval_u1_quadrature(sol, x, y) - exact) / std::abs(exact));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("real chi gives conjugate symmetry in y") {
  CounterexampleSolution sol(ChiSpec::smooth_bump(1, 4), 0.0);
  for (double y : {0.3, 1.7, 4.0}) {
    cplx a = eval_u1(sol, 0.8, y), b = eval_u1(sol, 0.8, -y);
    CHECK(std::abs(a - std::conj(b)) < 1e-13);
  }
}

TEST_CASE("counterexample solves A u = 0 for every rotation") {
  grid::Box box = residual_box();
  double r0 = residual_au({ChiSpec::smooth_bump(1, 4), 0.0}, box);
  CHECK(r0 <= 1e-8);
  for (double th : {kPi / 3, kPi}) {
    double r = residual_au({ChiSpec::smooth_bump(1, 4), th}, box);
    CHECK(r <= 1e-8);
    CHECK(r == doctest::Approx(r0).epsilon(1e-6));
  }
  CHECK(residual_au({ChiSpec::smooth_bump(2, 5), 0.0}, box) <= 1e-8);
  CHECK_THROWS_AS(residual_au({ChiSpec::indicator(0, 4), 0.0}, box), DomainError);
}

TEST_CASE("grid realization has the prescribed y-spectrum") {
  grid::Box box = residual_box();
  CounterexampleSolution sol(ChiSpec::smooth_bump(1, 4), 0.0);
  grid::GridField u = realize_u1(sol, box);
  auto spec = grid::spectrum_y(u);
  double deta = 2 * kPi / box.Ly;
  double worst = 0;
  for (int i : {100, 128, 150}) {
    double x = box.x(i);
    for (int j = 0; j < box.Ny; ++j) {
      int m = grid::Box::signed_index(j, box.Ny);
      double sign = m % 2 == 0 ? 1 : -1;
      cplx got = spec[i * box.Ny + j] * sign / (deta * box.Ny);
      double eta = box.eta(j);
      worst = std::max(worst, std::abs(got - sol.chi(eta) * std::exp(-x * x * eta / 2)));
    }
  }
  CHECK(worst < 1e-6);
  // The grid field is the y-periodization of u₁.
  cplx images = 0;
  for (int k = -12; k <= 12; ++k) images += eval_u1(sol, box.x(140), box.y(130) + k * box.Ly);
  CHECK(std::abs(u.at(140, 130) - images) < 1e-8);
}

TEST_CASE("L2 growth follows the square root law") {
  auto rows = l2_growth({1, 2, 4, 8, 16, 32, 64});
  for (const auto& r : rows) CHECK(r.quadrature == doctest::Approx(r.reduced).epsilon(1e-7));
  CHECK(rows[2].quadrature / rows[0].quadrature == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(std::abs(growth_slope(rows) - 0.5) <= 0.01);
  CHECK_THROWS_AS(l2_growth({2, 1}), DomainError);

  ChiSpec bump = ChiSpec::smooth_bump(1, 2);
  double n0 = l2_norm_squared(bump);
  ChiSpec bump_trunc = bump;
  bump_trunc.lambda = 10.0;
  CHECK(std::isfinite(n0));
  CHECK(n0 > 0);
  CHECK(l2_norm_squared(bump_trunc) == n0);
  CHECK_THROWS_AS(l2_norm_squared(ChiSpec::indicator(0)), DomainError);
}

TEST_CASE("trace pairing identifies delta and principal value parts") {
  TracePair g = trace_pairing(20, TestFunction::gaussian());
  CHECK(std::abs(g.re_pair - kPi * 1.0) <= 1e-6);
  CHECK(std::abs(g.im_pair) <= 1e-10);

  // Oracle: the half-line integral of the Gaussian's transform over (0, Λ).
  TracePair g3 = trace_pairing(3, TestFunction::gaussian());
  CHECK(std::abs(g3.re_pair - kPi * std::erf(3 / std::sqrt(2.0))) < 1e-9);

  TracePair o = trace_pairing(20, TestFunction::odd_gaussian());
  CHECK(std::abs(o.re_pair) <= 1e-10);
  CHECK(std::abs(o.im_pair) > 0.1);
  // ⟨PV 1/y, y·e^{−y²/2}⟩ = √(2π): the PV constant is 1.
  CHECK(o.im_pair / std::sqrt(2 * kPi) == doctest::Approx(1.0).epsilon(1e-8));

  TracePair e = trace_pairing(20, TestFunction{1.0, {1.0, 0.0, 2.0}});
  CHECK(std::abs(e.im_pair) <= 1e-10);
}

TEST_CASE("chi validation and theta reduction") {
  CHECK_THROWS_AS(ChiSpec::indicator(2, 1), DomainError);
  CHECK_THROWS_AS(ChiSpec::indicator(-1, 1), DomainError);
  CHECK_THROWS_AS(ChiSpec::smooth_bump(1, kInfinity), DomainError);
  CounterexampleSolution s(ChiSpec::smooth_bump(1, 2), 7 * kPi);
  CHECK(s.theta == doctest::Approx(kPi));
  CHECK(ChiSpec::smooth_bump(1, 3)(2.0) == doctest::Approx(1.0));
  CHECK(ChiSpec::smooth_bump(1, 3)(1.0) == 0.0);
}
