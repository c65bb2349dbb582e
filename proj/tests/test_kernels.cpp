#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hypolab/error.hpp"
#include "hypolab/kernels.hpp"
#include "hypolab/quadrature.hpp"

using namespace hypolab;
using namespace hypolab::kernels;

namespace {

const KernelParams kBase{16, 8, 0.25};

}  // namespace

TEST_CASE("empty window and indicator structure") {
  KernelParams k{8, 8, 0.25};
  CHECK(eval_kernel(k, 0.3, 0, 0.6, 0.1) == cplx(0));
  CHECK(eval_kernel(kBase, 0.6, 0, 0.3, 0.1) == cplx(0));
  CHECK(eval_kernel(kBase, -0.2, 0, 0.3, 0.1) == cplx(0));
  CHECK(eval_kernel(kBase, 0.3, 0, 1.2, 0.1) == cplx(0));
  CHECK(std::abs(eval_kernel(kBase, 0.3, 0, 0.6, 0.1)) > 0);
  CHECK(KernelParams::phi(0.5) == 1.0);
  CHECK(KernelParams::phi(2.5) == 0.0);
  CHECK(kBase.chi(-12) == doctest::Approx(1.0));
  CHECK(kBase.chi(-17.5) == 0.0);
  CHECK(kBase.chi(-7.5) == 0.0);
  CHECK_THROWS_AS((KernelParams{8, 16, 0.25}).validate(), DomainError);
  CHECK_THROWS_AS((KernelParams{16, 8, 0.5}).validate(), DomainError);
}

TEST_CASE("translation invariance in y") {
  cplx a = eval_kernel(kBase, 0.3, 0.2, 0.6, -0.4);
  for (double s : {0.5, -1.1, 1.7}) CHECK(std::abs(eval_kernel(kBase, 0.3, 0.2 + s, 0.6, -0.4 + s) - a) <= 1e-12 * std::abs(a) + 1e-15);
}

TEST_CASE("panel refinement") {
  for (auto [x, y, xp, yp] : {std::array{0.3, 0.0, 0.6, 0.1}, std::array{0.01, 1.5, 0.02, -1.9}, std::array{0.5, -1.0, 0.99, 1.0}}) {
    cplx a = eval_kernel(kBase, x, y, xp, yp), b = eval_kernel(kBase, x, y, xp, yp, 2);
    CHECK(std::abs(a - b) <= 1e-9 * std::max(std::abs(b), 1e-12));
  }
}

TEST_CASE("FFT table matches direct quadrature") {
  KernelL1 l1(kBase);
  double worst = 0;
  for (double d : {1e-5, 0.003, 0.1, 0.7})
    for (double Y : {0.0, 0.05, 0.4, -1.3, 3.2}) {
      double ref = std::abs(eval_kernel_dY(kBase, d, Y));
      double got = l1.table_abs(d, Y);
      worst = std::max(worst, std::abs(got - ref) / std::max(ref, 1e-3));
      MESSAGE(d << " " << Y << " " << ref << " " << got);
    }
  CHECK(worst < 1e-2);
}

TEST_CASE("L1 table agrees with a direct nested quadrature") {
  KernelParams k{16, 8, 0.25};
  double xp = 0.37, yp = -0.1;
  auto inner = [&](double x) {
    double d = xp * xp - x * x;
    auto fy = [&](double y) { return std::abs(eval_kernel_dY(k, d, y - yp)); };
    return quad::integrate_panels(fy, -2.0, 2.0, 24, 1e-7, 1e-6).value;
  };
  double direct = quad::integrate_panels([&](double u) { return xp * inner(xp * (1 - u)); }, 0.0, 1.0, 8, 1e-6, 1e-5).value;
  CHECK(KernelL1(k).norm(xp, yp).total == doctest::Approx(direct).epsilon(2e-3));
}

TEST_CASE("three regions add up to the total") {
  for (double dl : {0.0, 0.25, 0.45}) {
    KernelL1 l1({32, 16, dl});
    for (auto [xp, yp] : {std::pair{0.7, 0.3}, std::pair{0.2, -1.5}, std::pair{0.999, 0.0}}) {
      L1Split s = l1.norm(xp, yp);
      CHECK(s.total > 0);
      CHECK(std::abs(s.inner + s.middle + s.outer - s.total) <= 1e-6 * s.total);
    }
  }
  L1Split z = KernelL1({8, 8, 0.25}).norm(0.5, 0);
  CHECK(z.total == 0.0);
}

TEST_CASE("pointwise bounds with fitted constants") {
  BoundFit f = verify_pointwise_bounds({32, 16, 0.25}, 1000);
  CHECK(f.violations == 0);
  CHECK(f.samples == 1000);
  for (double c : {f.c0, f.c1, f.c2}) {
    CHECK(std::isfinite(c));
    CHECK(c > 0);
  }
  // The e^{-p d} variant needs constants of order e^{(p - q/2) d}.
  CHECK(f.c0_p > 1e3 * f.c0);

  BoundFit e = verify_pointwise_bounds({16, 16, 0.25}, 200);
  CHECK(e.c0 == 0.0);
  CHECK(e.c1 == 0.0);
  CHECK(e.c2 == 0.0);
  CHECK(e.violations == 0);
  CHECK_THROWS_AS(verify_pointwise_bounds(kBase, 50), DomainError);
}

TEST_CASE("second bound dominates for separated y") {
  // The unit-width ramps of the window are resolved only beyond |Y| ~ 8; below
  // that |K| ~ 1/|Y| and the ratio to the second bound still grows.
  KernelParams k{32, 16, 0.25};
  for (double d : {0.05, 0.2, 0.6}) {
    double r1 = std::abs(eval_kernel_dY(k, d, 1.0)) / bound_rhs(k, 2, d, 1.0);
    double r8 = std::abs(eval_kernel_dY(k, d, 8.0)) / bound_rhs(k, 2, d, 8.0);
    CHECK(r8 > r1);
    double prev = 1e300;
    for (double Y : {8.0, 16.0, 32.0, 64.0, 128.0}) {
      double r = std::abs(eval_kernel_dY(k, d, Y)) / bound_rhs(k, 2, d, Y);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("narrower window gives a smaller norm") {
  KernelQuadrature qd;
  double prev = 1e300;
  for (double q : {8.0, 16.0, 24.0}) {
    KernelL1 l1({32, q, 0.25});
    double n = std::max({l1.norm(0.25, 0.3).total, l1.norm(0.5, 0.0).total, l1.norm(0.9, -1.0).total});
    CHECK(n < prev);
    prev = n;
  }
}

TEST_CASE("pointwise monotonicity in q") {
  // Checked on a fixed sample with |Y| small against the oscillation scale.
  int worse = 0, total = 0;
  for (double d : {0.01, 0.05, 0.2, 0.6})
    for (double Y : {0.0, 0.01, 0.03}) {
      double prev = 1e300;
      for (double q : {8.0, 16.0, 24.0}) {
        double v = std::abs(eval_kernel_dY({32, q, 0.25}, d, Y));
        worse += v > prev;
        prev = v;
        ++total;
      }
    }
  CHECK(worse == 0);
  CHECK(total == 36);
}

TEST_CASE("decay tables") {
  DecayTable t0 = decay_study({4, 8, 16, 32, 64}, 0.5, 0.0, {});
  REQUIRE(t0.rows.size() == 5);
  for (std::size_t i = 1; i < t0.rows.size(); ++i) CHECK(t0.rows[i].sup_l1 < t0.rows[i - 1].sup_l1);

  // With δ = 1/4 the sup first grows (the maximiser sits at x' ~ p^{-1/2},
  // giving roughly p^{δ-1/2} log p) and decays only from p = 16 on.
  DecayTable t = decay_study({4, 8, 16, 32, 64}, 0.5, 0.25, {});
  CHECK(t.rows[1].sup_l1 > t.rows[0].sup_l1);
  for (std::size_t i = 3; i < t.rows.size(); ++i) CHECK(t.rows[i].sup_l1 < t.rows[i - 1].sup_l1);
  for (const auto& r : t.rows) {
    CHECK(r.q == 0.5 * r.p);
    CHECK(r.samples >= 64);
    CHECK(std::isfinite(r.sup_l1));
  }

  std::string csv = t.to_csv();
  CHECK(csv.rfind("p,q,delta,sup_l1,samples\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK_THROWS_AS(decay_study({8, 4}, 0.5, 0.25, {}), DomainError);
  CHECK_THROWS_AS(decay_study({4, 8}, 0.5, 0.25, {}, 10), DomainError);
}

TEST_CASE("table entries are stable under refinement") {
  KernelQuadrature fine = KernelQuadrature{}.refined();
  for (double p : {8.0, 64.0}) {
    KernelParams k{p, p / 2, 0.25};
    KernelL1 a(k), b(k, fine);
    for (auto [xp, yp] : {std::pair{0.2, 0.1}, std::pair{0.9, 0.0}}) {
      double x = a.norm(xp, yp).total, y = b.norm(xp, yp).total;
      CHECK(std::abs(x - y) <= 0.01 * y);
    }
  }
}
