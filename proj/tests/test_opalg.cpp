#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hypolab/error.hpp"
#include "hypolab/opalg.hpp"

using namespace hypolab;
using namespace hypolab::opalg;

namespace {

const PolyCoeff X = PolyCoeff::x();
const PolyCoeff Y = PolyCoeff::y();
const DiffOp Dx = DiffOp::dx();
const DiffOp Dy = DiffOp::dy();

SymbolPoly sym_var(SymbolPoly::Var v) { return SymbolPoly::var(v); }

// Random generators for the property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  CRational coeff(bool real_only = false) {
    Rational re(uniform(-4, 4), uniform(1, 3));
    Rational im = real_only ? Rational(0) : Rational(uniform(-2, 2), uniform(1, 2));
    return {re, im};
  }
  PolyCoeff poly(int max_deg, bool real_only = false) {
    PolyCoeff p;
    int n = uniform(1, 3);
    for (int k = 0; k < n; ++k) p += PolyCoeff::monomial(coeff(real_only), uniform(0, max_deg), uniform(0, max_deg));
    return p;
  }
  DiffOp op(int max_order) {
    DiffOp d;
    int n = uniform(1, 3);
    for (int k = 0; k < n; ++k) {
      int ox = uniform(0, max_order);
      int oy = uniform(0, max_order - ox);
      d += DiffOp::term(poly(2), ox, oy);
    }
    return d;
  }
  /// Real first-order field with no zero-order part.
  DiffOp field() {
    return DiffOp::term(poly(2, true), 1, 0) + DiffOp::term(poly(2, true), 0, 1);
  }
};

std::vector<PolyCoeff> test_polys() {
  return {X * Y, X * X * Y, Y * Y * Y + X, PolyCoeff(3) + X * X * Y * Y};
}

}  // namespace

TEST_CASE("parse_operator: Grushin operator") {
  DiffOp g = parse_scalar("dx^2 + x^2*dy^2");
  CHECK(g.terms().size() == 2);
  CHECK(g.coeff(2, 0) == PolyCoeff(1));
  CHECK(g.coeff(0, 2) == X * X);
  CHECK(g.order() == 2);
  CHECK(parse_operator("dx^2 + x^2*dy^2").scalar);
}

TEST_CASE("parse_operator: single token and literals") {
  CHECK(parse_scalar("dx") == Dx);
  CHECK(parse_scalar("  dx  ") == Dx);
  CHECK(parse_scalar("0.25*x") == DiffOp::term(PolyCoeff::monomial(Rational(1, 4), 1, 0), 0, 0));
  CHECK(parse_scalar("dx - i*x*dy") == Dx - PolyCoeff(CRational::i()) * (X * Dy));
  CHECK(parse_scalar("x^0*dx^1") == Dx);
  CHECK(parse_scalar("(1 + x)*dy") == Dy + X * Dy);
  CHECK(parse_scalar("2/3*dx") == PolyCoeff(CRational(Rational(2, 3))) * Dx);
}

TEST_CASE("parse_operator: matrix syntax") {
  DiffOpMatrix a = parse_operator("[[dx, x*dy], [-x*dy, dx]]");
  CHECK_FALSE(a.scalar);
  CHECK(a(0, 0) == Dx);
  CHECK(a(0, 1) == X * Dy);
  CHECK(a(1, 0) == -(X * Dy));
  CHECK(a(1, 1) == Dx);
}

TEST_CASE("parse_operator: errors carry positions") {
  SUBCASE("non-polynomial coefficient") {
    try {
      parse_operator("dx + 1/x*dy");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("non-polynomial") != std::string::npos);
      CHECK(e.position() == 7);
    }
  }
  SUBCASE("unknown identifier") {
    try {
      parse_operator("dx + dz");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("unknown identifier 'dz'") != std::string::npos);
      CHECK(e.position() == 5);
    }
  }
  CHECK_THROWS_AS(parse_operator("dx +"), ParseError);
  CHECK_THROWS_AS(parse_operator("dx * x"), ParseError);  // coefficient right of a derivative
  CHECK_THROWS_AS(parse_operator("2^3"), ParseError);
  CHECK_THROWS_AS(parse_operator("x^-1"), ParseError);
  CHECK_THROWS_AS(parse_operator("[[dx, dy], [dx]]"), ParseError);
  CHECK_THROWS_AS(parse_operator("dx)"), ParseError);
  CHECK_THROWS_AS(parse_operator("dx/0"), ParseError);
}

TEST_CASE("compose: Leibniz expansion against the apply oracle") {
  DiffOp xdy = X * Dy;
  DiffOp expected = DiffOp::term(X, 1, 1) + Dy;
  CHECK(compose(Dx, xdy) == expected);
  CHECK(compose(Dx, Dy) == DiffOp::term(PolyCoeff(1), 1, 1));
  CHECK(compose(xdy, xdy) == DiffOp::term(X * X, 0, 2));
  for (const PolyCoeff& p : test_polys()) {
    CHECK(compose(Dx, xdy).apply(p) == Dx.apply(xdy.apply(p)));
    CHECK(expected.apply(p) == Dx.apply(xdy.apply(p)));
    CHECK(compose(xdy, xdy).apply(p) == xdy.apply(xdy.apply(p)));
  }
}

TEST_CASE("commutator examples") {
  CHECK(commutator(Dx, X * Dy) == Dy);
  CHECK(commutator(Dx, Dy).is_zero());
  DiffOp a = X * Dy, b = (X * X) * Dy;
  CHECK(commutator(a, b).is_zero());
  for (const PolyCoeff& p : test_polys()) CHECK(a.apply(b.apply(p)) == b.apply(a.apply(p)));
}

TEST_CASE("principal_symbol examples") {
  using V = SymbolPoly::Var;
  SymbolPoly xi = sym_var(V::Xi), eta = sym_var(V::Eta), x = sym_var(V::X);
  DiffOp g = parse_scalar("dx^2 + x^2*dy^2");
  CHECK(principal_symbol(g, 2) == -(xi * xi) - x * x * eta * eta);
  CHECK(principal_symbol(DiffOp::term(PolyCoeff(7), 0, 0), 0) == SymbolPoly(7));
  DiffOp p = parse_scalar("dx - i*x*dy");
  SymbolPoly ixi = SymbolPoly(CRational::i()) * xi;
  CHECK(principal_symbol(p, 1) == ixi + x * eta);
  CHECK(principal_symbol(g, 3).is_zero());
}

TEST_CASE("poisson_bracket examples and Hyp P sign") {
  using V = SymbolPoly::Var;
  SymbolPoly xi = sym_var(V::Xi), eta = sym_var(V::Eta), x = sym_var(V::X);
  CHECK(poisson_bracket(x * eta, xi) == -eta);
  CHECK(poisson_bracket(xi, eta).is_zero());
  CHECK(poisson_bracket(xi, x) == SymbolPoly(1));

  SymbolPoly p = principal_symbol(parse_scalar("dx - i*x*dy"), 1);
  SymbolPoly bracket = poisson_bracket(p.real_part(), p.imag_part());
  CHECK(bracket == -eta);
  CHECK(bracket.evaluate(0, 2, 0, -1).real() > 0);
  CHECK(bracket.evaluate(0, 2, 0, 1).real() < 0);
}

TEST_CASE("det_symbol examples") {
  using V = SymbolPoly::Var;
  SymbolPoly xi = sym_var(V::Xi), eta = sym_var(V::Eta), x = sym_var(V::X);
  SymbolPoly g = principal_symbol(parse_scalar("dx^2 + x^2*dy^2"), 2);
  DiffOpMatrix a = parse_operator("[[dx, x*dy], [-x*dy, dx]]");
  // The operator determinant of A is G itself, so its symbol is g.
  CHECK(det_symbol(a, {1, 1}) == g);
  CHECK(det_symbol(DiffOpMatrix::from_entries(Dx, DiffOp(), DiffOp(), Dy), {1, 1}) == -(xi * eta));
  DiffOpMatrix sys = parse_operator("[[dx, dy], [-x^2*dy, dx]]");
  CHECK(det_symbol(sys, {1, 1}) == -(xi * xi) - x * x * eta * eta);
}

TEST_CASE("char_directions examples") {
  SymbolPoly g = principal_symbol(parse_scalar("dx^2 + x^2*dy^2"), 2);
  CHECK(char_directions(g, {1, 0}, 360, 1e-9).empty());
  auto dirs = char_directions(g, {0, 5}, 360, 1e-6);
  REQUIRE(dirs.size() == 2);
  std::sort(dirs.begin(), dirs.end(), [](auto a, auto b) { return a.eta < b.eta; });
  CHECK(std::abs(dirs[0].xi) < 1e-6);
  CHECK(dirs[0].eta == doctest::Approx(-1.0));
  CHECK(std::abs(dirs[1].xi) < 1e-6);
  CHECK(dirs[1].eta == doctest::Approx(1.0));
  SymbolPoly lap = principal_symbol(parse_scalar("dx^2 + dy^2"), 2);
  for (double bx : {-2.0, 0.0, 3.0}) CHECK(char_directions(-lap, {bx, 1.0}).empty());
  // Odd sample count: no sample hits the exact zero; refinement moves the
  // direction closer than the nearest sample (offset 8.7e-3 rad).
  auto odd = char_directions(g, {0, 0}, 361, 1e-3);
  REQUIRE(odd.size() == 2);
  for (auto d : odd) CHECK(std::abs(d.xi) < 5e-3);
  CHECK_THROWS_AS(char_directions(g, {0, 0}, 4, 1e-6), DomainError);
}

TEST_CASE("hormander_rank examples") {
  std::vector<DiffOp> fields{Dx, X * Dy};
  auto at0 = hormander_rank(fields, {0, 0}, 3);
  CHECK(at0.rank == 2);
  CHECK(at0.step == 2);
  auto at1 = hormander_rank(fields, {1, 0}, 3);
  CHECK(at1.rank == 2);
  CHECK(at1.step == 1);
  auto single = hormander_rank({Dx}, {0.3, -2}, 4);
  CHECK(single.rank == 1);
  CHECK_FALSE(single.step.has_value());
  auto shallow = hormander_rank(fields, {0, 0}, 1);
  CHECK(shallow.rank == 1);
  CHECK_FALSE(shallow.step.has_value());
  CHECK_THROWS_AS(hormander_rank({Dx + DiffOp::identity()}, {0, 0}, 2), DomainError);
  CHECK_THROWS_AS(hormander_rank({DiffOp::term(PolyCoeff(1), 2, 0)}, {0, 0}, 2), DomainError);
  CHECK_THROWS_AS(hormander_rank({PolyCoeff(CRational::i()) * Dx}, {0, 0}, 2), DomainError);
  // Step-3 family: {dx, x^2 dy} needs two brackets at x = 0.
  auto step3 = hormander_rank({Dx, (X * X) * Dy}, {0, 1}, 3);
  CHECK(step3.rank == 2);
  CHECK(step3.step == 3);
}

TEST_CASE("hormander_rank invariant under invertible constant recombination") {
  std::vector<DiffOp> fields{Dx, X * Dy};
  std::vector<DiffOp> mixed{Dx + PolyCoeff(2) * (X * Dy), PolyCoeff(3) * Dx - X * Dy};
  for (std::array<double, 2> base : {std::array<double, 2>{0, 0}, {1, 0}, {-0.5, 2}}) {
    auto a = hormander_rank(fields, base, 3);
    auto b = hormander_rank(mixed, base, 3);
    CHECK(a.rank == b.rank);
    CHECK(a.step == b.step);
  }
}

TEST_CASE("property: commutator antisymmetry") {
  Gen gen(1234);
  for (int k = 0; k < 120; ++k) {
    DiffOp a = gen.op(2), b = gen.op(2);
    CHECK(commutator(a, b) == -commutator(b, a));
  }
}

TEST_CASE("property: Jacobi identity on random real fields") {
  Gen gen(99);
  for (int k = 0; k < 100; ++k) {
    DiffOp a = gen.field(), b = gen.field(), c = gen.field();
    DiffOp j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
    CHECK(j.is_zero());
  }
}

TEST_CASE("property: symbol is multiplicative at top order") {
  Gen gen(7);
  for (int k = 0; k < 100; ++k) {
    DiffOp a = gen.op(2), b = gen.op(2);
    int ma = a.order(), mb = b.order();
    CHECK(principal_symbol(compose(a, b), ma + mb) == principal_symbol(a, ma) * principal_symbol(b, mb));
  }
}

TEST_CASE("property: symbol of a commutator is the Poisson bracket over i") {
  Gen gen(2024);
  for (int k = 0; k < 100; ++k) {
    DiffOp a = gen.op(1), b = gen.op(1);
    if (a.order() != 1 || b.order() != 1) continue;
    SymbolPoly lhs = principal_symbol(commutator(a, b), 1);
    SymbolPoly rhs = SymbolPoly(CRational(Rational(0), Rational(-1))) *
                     poisson_bracket(principal_symbol(a, 1), principal_symbol(b, 1));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("property: parse(print(op)) is the identity") {
  Gen gen(555);
  for (int k = 0; k < 150; ++k) {
    DiffOp a = gen.op(3);
    std::string text = to_string(a);
    CAPTURE(text);
    CHECK(parse_scalar(text) == a);
  }
  DiffOpMatrix m = DiffOpMatrix::from_entries(gen.op(2), gen.op(1), DiffOp(), gen.op(2));
  CHECK(parse_operator(to_string(m)) == m);
  CHECK(to_string(parse_scalar("dx^2 + x^2*dy^2")) == "dx^2 + x^2*dy^2");
}
