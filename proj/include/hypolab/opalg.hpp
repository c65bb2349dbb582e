#pragma once

// Differential operators in two variables (x, y) with polynomial coefficients,
// their principal symbols, and the bracket computations built on them.
//
// All arithmetic here is exact (complex rationals). Floating point enters only
// through evaluate() and the numerical rank/direction searches.

#include <array>
#include <compare>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypolab/rational.hpp"

namespace hypolab::opalg {

struct MultiIndex {
  int x = 0;
  int y = 0;
  int total() const noexcept { return x + y; }
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Polynomial in (x, y) with complex rational coefficients.
class PolyCoeff {
 public:
  using Terms = std::map<MultiIndex, CRational>;

  PolyCoeff() = default;
  PolyCoeff(CRational c);  // NOLINT(google-explicit-constructor)
  PolyCoeff(std::int64_t c) : PolyCoeff(CRational(c)) {}  // NOLINT(google-explicit-constructor)
  static PolyCoeff monomial(CRational c, int deg_x, int deg_y);
  static PolyCoeff x() { return monomial(1, 1, 0); }
  static PolyCoeff y() { return monomial(1, 0, 1); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  bool is_real() const noexcept;
  /// Coefficient of x^a y^b (zero if absent).
  CRational coeff(int deg_x, int deg_y) const;
  int degree() const noexcept;

  /// ∂_x^kx ∂_y^ky applied to the polynomial.
  PolyCoeff derivative(int kx, int ky) const;
  std::complex<double> evaluate(double x, double y) const;

  PolyCoeff& operator+=(const PolyCoeff& o);
  PolyCoeff& operator-=(const PolyCoeff& o);
  friend PolyCoeff operator+(PolyCoeff a, const PolyCoeff& b) { return a += b; }
  friend PolyCoeff operator-(PolyCoeff a, const PolyCoeff& b) { return a -= b; }
  friend PolyCoeff operator*(const PolyCoeff& a, const PolyCoeff& b);
  PolyCoeff operator-() const;
  friend bool operator==(const PolyCoeff&, const PolyCoeff&) = default;

  std::string to_string() const;

 private:
  void add_term(MultiIndex m, const CRational& c);
  Terms terms_;
};

/// Σ_α c_α(x,y) ∂_x^{α_x} ∂_y^{α_y}; coefficients stand to the left.
class DiffOp {
 public:
  using Terms = std::map<MultiIndex, PolyCoeff>;

  DiffOp() = default;
  static DiffOp identity() { return term(PolyCoeff(1), 0, 0); }
  static DiffOp dx() { return term(PolyCoeff(1), 1, 0); }
  static DiffOp dy() { return term(PolyCoeff(1), 0, 1); }
  static DiffOp term(PolyCoeff c, int order_x, int order_y);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Max |α| over stored terms; -1 for the zero operator.
  int order() const noexcept;
  PolyCoeff coeff(int order_x, int order_y) const;
  /// True when every coefficient of a derivative term is a constant.
  bool has_constant_coefficients() const noexcept;
  bool is_real() const noexcept;

  /// Apply to a polynomial (exact).
  PolyCoeff apply(const PolyCoeff& p) const;

  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  DiffOp operator-() const;
  /// Left multiplication by a coefficient: c · op.
  friend DiffOp operator*(const PolyCoeff& c, const DiffOp& op);
  friend bool operator==(const DiffOp&, const DiffOp&) = default;

 private:
  void add_term(MultiIndex m, const PolyCoeff& c);
  Terms terms_;
};

/// 2×2 matrix of operators; scalar operators occupy entry (0,0).
struct DiffOpMatrix {
  std::array<DiffOp, 4> entries{};
  bool scalar = false;

  static DiffOpMatrix from_scalar(DiffOp op);
  static DiffOpMatrix from_entries(DiffOp a11, DiffOp a12, DiffOp a21, DiffOp a22);

  const DiffOp& operator()(int row, int col) const { return entries[2 * row + col]; }
  DiffOp& operator()(int row, int col) { return entries[2 * row + col]; }
  std::size_t size() const noexcept { return scalar ? 1 : 2; }
  friend bool operator==(const DiffOpMatrix&, const DiffOpMatrix&) = default;
};

/// Polynomial in (x, y, ξ, η) with complex rational coefficients.
class SymbolPoly {
 public:
  using Exponents = std::array<int, 4>;  // x, y, ξ, η
  using Terms = std::map<Exponents, CRational>;
  enum Var { X = 0, Y = 1, Xi = 2, Eta = 3 };

  SymbolPoly() = default;
  SymbolPoly(CRational c);  // NOLINT(google-explicit-constructor)
  static SymbolPoly monomial(CRational c, Exponents e);
  static SymbolPoly var(Var v);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  SymbolPoly partial(Var v) const;
  /// Coefficient-wise real / imaginary part (variables are real).
  SymbolPoly real_part() const;
  SymbolPoly imag_part() const;
  std::complex<double> evaluate(double x, double y, double xi, double eta) const;

  SymbolPoly& operator+=(const SymbolPoly& o);
  SymbolPoly& operator-=(const SymbolPoly& o);
  friend SymbolPoly operator+(SymbolPoly a, const SymbolPoly& b) { return a += b; }
  friend SymbolPoly operator-(SymbolPoly a, const SymbolPoly& b) { return a -= b; }
  friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b);
  SymbolPoly operator-() const;
  friend bool operator==(const SymbolPoly&, const SymbolPoly&) = default;

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const CRational& c);
  Terms terms_;
};

// ---- parsing / printing ----------------------------------------------------

/// Parse the operator mini-language (see README for the grammar). Throws
/// ParseError with the byte offset on syntax errors, unknown identifiers and
/// non-polynomial coefficients.
DiffOpMatrix parse_operator(std::string_view text);
/// Convenience: parse and require a scalar operator.
DiffOp parse_scalar(std::string_view text);

std::string to_string(const DiffOp& op);
std::string to_string(const DiffOpMatrix& m);

// ---- algebra ---------------------------------------------------------------

/// a ∘ b, expanded by the Leibniz rule.
DiffOp compose(const DiffOp& a, const DiffOp& b);
/// a ∘ b − b ∘ a.
DiffOp commutator(const DiffOp& a, const DiffOp& b);
/// Matrix product of operator matrices (entrywise compose + sum).
DiffOpMatrix compose(const DiffOpMatrix& a, const DiffOpMatrix& b);

/// Σ_{|α|=m} c_α(x,y) (iξ)^{α_x} (iη)^{α_y}.
SymbolPoly principal_symbol(const DiffOp& op, int m);

/// {a,b} = ∂_ξa ∂_xb + ∂_ηa ∂_yb − ∂_xa ∂_ξb − ∂_ya ∂_ηb.
SymbolPoly poisson_bracket(const SymbolPoly& a, const SymbolPoly& b);

/// Principal symbol of a₁₁∘a₂₂ − a₁₂∘a₂₁ at order row_orders[0] + row_orders[1].
SymbolPoly det_symbol(const DiffOpMatrix& m, std::array<int, 2> row_orders);

struct Direction {
  double xi;
  double eta;
};

/// Unit directions (ξ,η) where |sym(base, ·)| < tol·max(max_circle |sym|, 1),
/// from uniform sampling with one Newton refinement per near-zero cluster.
std::vector<Direction> char_directions(const SymbolPoly& sym, std::array<double, 2> base, int n_dirs = 360,
                                       double tol = 1e-6);

struct HormanderResult {
  int rank = 0;
  std::optional<int> step;  // smallest bracket depth achieving rank 2
};

/// Span rank at `base` of the fields and their iterated brackets up to depth
/// max_step. Each field must be a real first-order operator with no
/// zero-order part (DomainError otherwise).
HormanderResult hormander_rank(const std::vector<DiffOp>& fields, std::array<double, 2> base, int max_step);

}  // namespace hypolab::opalg
