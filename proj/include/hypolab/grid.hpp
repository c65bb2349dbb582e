#pragma once

// Periodic rectangular grids and the spectral machinery on them.
//
// A Box covers [-Lx/2, Lx/2) × [-Ly/2, Ly/2) with Nx × Ny nodes. Fields are
// stored row-major with the x index as the row, so y is contiguous.

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hypolab/opalg.hpp"

namespace hypolab::grid {

using cplx = std::complex<double>;

struct Box {
  double Lx = 16.0 * 3.14159265358979323846;
  double Ly = 16.0 * 3.14159265358979323846;
  int Nx = 256;
  int Ny = 256;

  /// Validated constructor: positive lengths, power-of-two sizes ≥ 16.
  static Box make(double Lx, double Ly, int Nx, int Ny);
  static Box square(double L, int N) { return make(L, L, N, N); }

  void validate() const;
  double hx() const noexcept { return Lx / Nx; }
  double hy() const noexcept { return Ly / Ny; }
  double x(int i) const noexcept { return -0.5 * Lx + i * hx(); }
  double y(int j) const noexcept { return -0.5 * Ly + j * hy(); }
  /// Signed lattice index in FFT order: 0..N/2-1, then -N/2..-1.
  static int signed_index(int k, int n) noexcept { return k < n / 2 ? k : k - n; }
  double xi(int i) const noexcept;   // angular frequency 2π m / Lx
  double eta(int j) const noexcept;  // angular frequency 2π m / Ly
  std::size_t size() const noexcept { return static_cast<std::size_t>(Nx) * Ny; }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Complex samples on a Box. Immutable through the public API; every
/// operation returns a new field.
class GridField {
 public:
  GridField() = default;
  explicit GridField(Box box);
  GridField(Box box, std::vector<cplx> values);

  static GridField zeros(const Box& box) { return GridField(box); }
  static GridField from_function(const Box& box, const std::function<cplx(double, double)>& f);

  const Box& box() const noexcept { return box_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const cplx& at(int i, int j) const { return values_[static_cast<std::size_t>(i) * box_.Ny + j]; }
  bool is_finite() const noexcept;
  double max_abs() const noexcept;

  GridField map(const std::function<cplx(cplx, double, double)>& f) const;

  friend GridField operator+(const GridField& a, const GridField& b);
  friend GridField operator-(const GridField& a, const GridField& b);
  friend GridField operator*(cplx s, const GridField& a);
  friend bool operator==(const GridField&, const GridField&) = default;

 private:
  Box box_;
  std::vector<cplx> values_;
};

// ---- spectral helpers -----------------------------------------------------------

/// Unnormalized forward 2D DFT; index layout as the field.
std::vector<cplx> spectrum(const GridField& f);
/// Inverse of spectrum() (includes the 1/(Nx·Ny) factor).
GridField from_spectrum(const Box& box, std::vector<cplx> spec);
/// Forward DFT in y only: result(i, j) = Σ_l f(i, l) e^{-2πi j l / Ny}.
std::vector<cplx> spectrum_y(const GridField& f);
GridField from_spectrum_y(const Box& box, std::vector<cplx> spec);

/// Pointwise multiplication of the spectrum by m(ξ, η).
GridField apply_symbol(const GridField& f, const std::function<cplx(double, double)>& m);

struct JapaneseBracket {
  double s;  // ⟨D⟩^s = (1+ξ²+η²)^{s/2}
};
struct JapaneseBracketY {
  double s;  // ⟨D_y⟩^s = (1+η²)^{s/2}
};
struct CustomMultiplier {
  std::function<cplx(double, double)> symbol;
  std::string name = "custom";
};
using MultiplierSpec = std::variant<JapaneseBracket, JapaneseBracketY, CustomMultiplier>;

cplx multiplier_value(const MultiplierSpec& m, double xi, double eta);
GridField apply_multiplier(const GridField& f, const MultiplierSpec& m);

// ---- conical partition ---------------------------------------------------------------

/// Partition weights χ₀..χ₄ at a frequency; they sum to 1 and satisfy
/// supp χ₀ ⊆ B(0,2), supp χ_j ⊆ ∁B(0,1) for j ≥ 1, and
/// χ₁ ⊆ {4ξ > |η|}, χ₂ ⊆ {4ξ < -|η|}, χ₃ ⊆ {η < -2|ξ|}, χ₄ ⊆ {η > 2|ξ|}.
std::array<double, 5> partition_weights(double xi, double eta);
/// Whether (ξ, η) lies in the defining open set of piece j.
bool in_partition_region(int j, double xi, double eta);
std::array<GridField, 5> conical_partition(const GridField& f);

// ---- operators -------------------------------------------------------------------

/// Spectral derivative ∂_x^a ∂_y^b (odd orders zero the Nyquist mode).
GridField derivative(const GridField& f, int order_x, int order_y);
GridField apply_diffop(const opalg::DiffOp& op, const GridField& f);
std::vector<GridField> apply_diffop(const opalg::DiffOpMatrix& op, const std::vector<GridField>& f);

// ---- norms ---------------------------------------------------------------------------

struct Region {
  double x0, x1, y0, y1;  // closed rectangle [x0,x1] × [y0,y1]
};

enum class NormKind { L1, L2, Hs, Ws1 };
struct Norm {
  NormKind kind = NormKind::L2;
  double s = 0.0;
  static Norm l1() { return {NormKind::L1, 0.0}; }
  static Norm l2() { return {NormKind::L2, 0.0}; }
  static Norm hs(double s) { return {NormKind::Hs, s}; }
  static Norm ws1(double s) { return {NormKind::Ws1, s}; }
};

/// Riemann-sum norms; Hs = L2 of ⟨D⟩^s f, Ws1 = L1 of ⟨D⟩^s f. The region
/// restricts the physical-space sum (the multiplier acts on the whole torus).
double norm(const GridField& f, Norm kind, std::optional<Region> region = std::nullopt);
/// ∫ f·g over the box (no conjugation).
cplx integrate_product(const GridField& f, const GridField& g);
cplx integral(const GridField& f);

// ---- mollified measures -----------------------------------------------------------------

enum class MeasureKind { PointAtom, LineOnX0, PvOneOverYOnX0 };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::PointAtom;
  double mass = 1.0;
  double width = 0.1;
  double x0 = 0.0;  // point atom location
  double y0 = 0.0;
  double density_width = 1.0;  // Gaussian y-profile width of the line measure

  static MeasureSpec point_atom(double width, double mass = 1.0, double x0 = 0.0, double y0 = 0.0);
  static MeasureSpec line_on_x0(double width, double mass = 1.0, double density_width = 1.0);
  static MeasureSpec pv_on_x0(double width, double mass = 1.0);
};

std::string to_string(MeasureKind k);
MeasureKind measure_kind_from_string(const std::string& s);

/// Throws DomainError unless width ≥ 2·max(hx, hy).
GridField realize_measure(const MeasureSpec& spec, const Box& box);

// ---- I/O -------------------------------------------------------------------------------

/// Binary snapshot: "HYPL1", u32 version, u32 Nx, u32 Ny, f64 Lx, f64 Ly,
/// then Nx·Ny (re, im) f64 pairs, all little-endian, row-major.
void write_field(std::ostream& out, const GridField& f);
GridField read_field(std::istream& in);
void write_field(const std::string& path, const GridField& f);
GridField read_field(const std::string& path);

enum class SliceAxis { AlongX, AlongY };
/// CSV with columns coord,re,im,abs for the row (AlongY, fixed x index) or
/// column (AlongX, fixed y index).
void write_slice_csv(std::ostream& out, const GridField& f, SliceAxis axis, int index);

}  // namespace hypolab::grid
