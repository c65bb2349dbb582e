#include "hypolab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include "hypolab/cutoff.hpp"
#include "hypolab/error.hpp"
#include "hypolab/fft.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab::grid {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_box(const GridField& a, const GridField& b) {
  if (!(a.box() == b.box())) throw DomainError("grid fields live on different boxes");
}

double deg(double d) { return d * kPi / 180.0; }

}  // namespace

// ---- Box -------------------------------------------------------------------------

Box Box::make(double Lx, double Ly, int Nx, int Ny) {
  Box b{Lx, Ly, Nx, Ny};
  b.validate();
  return b;
}

void Box::validate() const {
  if (!(Lx > 0) || !(Ly > 0) || !std::isfinite(Lx) || !std::isfinite(Ly))
    throw DomainError("box side lengths must be positive");
  if (!is_pow2(Nx) || !is_pow2(Ny) || Nx < 16 || Ny < 16)
    throw DomainError("grid sizes must be powers of two >= 16");
}

double Box::xi(int i) const noexcept { return 2.0 * kPi / Lx * signed_index(i, Nx); }
double Box::eta(int j) const noexcept { return 2.0 * kPi / Ly * signed_index(j, Ny); }

// ---- GridField ---------------------------------------------------------------------

GridField::GridField(Box box) : box_(box), values_(box.size()) {}

GridField::GridField(Box box, std::vector<cplx> values) : box_(box), values_(std::move(values)) {
  if (values_.size() != box_.size()) throw DomainError("field value count does not match the box");
}

GridField GridField::from_function(const Box& box, const std::function<cplx(double, double)>& f) {
  std::vector<cplx> v(box.size());
  parallel_for(static_cast<std::size_t>(box.Nx), [&](std::size_t i) {
    double x = box.x(static_cast<int>(i));
    for (int j = 0; j < box.Ny; ++j) v[i * box.Ny + j] = f(x, box.y(j));
  });
  return {box, std::move(v)};
}

bool GridField::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double GridField::max_abs() const noexcept {
  double m = 0;
  for (const cplx& z : values_) m = std::max(m, std::abs(z));
  return m;
}

GridField GridField::map(const std::function<cplx(cplx, double, double)>& f) const {
  std::vector<cplx> v(values_.size());
  parallel_for(static_cast<std::size_t>(box_.Nx), [&](std::size_t i) {
    double x = box_.x(static_cast<int>(i));
    for (int j = 0; j < box_.Ny; ++j) v[i * box_.Ny + j] = f(values_[i * box_.Ny + j], x, box_.y(j));
  });
  return {box_, std::move(v)};
}

GridField operator+(const GridField& a, const GridField& b) {
  require_same_box(a, b);
  std::vector<cplx> v(a.values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values_[k] + b.values_[k];
  return {a.box_, std::move(v)};
}

GridField operator-(const GridField& a, const GridField& b) {
  require_same_box(a, b);
  std::vector<cplx> v(a.values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values_[k] - b.values_[k];
  return {a.box_, std::move(v)};
}

GridField operator*(cplx s, const GridField& a) {
  std::vector<cplx> v(a.values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = s * a.values_[k];
  return {a.box_, std::move(v)};
}

// ---- spectral helpers -----------------------------------------------------------------

std::vector<cplx> spectrum(const GridField& f) {
  std::vector<cplx> v(f.values().begin(), f.values().end());
  fft::transform_2d(v, f.box().Nx, f.box().Ny, fft::Direction::Forward);
  return v;
}

GridField from_spectrum(const Box& box, std::vector<cplx> spec) {
  fft::transform_2d(spec, box.Nx, box.Ny, fft::Direction::Backward);
  double scale = 1.0 / static_cast<double>(box.size());
  for (cplx& z : spec) z *= scale;
  return {box, std::move(spec)};
}

std::vector<cplx> spectrum_y(const GridField& f) {
  std::vector<cplx> v(f.values().begin(), f.values().end());
  fft::transform_y(v, f.box().Nx, f.box().Ny, fft::Direction::Forward);
  return v;
}

GridField from_spectrum_y(const Box& box, std::vector<cplx> spec) {
  fft::transform_y(spec, box.Nx, box.Ny, fft::Direction::Backward);
  double scale = 1.0 / box.Ny;
  for (cplx& z : spec) z *= scale;
  return {box, std::move(spec)};
}

GridField apply_symbol(const GridField& f, const std::function<cplx(double, double)>& m) {
  const Box& b = f.box();
  std::vector<cplx> spec = spectrum(f);
  parallel_for(static_cast<std::size_t>(b.Nx), [&](std::size_t i) {
    double xi = b.xi(static_cast<int>(i));
    for (int j = 0; j < b.Ny; ++j) spec[i * b.Ny + j] *= m(xi, b.eta(j));
  });
  return from_spectrum(b, std::move(spec));
}

cplx multiplier_value(const MultiplierSpec& m, double xi, double eta) {
  struct Visitor {
    double xi, eta;
    cplx operator()(const JapaneseBracket& jb) const { return std::pow(1.0 + xi * xi + eta * eta, 0.5 * jb.s); }
    cplx operator()(const JapaneseBracketY& jb) const { return std::pow(1.0 + eta * eta, 0.5 * jb.s); }
    cplx operator()(const CustomMultiplier& c) const { return c.symbol(xi, eta); }
  };
  return std::visit(Visitor{xi, eta}, m);
}

GridField apply_multiplier(const GridField& f, const MultiplierSpec& m) {
  return apply_symbol(f, [&](double xi, double eta) { return multiplier_value(m, xi, eta); });
}

// ---- conical partition ---------------------------------------------------------------------

std::array<double, 5> partition_weights(double xi, double eta) {
  double r = std::hypot(xi, eta);
  double low = cutoff::plateau(r, 1.25, 1.75);
  double high = cutoff::smooth_step((r - 1.05) / 0.4);
  std::array<double, 5> w{low, 0, 0, 0, 0};
  if (high > 0) {
    double theta = std::atan2(eta, xi);
    double a = std::abs(theta);
    w[1] = high * cutoff::plateau(a, deg(60), deg(72));
    w[2] = high * cutoff::plateau(kPi - a, deg(60), deg(72));
    w[3] = high * cutoff::plateau(std::abs(theta + kPi / 2), deg(18), deg(25));
    w[4] = high * cutoff::plateau(std::abs(theta - kPi / 2), deg(18), deg(25));
  }
  double total = w[0] + w[1] + w[2] + w[3] + w[4];
  for (double& v : w) v /= total;
  return w;
}

bool in_partition_region(int j, double xi, double eta) {
  double r = std::hypot(xi, eta);
  switch (j) {
    case 0: return r < 2.0;
    case 1: return r > 1.0 && 4 * xi > std::abs(eta);
    case 2: return r > 1.0 && 4 * xi < -std::abs(eta);
    case 3: return r > 1.0 && eta < -2 * std::abs(xi);
    case 4: return r > 1.0 && eta > 2 * std::abs(xi);
    default: throw DomainError("partition index out of range");
  }
}

std::array<GridField, 5> conical_partition(const GridField& f) {
  const Box& b = f.box();
  std::vector<cplx> spec = spectrum(f);
  std::array<std::vector<cplx>, 5> pieces;
  for (auto& p : pieces) p.resize(spec.size());
  parallel_for(static_cast<std::size_t>(b.Nx), [&](std::size_t i) {
    double xi = b.xi(static_cast<int>(i));
    for (int j = 0; j < b.Ny; ++j) {
      auto w = partition_weights(xi, b.eta(j));
      std::size_t k = i * b.Ny + j;
      for (int p = 0; p < 5; ++p) pieces[p][k] = w[p] * spec[k];
    }
  });
  return {from_spectrum(b, std::move(pieces[0])), from_spectrum(b, std::move(pieces[1])),
          from_spectrum(b, std::move(pieces[2])), from_spectrum(b, std::move(pieces[3])),
          from_spectrum(b, std::move(pieces[4]))};
}

// ---- operators ---------------------------------------------------------------------------

namespace {

cplx ik_power(double k, int order, bool nyquist) {
  if (order == 0) return 1.0;
  if (nyquist && order % 2 == 1) return 0.0;
  cplx ik(0.0, k);
  cplx r = 1.0;
  for (int p = 0; p < order; ++p) r *= ik;
  return r;
}

GridField derivative_from_spectrum(const Box& b, const std::vector<cplx>& spec, int ox, int oy) {
  std::vector<cplx> d(spec.size());
  parallel_for(static_cast<std::size_t>(b.Nx), [&](std::size_t i) {
    int ii = static_cast<int>(i);
    cplx fx = ik_power(b.xi(ii), ox, ii == b.Nx / 2);
    for (int j = 0; j < b.Ny; ++j) d[i * b.Ny + j] = spec[i * b.Ny + j] * fx * ik_power(b.eta(j), oy, j == b.Ny / 2);
  });
  return from_spectrum(b, std::move(d));
}

}  // namespace

GridField derivative(const GridField& f, int order_x, int order_y) {
  return derivative_from_spectrum(f.box(), spectrum(f), order_x, order_y);
}

GridField apply_diffop(const opalg::DiffOp& op, const GridField& f) {
  const Box& b = f.box();
  std::vector<cplx> spec = spectrum(f);
  std::vector<cplx> out(b.size());
  for (const auto& [alpha, coeff] : op.terms()) {
    GridField d = alpha.total() == 0 ? f : derivative_from_spectrum(b, spec, alpha.x, alpha.y);
    const bool constant = coeff.is_constant();
    const cplx c0 = coeff.evaluate(0, 0);
    parallel_for(static_cast<std::size_t>(b.Nx), [&](std::size_t i) {
      double x = b.x(static_cast<int>(i));
      for (int j = 0; j < b.Ny; ++j) {
        cplx c = constant ? c0 : coeff.evaluate(x, b.y(j));
        out[i * b.Ny + j] += c * d.at(static_cast<int>(i), j);
      }
    });
  }
  return {b, std::move(out)};
}

std::vector<GridField> apply_diffop(const opalg::DiffOpMatrix& op, const std::vector<GridField>& f) {
  if (f.size() != op.size()) throw DomainError("operator shape does not match the number of fields");
  if (op.scalar) return {apply_diffop(op(0, 0), f[0])};
  std::vector<GridField> out;
  for (int r = 0; r < 2; ++r) out.push_back(apply_diffop(op(r, 0), f[0]) + apply_diffop(op(r, 1), f[1]));
  return out;
}

// ---- norms -------------------------------------------------------------------------------

namespace {

double power_sum(const GridField& f, int p, const std::optional<Region>& region) {
  const Box& b = f.box();
  std::vector<double> rows(static_cast<std::size_t>(b.Nx), 0.0);
  parallel_for(static_cast<std::size_t>(b.Nx), [&](std::size_t i) {
    double x = b.x(static_cast<int>(i));
    if (region && (x < region->x0 || x > region->x1)) return;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(b.Ny));
    for (int j = 0; j < b.Ny; ++j) {
      if (region) {
        double y = b.y(j);
        if (y < region->y0 || y > region->y1) continue;
      }
      double a = std::abs(f.at(static_cast<int>(i), j));
      terms.push_back(p == 1 ? a : a * a);
    }
    rows[i] = pairwise_sum(terms);
  });
  return pairwise_sum(rows) * b.hx() * b.hy();
}

}  // namespace

double norm(const GridField& f, Norm kind, std::optional<Region> region) {
  switch (kind.kind) {
    case NormKind::L1: return power_sum(f, 1, region);
    case NormKind::L2: return std::sqrt(power_sum(f, 2, region));
    case NormKind::Hs:
      if (!std::isfinite(kind.s)) throw DomainError("Sobolev index must be finite");
      return std::sqrt(power_sum(apply_multiplier(f, JapaneseBracket{kind.s}), 2, region));
    case NormKind::Ws1:
      if (!std::isfinite(kind.s)) throw DomainError("Sobolev index must be finite");
      if (kind.s == 0.0) return power_sum(f, 1, region);
      return power_sum(apply_multiplier(f, JapaneseBracket{kind.s}), 1, region);
  }
  throw DomainError("unknown norm kind");
}

cplx integrate_product(const GridField& f, const GridField& g) {
  require_same_box(f, g);
  const Box& b = f.box();
  std::vector<double> re(b.size()), im(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    cplx z = f.values()[k] * g.values()[k];
    re[k] = z.real();
    im[k] = z.imag();
  }
  double w = b.hx() * b.hy();
  return {pairwise_sum(re) * w, pairwise_sum(im) * w};
}

cplx integral(const GridField& f) {
  const Box& b = f.box();
  std::vector<double> re(b.size()), im(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    re[k] = f.values()[k].real();
    im[k] = f.values()[k].imag();
  }
  double w = b.hx() * b.hy();
  return {pairwise_sum(re) * w, pairwise_sum(im) * w};
}

// ---- measures -------------------------------------------------------------------------------

MeasureSpec MeasureSpec::point_atom(double width, double mass, double x0, double y0) {
  MeasureSpec m;
  m.kind = MeasureKind::PointAtom;
  m.width = width;
  m.mass = mass;
  m.x0 = x0;
  m.y0 = y0;
  return m;
}

MeasureSpec MeasureSpec::line_on_x0(double width, double mass, double density_width) {
  MeasureSpec m;
  m.kind = MeasureKind::LineOnX0;
  m.width = width;
  m.mass = mass;
  m.density_width = density_width;
  return m;
}

MeasureSpec MeasureSpec::pv_on_x0(double width, double mass) {
  MeasureSpec m;
  m.kind = MeasureKind::PvOneOverYOnX0;
  m.width = width;
  m.mass = mass;
  return m;
}

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::PointAtom: return "point_atom";
    case MeasureKind::LineOnX0: return "line_on_x0";
    case MeasureKind::PvOneOverYOnX0: return "pv_one_over_y_on_x0";
  }
  return "?";
}

MeasureKind measure_kind_from_string(const std::string& s) {
  if (s == "point_atom") return MeasureKind::PointAtom;
  if (s == "line_on_x0") return MeasureKind::LineOnX0;
  if (s == "pv_one_over_y_on_x0") return MeasureKind::PvOneOverYOnX0;
  throw DomainError("unknown measure kind '" + s + "'");
}

GridField realize_measure(const MeasureSpec& spec, const Box& box) {
  double h = std::max(box.hx(), box.hy());
  if (!(spec.width >= 2.0 * h))
    throw DomainError("width-unresolvable: measure width " + std::to_string(spec.width) + " < 2 grid spacings (" +
                      std::to_string(2.0 * h) + ")");
  const double w = spec.width;
  const double gauss1d = 1.0 / (std::sqrt(2.0 * kPi) * w);
  switch (spec.kind) {
    case MeasureKind::PointAtom:
      return GridField::from_function(box, [&](double x, double y) {
        double r2 = (x - spec.x0) * (x - spec.x0) + (y - spec.y0) * (y - spec.y0);
        return cplx(spec.mass / (2.0 * kPi * w * w) * std::exp(-r2 / (2 * w * w)));
      });
    case MeasureKind::LineOnX0: {
      const double s = spec.density_width;
      if (!(s > 0)) throw DomainError("line measure density width must be positive");
      return GridField::from_function(box, [&](double x, double y) {
        double gx = gauss1d * std::exp(-x * x / (2 * w * w));
        double gy = std::exp(-y * y / (2 * s * s)) / (std::sqrt(2.0 * kPi) * s);
        return cplx(spec.mass * gx * gy);
      });
    }
    case MeasureKind::PvOneOverYOnX0:
      return GridField::from_function(box, [&](double x, double y) {
        double gx = gauss1d * std::exp(-x * x / (2 * w * w));
        return cplx(spec.mass * gx * y / (y * y + w * w));
      });
  }
  throw DomainError("unknown measure kind");
}

// ---- I/O ------------------------------------------------------------------------------------

namespace {

template <class T>
void put_le(std::ostream& out, T v) {
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) throw DomainError("truncated field snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

constexpr char kMagic[5] = {'H', 'Y', 'P', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_field(std::ostream& out, const GridField& f) {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.box().Nx));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.box().Ny));
  put_le<double>(out, f.box().Lx);
  put_le<double>(out, f.box().Ly);
  for (const cplx& z : f.values()) {
    put_le<double>(out, z.real());
    put_le<double>(out, z.imag());
  }
}

GridField read_field(std::istream& in) {
  char magic[5];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw DomainError("not a HYPL1 field snapshot");
  auto version = get_le<std::uint32_t>(in);
  if (version != kVersion) throw DomainError("unsupported snapshot version " + std::to_string(version));
  auto nx = get_le<std::uint32_t>(in);
  auto ny = get_le<std::uint32_t>(in);
  double lx = get_le<double>(in);
  double ly = get_le<double>(in);
  Box box = Box::make(lx, ly, static_cast<int>(nx), static_cast<int>(ny));
  std::vector<cplx> v(box.size());
  for (cplx& z : v) {
    double re = get_le<double>(in);
    double im = get_le<double>(in);
    z = {re, im};
  }
  return {box, std::move(v)};
}

void write_field(const std::string& path, const GridField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_field(out, f);
}

GridField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_field(in);
}

void write_slice_csv(std::ostream& out, const GridField& f, SliceAxis axis, int index) {
  const Box& b = f.box();
  char buf[160];
  out << (axis == SliceAxis::AlongY ? "y" : "x") << ",re,im,abs\n";
  int n = axis == SliceAxis::AlongY ? b.Ny : b.Nx;
  int limit = axis == SliceAxis::AlongY ? b.Nx : b.Ny;
  if (index < 0 || index >= limit) throw DomainError("slice index out of range");
  for (int k = 0; k < n; ++k) {
    cplx z = axis == SliceAxis::AlongY ? f.at(index, k) : f.at(k, index);
    double c = axis == SliceAxis::AlongY ? b.y(k) : b.x(k);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", c, z.real(), z.imag(), std::abs(z));
    out << buf;
  }
}

}  // namespace hypolab::grid
