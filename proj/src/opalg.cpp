#include "hypolab/opalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypolab/error.hpp"

namespace hypolab::opalg {

namespace {

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// d^k/dt^k t^n = n!/(n-k)! t^(n-k)
std::int64_t falling(int n, int k) {
  std::int64_t r = 1;
  for (int j = 0; j < k; ++j) r *= (n - j);
  return r;
}

std::complex<double> ipow_double(double v, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= v;
  return r;
}

std::string join_signed(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const std::string& p = parts[k];
    if (!p.empty() && p.front() == '-') {
      out += " - " + p.substr(1);
    } else {
      out += " + " + p;
    }
  }
  return out;
}

// "coef*rest" with the usual elisions for ±1.
std::string scaled(const CRational& c, const std::string& rest) {
  if (rest.empty()) return c.to_string();
  if (c == CRational(1)) return rest;
  if (c == CRational(-1)) return "-" + rest;
  return c.to_string() + "*" + rest;
}

std::string power(const char* name, int k) {
  if (k == 0) return {};
  if (k == 1) return name;
  return std::string(name) + "^" + std::to_string(k);
}

std::string product(std::initializer_list<std::string> factors) {
  std::string out;
  for (const std::string& f : factors) {
    if (f.empty()) continue;
    if (!out.empty()) out += "*";
    out += f;
  }
  return out;
}

}  // namespace

// ---- PolyCoeff ---------------------------------------------------------------

PolyCoeff::PolyCoeff(CRational c) {
  if (!c.is_zero()) terms_.emplace(MultiIndex{0, 0}, c);
}

PolyCoeff PolyCoeff::monomial(CRational c, int deg_x, int deg_y) {
  PolyCoeff p;
  p.add_term({deg_x, deg_y}, c);
  return p;
}

void PolyCoeff::add_term(MultiIndex m, const CRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool PolyCoeff::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == MultiIndex{0, 0});
}

bool PolyCoeff::is_real() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_real(); });
}

CRational PolyCoeff::coeff(int deg_x, int deg_y) const {
  auto it = terms_.find({deg_x, deg_y});
  return it == terms_.end() ? CRational() : it->second;
}

int PolyCoeff::degree() const noexcept {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total());
  return d;
}

PolyCoeff PolyCoeff::derivative(int kx, int ky) const {
  PolyCoeff out;
  for (const auto& [m, c] : terms_) {
    if (m.x < kx || m.y < ky) continue;
    out.add_term({m.x - kx, m.y - ky}, c * CRational(falling(m.x, kx) * falling(m.y, ky)));
  }
  return out;
}

std::complex<double> PolyCoeff::evaluate(double x, double y) const {
  std::complex<double> s = 0.0;
  for (const auto& [m, c] : terms_) s += c.to_complex() * ipow_double(x, m.x) * ipow_double(y, m.y);
  return s;
}

PolyCoeff& PolyCoeff::operator+=(const PolyCoeff& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

PolyCoeff& PolyCoeff::operator-=(const PolyCoeff& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

PolyCoeff operator*(const PolyCoeff& a, const PolyCoeff& b) {
  PolyCoeff out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term({ma.x + mb.x, ma.y + mb.y}, ca * cb);
  return out;
}

PolyCoeff PolyCoeff::operator-() const {
  PolyCoeff out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

std::string PolyCoeff::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [m, c] : terms_) parts.push_back(scaled(c, product({power("x", m.x), power("y", m.y)})));
  return join_signed(parts);
}

// ---- DiffOp ------------------------------------------------------------------

DiffOp DiffOp::term(PolyCoeff c, int order_x, int order_y) {
  DiffOp op;
  op.add_term({order_x, order_y}, c);
  return op;
}

void DiffOp::add_term(MultiIndex m, const PolyCoeff& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int DiffOp::order() const noexcept {
  int o = -1;
  for (const auto& [m, c] : terms_) o = std::max(o, m.total());
  return o;
}

PolyCoeff DiffOp::coeff(int order_x, int order_y) const {
  auto it = terms_.find({order_x, order_y});
  return it == terms_.end() ? PolyCoeff() : it->second;
}

bool DiffOp::has_constant_coefficients() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_constant(); });
}

bool DiffOp::is_real() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_real(); });
}

PolyCoeff DiffOp::apply(const PolyCoeff& p) const {
  PolyCoeff out;
  for (const auto& [m, c] : terms_) out += c * p.derivative(m.x, m.y);
  return out;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffOp DiffOp::operator-() const {
  DiffOp out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

DiffOp operator*(const PolyCoeff& c, const DiffOp& op) {
  DiffOp out;
  for (const auto& [m, coef] : op.terms_) out.add_term(m, c * coef);
  return out;
}

DiffOpMatrix DiffOpMatrix::from_scalar(DiffOp op) {
  DiffOpMatrix m;
  m.entries[0] = std::move(op);
  m.scalar = true;
  return m;
}

DiffOpMatrix DiffOpMatrix::from_entries(DiffOp a11, DiffOp a12, DiffOp a21, DiffOp a22) {
  DiffOpMatrix m;
  m.entries = {std::move(a11), std::move(a12), std::move(a21), std::move(a22)};
  return m;
}

// ---- algebra -------------------------------------------------------------------

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  DiffOp out;
  for (const auto& [alpha, ca] : a.terms()) {
    for (const auto& [beta, cb] : b.terms()) {
      // ∂^α (c_b ∂^β) = Σ_γ C(α,γ) (∂^γ c_b) ∂^{α−γ+β}
      for (int gx = 0; gx <= alpha.x; ++gx) {
        for (int gy = 0; gy <= alpha.y; ++gy) {
          PolyCoeff d = cb.derivative(gx, gy);
          if (d.is_zero()) continue;
          CRational w(binomial(alpha.x, gx) * binomial(alpha.y, gy));
          out += DiffOp::term(ca * d * PolyCoeff(w), alpha.x - gx + beta.x, alpha.y - gy + beta.y);
        }
      }
    }
  }
  return out;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) - compose(b, a); }

DiffOpMatrix compose(const DiffOpMatrix& a, const DiffOpMatrix& b) {
  if (a.scalar && b.scalar) return DiffOpMatrix::from_scalar(compose(a(0, 0), b(0, 0)));
  DiffOpMatrix out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = compose(a(r, 0), b(0, c)) + compose(a(r, 1), b(1, c));
  return out;
}

SymbolPoly principal_symbol(const DiffOp& op, int m) {
  SymbolPoly out;
  for (const auto& [alpha, c] : op.terms()) {
    if (alpha.total() != m) continue;
    CRational factor = i_pow(m);
    for (const auto& [mono, coef] : c.terms()) out += SymbolPoly::monomial(coef * factor, {mono.x, mono.y, alpha.x, alpha.y});
  }
  return out;
}

SymbolPoly poisson_bracket(const SymbolPoly& a, const SymbolPoly& b) {
  using V = SymbolPoly::Var;
  return a.partial(V::Xi) * b.partial(V::X) + a.partial(V::Eta) * b.partial(V::Y) - a.partial(V::X) * b.partial(V::Xi) -
         a.partial(V::Y) * b.partial(V::Eta);
}

SymbolPoly det_symbol(const DiffOpMatrix& m, std::array<int, 2> row_orders) {
  DiffOp det = compose(m(0, 0), m(1, 1)) - compose(m(0, 1), m(1, 0));
  return principal_symbol(det, row_orders[0] + row_orders[1]);
}

std::vector<Direction> char_directions(const SymbolPoly& sym, std::array<double, 2> base, int n_dirs, double tol) {
  if (n_dirs < 8) throw DomainError("char_directions: n_dirs must be >= 8");
  if (!(tol > 0)) throw DomainError("char_directions: tol must be positive");
  const double dtheta = 2.0 * std::numbers::pi / n_dirs;
  auto mag = [&](double theta) { return std::abs(sym.evaluate(base[0], base[1], std::cos(theta), std::sin(theta))); };

  std::vector<double> values(n_dirs);
  double vmax = 0;
  for (int k = 0; k < n_dirs; ++k) {
    values[k] = mag(k * dtheta);
    vmax = std::max(vmax, values[k]);
  }
  const double thresh = tol * std::max(vmax, 1.0);
  std::vector<bool> near(n_dirs);
  for (int k = 0; k < n_dirs; ++k) near[k] = values[k] < thresh;
  if (std::none_of(near.begin(), near.end(), [](bool b) { return b; })) return {};

  // Walk clusters of consecutive near-zero samples, starting after a gap so
  // wrap-around clusters stay in one piece.
  int start = 0;
  while (start < n_dirs && near[start]) ++start;
  std::vector<Direction> out;
  auto refine = [&](int k) {
    double theta = k * dtheta;
    const double h = 0.1 * dtheta;
    auto phi = [&](double t) { double v = mag(t); return v * v; };
    double f0 = phi(theta), fp = phi(theta + h), fm = phi(theta - h);
    double d1 = (fp - fm) / (2 * h);
    double d2 = (fp - 2 * f0 + fm) / (h * h);
    if (d2 > 0) {
      double step = std::clamp(-d1 / d2, -0.5 * dtheta, 0.5 * dtheta);
      if (phi(theta + step) < f0) theta += step;
    }
    out.push_back({std::cos(theta), std::sin(theta)});
  };
  if (start == n_dirs) {
    // Whole circle characteristic (e.g. zero symbol): report every sample.
    for (int k = 0; k < n_dirs; ++k) out.push_back({std::cos(k * dtheta), std::sin(k * dtheta)});
    return out;
  }
  int k = start;
  for (int visited = 0; visited < n_dirs;) {
    int idx = k % n_dirs;
    if (!near[idx]) {
      ++k;
      ++visited;
      continue;
    }
    int best = idx;
    while (visited < n_dirs && near[k % n_dirs]) {
      if (values[k % n_dirs] < values[best]) best = k % n_dirs;
      ++k;
      ++visited;
    }
    refine(best);
  }
  return out;
}

HormanderResult hormander_rank(const std::vector<DiffOp>& fields, std::array<double, 2> base, int max_step) {
  if (max_step < 1) throw DomainError("hormander_rank: max_step must be >= 1");
  for (const DiffOp& f : fields) {
    bool ok = f.order() == 1 && f.coeff(0, 0).is_zero() && f.is_real();
    if (!ok) throw DomainError("hormander_rank: input is not a real vector field: " + to_string(f));
  }
  std::vector<Eigen::Vector2d> vectors;
  auto collect = [&](const std::vector<DiffOp>& level) {
    for (const DiffOp& f : level) {
      Eigen::Vector2d v(f.coeff(1, 0).evaluate(base[0], base[1]).real(), f.coeff(0, 1).evaluate(base[0], base[1]).real());
      double n = v.norm();
      if (n > 0) vectors.push_back(v / n);
    }
  };
  auto span_rank = [&]() {
    if (vectors.empty()) return 0;
    Eigen::MatrixXd m(2, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors[j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index j = 0; j < sv.size(); ++j)
      if (sv[j] > 1e-10) ++r;
    return r;
  };

  HormanderResult result;
  std::vector<DiffOp> level = fields;
  for (int step = 1; step <= max_step; ++step) {
    if (step > 1) {
      std::vector<DiffOp> next;
      for (const DiffOp& x : fields)
        for (const DiffOp& y : level) {
          DiffOp b = commutator(x, y);
          if (!b.is_zero()) next.push_back(std::move(b));
        }
      level = std::move(next);
    }
    collect(level);
    result.rank = span_rank();
    if (result.rank == 2) {
      result.step = step;
      break;
    }
    if (level.empty()) break;
  }
  return result;
}

// ---- SymbolPoly ------------------------------------------------------------------

SymbolPoly::SymbolPoly(CRational c) {
  if (!c.is_zero()) terms_.emplace(Exponents{0, 0, 0, 0}, c);
}

SymbolPoly SymbolPoly::monomial(CRational c, Exponents e) {
  SymbolPoly s;
  s.add_term(e, c);
  return s;
}

SymbolPoly SymbolPoly::var(Var v) {
  Exponents e{0, 0, 0, 0};
  e[v] = 1;
  return monomial(1, e);
}

void SymbolPoly::add_term(const Exponents& e, const CRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymbolPoly SymbolPoly::partial(Var v) const {
  SymbolPoly out;
  for (const auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Exponents d = e;
    d[v] -= 1;
    out.add_term(d, c * CRational(e[v]));
  }
  return out;
}

SymbolPoly SymbolPoly::real_part() const {
  SymbolPoly out;
  for (const auto& [e, c] : terms_) out.add_term(e, CRational(c.re));
  return out;
}

SymbolPoly SymbolPoly::imag_part() const {
  SymbolPoly out;
  for (const auto& [e, c] : terms_) out.add_term(e, CRational(c.im));
  return out;
}

std::complex<double> SymbolPoly::evaluate(double x, double y, double xi, double eta) const {
  std::complex<double> s = 0.0;
  for (const auto& [e, c] : terms_)
    s += c.to_complex() * ipow_double(x, e[0]) * ipow_double(y, e[1]) * ipow_double(xi, e[2]) * ipow_double(eta, e[3]);
  return s;
}

SymbolPoly& SymbolPoly::operator+=(const SymbolPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

SymbolPoly& SymbolPoly::operator-=(const SymbolPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      SymbolPoly::Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
      out.add_term(e, ca * cb);
    }
  return out;
}

SymbolPoly SymbolPoly::operator-() const {
  SymbolPoly out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

std::string SymbolPoly::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [e, c] : terms_)
    parts.push_back(scaled(c, product({power("x", e[0]), power("y", e[1]), power("xi", e[2]), power("eta", e[3])})));
  return join_signed(parts);
}

// ---- printing ----------------------------------------------------------------------

std::string to_string(const DiffOp& op) {
  std::vector<std::string> parts;
  // Highest order first reads naturally ("dx^2 + x^2*dy^2").
  std::vector<std::pair<MultiIndex, PolyCoeff>> terms(op.terms().begin(), op.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first.total() != b.first.total()) return a.first.total() > b.first.total();
    return a.first.x > b.first.x;
  });
  for (const auto& [alpha, c] : terms) {
    std::string deriv = product({power("dx", alpha.x), power("dy", alpha.y)});
    if (c.terms().size() == 1) {
      const auto& [mono, coef] = *c.terms().begin();
      parts.push_back(scaled(coef, product({power("x", mono.x), power("y", mono.y), deriv})));
    } else if (deriv.empty()) {
      parts.push_back(c.to_string());
    } else {
      parts.push_back("(" + c.to_string() + ")*" + deriv);
    }
  }
  return join_signed(parts);
}

std::string to_string(const DiffOpMatrix& m) {
  if (m.scalar) return to_string(m(0, 0));
  return "[[" + to_string(m(0, 0)) + ", " + to_string(m(0, 1)) + "], [" + to_string(m(1, 0)) + ", " +
         to_string(m(1, 1)) + "]]";
}

}  // namespace hypolab::opalg
