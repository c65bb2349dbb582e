#include "hypolab/rational.hpp"

#include <limits>
#include <stdexcept>

namespace hypolab {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits64(num) || !fits64(den)) throw std::overflow_error("rational coefficient overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

CRational operator/(const CRational& a, const CRational& b) {
  Rational n = b.re * b.re + b.im * b.im;
  CRational t = a * b.conj();
  return {t.re / n, t.im / n};
}

std::string CRational::to_string() const {
  if (im.is_zero()) return re.to_string();
  std::string imag;
  if (im == Rational(1)) {
    imag = "i";
  } else if (im == Rational(-1)) {
    imag = "-i";
  } else {
    imag = im.to_string() + "*i";
  }
  if (re.is_zero()) return imag;
  if (im < Rational(0)) {
    std::string mag = (-im == Rational(1)) ? "i" : (-im).to_string() + "*i";
    return "(" + re.to_string() + " - " + mag + ")";
  }
  return "(" + re.to_string() + " + " + imag + ")";
}

CRational i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return CRational(1);
    case 1: return CRational(Rational(0), Rational(1));
    case 2: return CRational(-1);
    default: return CRational(Rational(0), Rational(-1));
  }
}

}  // namespace hypolab
