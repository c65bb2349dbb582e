#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace hypolab {

/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
/// Intermediate products use 128-bit arithmetic; overflow of the reduced
/// result throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Complex number with exact rational real and imaginary parts.
struct CRational {
  Rational re;
  Rational im;

  CRational() = default;
  CRational(Rational r) : re(r) {}  // NOLINT(google-explicit-constructor)
  CRational(std::int64_t r) : re(r) {}  // NOLINT(google-explicit-constructor)
  CRational(Rational r, Rational i) : re(r), im(i) {}

  static CRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
  bool is_real() const noexcept { return im.is_zero(); }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  CRational conj() const { return {re, -im}; }
  /// Formats so that the operator parser reads it back exactly.
  std::string to_string() const;

  friend CRational operator+(const CRational& a, const CRational& b) { return {a.re + b.re, a.im + b.im}; }
  friend CRational operator-(const CRational& a, const CRational& b) { return {a.re - b.re, a.im - b.im}; }
  friend CRational operator*(const CRational& a, const CRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CRational operator/(const CRational& a, const CRational& b);
  CRational operator-() const { return {-re, -im}; }
  CRational& operator+=(const CRational& o) { return *this = *this + o; }
  CRational& operator-=(const CRational& o) { return *this = *this - o; }
  CRational& operator*=(const CRational& o) { return *this = *this * o; }
  friend bool operator==(const CRational&, const CRational&) = default;
};

/// i^k for integer k >= 0.
CRational i_pow(int k);

}  // namespace hypolab
