#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "cubetriple/error.hpp"
#include "cubetriple/rational.hpp"

namespace cubetriple {

/// An element re + im*i of the Gaussian rationals Q(i).
class GaussRat {
 public:
  GaussRat() = default;
  GaussRat(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  GaussRat(long long re) : re_(re) {}           // NOLINT(google-explicit-constructor)
  GaussRat(int re) : re_(re) {}                 // NOLINT(google-explicit-constructor)
  GaussRat(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRat i() { return GaussRat(Rational(0), Rational(1)); }

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const noexcept { return im_.is_zero(); }

  GaussRat conj() const { return GaussRat(re_, -im_); }

  /// x * conj(x), always a nonnegative rational.
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussRat inverse() const {
    if (is_zero()) throw Error(ErrorCode::division_by_zero, "inverse of zero in Q(i)");
    Rational n = norm();
    return GaussRat(re_ / n, -im_ / n);
  }

  GaussRat operator-() const { return GaussRat(-re_, -im_); }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    if (a.im_.is_zero() && b.im_.is_zero()) return GaussRat(a.re_ * b.re_);
    if (a.im_.is_zero()) return GaussRat(a.re_ * b.re_, a.re_ * b.im_);
    if (b.im_.is_zero()) return GaussRat(a.re_ * b.re_, a.im_ * b.re_);
    return GaussRat(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    if (b.is_zero()) throw Error(ErrorCode::division_by_zero, "division by zero in Q(i)");
    if (b.im_.is_zero()) return GaussRat(a.re_ / b.re_, a.im_ / b.re_);
    return a * b.inverse();
  }

  GaussRat& operator+=(const GaussRat& o) { return *this = *this + o; }
  GaussRat& operator-=(const GaussRat& o) { return *this = *this - o; }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
  GaussRat& operator/=(const GaussRat& o) { return *this = *this / o; }

  friend bool operator==(const GaussRat& a, const GaussRat& b) = default;

  /// "a/b+c/d*i" with the sign of the imaginary part folded into the joiner,
  /// e.g. "-1/2+0/1*i" or "3/2-5/1*i".
  std::string to_string() const {
    std::string out = re_.to_string();
    if (im_.sign() < 0) {
      out += "-" + (-im_).to_string();
    } else {
      out += "+" + im_.to_string();
    }
    return out + "*i";
  }

  static GaussRat parse(std::string_view text) {
    std::string s(text);
    if (s.size() < 3 || s.substr(s.size() - 2) != "*i")
      throw Error(ErrorCode::parse_error, "bad Gaussian rational '" + s + "'");
    s.resize(s.size() - 2);
    // the joiner is the last sign that is not in leading position
    auto pos = s.find_last_of("+-");
    if (pos == std::string::npos || pos == 0)
      throw Error(ErrorCode::parse_error, "bad Gaussian rational '" + std::string(text) + "'");
    Rational re = Rational::parse(s.substr(0, pos));
    Rational im = Rational::parse(s.substr(pos + 1));
    if (s[pos] == '-') im = -im;
    return GaussRat(re, im);
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussRat& x) { return os << x.to_string(); }

 private:
  Rational re_;
  Rational im_;
};

inline GaussRat conj(const GaussRat& x) { return x.conj(); }

/// x^n for any signed n; 0^n with n < 0 is an error, 0^0 = 1.
inline GaussRat int_power(const GaussRat& x, long long n) {
  if (n < 0) {
    if (x.is_zero()) throw Error(ErrorCode::division_by_zero, "zero to a negative power");
    return int_power(x.inverse(), -n);
  }
  GaussRat result(1);
  GaussRat base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

/// i^n for any signed n.
inline GaussRat i_power(long long n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return GaussRat(1);
    case 1: return GaussRat::i();
    case 2: return GaussRat(-1);
    default: return -GaussRat::i();
  }
}

}  // namespace cubetriple
