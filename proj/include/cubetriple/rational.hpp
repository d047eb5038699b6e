#pragma once

// Exact rationals with an inline 64-bit representation and a GMP fallback.
//
// A value is stored inline (num_/den_) whenever both canonical parts fit in a
// signed 64-bit word; only otherwise does it live in a heap mpq_class. Every
// operation re-establishes that rule, so two equal values always have the same
// representation and equality never needs to normalise.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "cubetriple/error.hpp"

namespace cubetriple {

using int128 = __int128;
using uint128 = unsigned __int128;

namespace detail {

inline constexpr std::int64_t k_small_max = std::numeric_limits<std::int64_t>::max();

inline uint128 abs128(int128 x) { return x < 0 ? uint128(0) - uint128(x) : uint128(x); }

inline uint128 gcd128(uint128 a, uint128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0)
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool fits_small(int128 x) { return x <= k_small_max && x >= -int128(k_small_max); }

inline void mpz_set_int128(mpz_t out, int128 value) {
  uint128 mag = abs128(value);
  std::uint64_t words[2] = {static_cast<std::uint64_t>(mag), static_cast<std::uint64_t>(mag >> 64)};
  mpz_import(out, 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (value < 0) mpz_neg(out, out);
}

}  // namespace detail

class Rational {
 public:
  Rational() = default;

  // NOLINTNEXTLINE(google-explicit-constructor)
  Rational(long long value) : num_(value) {
    if (value == std::numeric_limits<long long>::min()) *this = from_int128(value, 1);
  }
  Rational(int value) : Rational(static_cast<long long>(value)) {}  // NOLINT
  Rational(long value) : Rational(static_cast<long long>(value)) {}  // NOLINT

  Rational(long long num, long long den) {
    if (den == 0) throw Error(ErrorCode::division_by_zero, "rational with zero denominator");
    *this = from_int128(num, den);
  }

  static Rational from_int128(int128 num, int128 den) {
    if (den == 0) throw Error(ErrorCode::division_by_zero, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    uint128 g = detail::gcd128(detail::abs128(num), uint128(den));
    if (g > 1) {
      num /= int128(g);
      den /= int128(g);
    }
    return from_reduced(num, den);
  }

  static Rational from_mpq(const mpq_class& q) {
    if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
      long n = mpz_get_si(q.get_num_mpz_t());
      long d = mpz_get_si(q.get_den_mpz_t());
      if (n != std::numeric_limits<long>::min()) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
      }
    }
    Rational r;
    r.big_ = std::make_shared<const mpq_class>(q);
    return r;
  }

  /// Parses "a/b" or "a" with an optional leading sign; the result is canonical.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error(ErrorCode::parse_error, "empty rational");
    for (std::size_t k = 0; k < s.size(); ++k) {
      char c = s[k];
      bool ok = (c >= '0' && c <= '9') || c == '/' || ((c == '-' || c == '+') && k == 0);
      if (!ok) throw Error(ErrorCode::parse_error, "bad rational '" + s + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    auto slash = s.find('/');
    mpz_class num;
    mpz_class den = 1;
    try {
      if (slash == std::string::npos) {
        num = mpz_class(s, 10);
      } else {
        num = mpz_class(s.substr(0, slash), 10);
        den = mpz_class(s.substr(slash + 1), 10);
      }
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::parse_error, "bad rational '" + std::string(text) + "'");
    }
    if (den == 0) throw Error(ErrorCode::division_by_zero, "rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return from_mpq(q);
  }

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const { return big_ ? mpz_cmp_ui(big_->get_den_mpz_t(), 1) == 0 : den_ == 1; }
  int sign() const noexcept {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }

  /// Inline parts; only meaningful when is_small().
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q;
    mpz_set_si(q.get_num_mpz_t(), num_);
    mpz_set_si(q.get_den_mpz_t(), den_);
    return q;
  }

  mpz_class numerator() const { return to_mpq().get_num(); }
  mpz_class denominator() const { return to_mpq().get_den(); }

  /// Canonical "a/b" text; the denominator is always written.
  std::string to_string() const {
    if (big_) return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    if (big_) return from_mpq(-*big_);
    Rational r = *this;
    r.num_ = -num_;
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw Error(ErrorCode::division_by_zero, "inverse of zero");
    if (big_) return from_mpq(1 / *big_);
    return from_reduced(num_ < 0 ? -int128(den_) : int128(den_), num_ < 0 ? -int128(num_) : int128(num_));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return from_int128(int128(a.num_) + b.num_, a.den_);
      return from_int128(int128(a.num_) * b.den_ + int128(b.num_) * a.den_, int128(a.den_) * b.den_);
    }
    return from_mpq(a.to_mpq() + b.to_mpq());
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero()) return Rational();
    if (!a.big_ && !b.big_) {
      std::uint64_t g1 = std::gcd(static_cast<std::uint64_t>(a.num_ < 0 ? -a.num_ : a.num_),
                                  static_cast<std::uint64_t>(b.den_));
      std::uint64_t g2 = std::gcd(static_cast<std::uint64_t>(b.num_ < 0 ? -b.num_ : b.num_),
                                  static_cast<std::uint64_t>(a.den_));
      int128 n = int128(a.num_ / std::int64_t(g1)) * (b.num_ / std::int64_t(g2));
      int128 d = int128(a.den_ / std::int64_t(g2)) * (b.den_ / std::int64_t(g1));
      return from_reduced(n, d);
    }
    return from_mpq(a.to_mpq() * b.to_mpq());
  }

  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical storage: mixed representations never coincide
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      int128 l = int128(a.num_) * b.den_;
      int128 r = int128(b.num_) * a.den_;
      return l <=> r;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c <=> 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

 private:
  static Rational from_reduced(int128 num, int128 den) {
    Rational r;
    if (detail::fits_small(num) && detail::fits_small(den)) {
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    mpq_class q;
    detail::mpz_set_int128(q.get_num_mpz_t(), num);
    detail::mpz_set_int128(q.get_den_mpz_t(), den);
    r.big_ = std::make_shared<const mpq_class>(std::move(q));
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

/// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
inline Rational binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return Rational();
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational::from_mpq(mpq_class(out));
}

inline Rational pow2(long long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  mpq_class q(p);
  if (e < 0) q = 1 / q;
  return Rational::from_mpq(q);
}

/// Exact square root of a nonnegative rational, or false when it is not a
/// perfect square in Q.
inline bool rational_sqrt(const Rational& x, Rational& root) {
  if (x.sign() < 0) return false;
  mpq_class q = x.to_mpq();
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  root = Rational::from_mpq(mpq_class(n, d));
  return true;
}

}  // namespace cubetriple
