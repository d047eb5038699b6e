#pragma once

// Terminating series 2F1(-i, -j; -d; 2) (Krawtchouk values K_i(j; 1/2, d))
// and the grid Phi_ij = C(d, j) 2F1(-i, -j; -d; 2).

#include <algorithm>
#include <string>
#include <vector>

#include "cubetriple/error.hpp"
#include "cubetriple/matrix.hpp"
#include "cubetriple/rational.hpp"

namespace cubetriple {

/// Sum over n = 0..min(i, j) of (-i)_n (-j)_n / ((-d)_n n!) 2^n. Terms past
/// min(i, j) vanish, and stopping there keeps (-d)_n away from zero.
inline Rational hypergeometric_2f1(int i, int j, int d) {
  if (d < 0 || i < 0 || j < 0 || i > d || j > d)
    throw Error(ErrorCode::out_of_range, "2F1 arguments (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                             std::to_string(d) + ")");
  Rational sum(1);
  Rational term(1);
  for (int n = 0; n < std::min(i, j); ++n) {
    // term_{n+1} = term_n * (-i + n)(-j + n) / ((-d + n)(n + 1)) * 2
    term *= Rational(static_cast<long long>(n - i) * (n - j) * 2);
    term /= Rational(static_cast<long long>(n - d) * (n + 1));
    sum += term;
  }
  return sum;
}

/// Three-term recurrence in i (valid for i >= 2), evaluated on the right-hand
/// side from the series values at i - 1 and i - 2.
inline Rational krawtchouk_recurrence_rhs(int i, int j, int d) {
  if (i < 2) throw Error(ErrorCode::out_of_range, "recurrence needs i >= 2");
  Rational denom(d - i + 1);
  return Rational(d - 2 * j) / denom * hypergeometric_2f1(i - 1, j, d) -
         Rational(i - 1) / denom * hypergeometric_2f1(i - 2, j, d);
}

class PhiMatrix {
 public:
  explicit PhiMatrix(int d) : d_(d) {
    if (d < 0) throw Error(ErrorCode::out_of_range, "negative diameter");
    grid_.resize(static_cast<std::size_t>((d + 1) * (d + 1)));
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) at(i, j) = binomial(d, j) * hypergeometric_2f1(i, j, d);
  }

  int d() const noexcept { return d_; }
  const Rational& operator()(int i, int j) const { return grid_[static_cast<std::size_t>(i * (d_ + 1) + j)]; }
  Rational& at(int i, int j) { return grid_[static_cast<std::size_t>(i * (d_ + 1) + j)]; }

  ExactMatrix as_matrix() const {
    ExactMatrix m(static_cast<std::size_t>(d_ + 1), static_cast<std::size_t>(d_ + 1));
    for (int i = 0; i <= d_; ++i)
      for (int j = 0; j <= d_; ++j) m(i, j) = GaussRat((*this)(i, j));
    return m;
  }

 private:
  int d_;
  std::vector<Rational> grid_;
};

inline PhiMatrix phi_matrix(int d) { return PhiMatrix(d); }

/// Checks the i-recurrence of the series for every 2 <= i <= d, 0 <= j <= d.
inline bool verify_krawtchouk_recurrence(int d) {
  for (int i = 2; i <= d; ++i)
    for (int j = 0; j <= d; ++j)
      if (!(hypergeometric_2f1(i, j, d) == krawtchouk_recurrence_rhs(i, j, d))) return false;
  return true;
}

}  // namespace cubetriple
