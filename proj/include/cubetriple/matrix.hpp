#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cubetriple/error.hpp"
#include "cubetriple/gauss_rat.hpp"

namespace cubetriple {

class ExactVector {
 public:
  ExactVector() = default;
  explicit ExactVector(std::size_t length) : entries_(length) {}
  explicit ExactVector(std::vector<GaussRat> entries) : entries_(std::move(entries)) {}
  ExactVector(std::initializer_list<GaussRat> entries) : entries_(entries) {}

  static ExactVector unit(std::size_t length, std::size_t k) {
    ExactVector v(length);
    v[k] = GaussRat(1);
    return v;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const GaussRat& operator[](std::size_t k) const { return entries_[k]; }
  GaussRat& operator[](std::size_t k) { return entries_[k]; }
  std::span<const GaussRat> entries() const noexcept { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const GaussRat& x) { return x.is_zero(); });
  }

  friend bool operator==(const ExactVector& a, const ExactVector& b) = default;

  friend ExactVector operator+(const ExactVector& a, const ExactVector& b) {
    check_same(a, b);
    ExactVector out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return out;
  }
  friend ExactVector operator-(const ExactVector& a, const ExactVector& b) {
    check_same(a, b);
    ExactVector out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
    return out;
  }
  friend ExactVector operator*(const GaussRat& s, const ExactVector& v) {
    ExactVector out(v.size());
    if (s.is_zero()) return out;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_zero()) out[k] = s * v[k];
    return out;
  }

 private:
  static void check_same(const ExactVector& a, const ExactVector& b) {
    if (a.size() != b.size())
      throw Error(ErrorCode::dimension_mismatch,
                  "vector lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }

  std::vector<GaussRat> entries_;
};

/// Dense row-major matrix over Q(i).
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  ExactMatrix(std::initializer_list<std::initializer_list<GaussRat>> grid) {
    rows_ = grid.size();
    cols_ = rows_ ? grid.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& row : grid) {
      if (row.size() != cols_) throw Error(ErrorCode::dimension_mismatch, "ragged matrix literal");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static ExactMatrix identity(std::size_t n) { return scalar(n, GaussRat(1)); }

  static ExactMatrix scalar(std::size_t n, const GaussRat& s) {
    ExactMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = s;
    return m;
  }

  static ExactMatrix diagonal(std::span<const GaussRat> diag) {
    ExactMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) m(k, k) = diag[k];
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static ExactMatrix from_columns(std::span<const ExactVector> columns) {
    if (columns.empty()) return ExactMatrix();
    ExactMatrix m(columns[0].size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != m.rows_) throw Error(ErrorCode::dimension_mismatch, "column lengths differ");
      for (std::size_t r = 0; r < m.rows_; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  const GaussRat& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  GaussRat& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::span<const GaussRat> entries() const noexcept { return entries_; }

  ExactVector column(std::size_t c) const {
    ExactVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  std::vector<ExactVector> columns() const {
    std::vector<ExactVector> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
    return out;
  }

  std::size_t nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const GaussRat& x) { return !x.is_zero(); }));
  }

  bool is_zero() const { return nonzero_count() == 0; }

  bool is_diagonal() const {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (r != c && !(*this)(r, c).is_zero()) return false;
    return true;
  }

  GaussRat trace() const {
    GaussRat t;
    for (std::size_t k = 0; k < std::min(rows_, cols_); ++k) t += (*this)(k, k);
    return t;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  ExactMatrix conjugate() const {
    ExactMatrix m = *this;
    for (auto& x : m.entries_) x = x.conj();
    return m;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) = default;

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
    check_same_shape(a, b);
    ExactMatrix out(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.entries_.size(); ++k) out.entries_[k] = a.entries_[k] + b.entries_[k];
    return out;
  }
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
    check_same_shape(a, b);
    ExactMatrix out(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.entries_.size(); ++k) out.entries_[k] = a.entries_[k] - b.entries_[k];
    return out;
  }
  friend ExactMatrix operator*(const GaussRat& s, const ExactMatrix& m) {
    ExactMatrix out(m.rows_, m.cols_);
    if (s.is_zero()) return out;
    for (std::size_t k = 0; k < m.entries_.size(); ++k)
      if (!m.entries_[k].is_zero()) out.entries_[k] = s * m.entries_[k];
    return out;
  }
  ExactMatrix operator-() const { return GaussRat(-1) * *this; }

  /// First (row, col) where the two matrices differ, or nullopt when equal.
  friend std::optional<std::pair<std::size_t, std::size_t>> first_difference(const ExactMatrix& a,
                                                                              const ExactMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return std::make_pair(std::size_t(0), std::size_t(0));
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t c = 0; c < a.cols_; ++c)
        if (!(a(r, c) == b(r, c))) return std::make_pair(r, c);
    return std::nullopt;
  }

 private:
  static void check_same_shape(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error(ErrorCode::dimension_mismatch, std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                                     " vs " + std::to_string(b.rows_) + "x" +
                                                     std::to_string(b.cols_));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussRat> entries_;
};

namespace detail {

// Gaussian-integer image of a matrix: entries (re[k] + im[k] i) / scale with
// every value in int64. Absent when some entry is a big rational or the
// common denominator / scaled numerators overflow.
struct IntegerForm {
  std::vector<std::int64_t> re;
  std::vector<std::int64_t> im;
  std::int64_t scale = 1;
  std::uint64_t max_abs = 0;
};

inline std::optional<IntegerForm> integer_form(std::span<const GaussRat> entries) {
  constexpr int128 limit = int128(1) << 62;
  int128 lcm = 1;
  for (const auto& x : entries) {
    for (const Rational* q : {&x.re(), &x.im()}) {
      if (!q->is_small()) return std::nullopt;
      std::int64_t den = q->small_den();
      if (den == 1) continue;
      uint128 g = gcd128(uint128(lcm), uint128(den));
      lcm = lcm / int128(g) * den;
      if (lcm > limit) return std::nullopt;
    }
  }
  IntegerForm f;
  f.scale = static_cast<std::int64_t>(lcm);
  f.re.resize(entries.size());
  f.im.resize(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& x = entries[k];
    int128 re = int128(x.re().small_num()) * (lcm / x.re().small_den());
    int128 im = int128(x.im().small_num()) * (lcm / x.im().small_den());
    if (!fits_small(re) || !fits_small(im)) return std::nullopt;
    f.re[k] = static_cast<std::int64_t>(re);
    f.im[k] = static_cast<std::int64_t>(im);
    f.max_abs = std::max({f.max_abs, static_cast<std::uint64_t>(abs128(re)), static_cast<std::uint64_t>(abs128(im))});
  }
  return f;
}

// Product of a (n x m) and b (m x p), both given as flat row-major entries.
// Uses an exact Gaussian-integer kernel with 128-bit accumulation when the
// magnitudes allow it, otherwise plain field arithmetic.
inline std::vector<GaussRat> multiply_flat(std::span<const GaussRat> a, std::span<const GaussRat> b,
                                           std::size_t n, std::size_t m, std::size_t p) {
  std::vector<GaussRat> out(n * p);
  auto fa = integer_form(a);
  auto fb = fa ? integer_form(b) : std::nullopt;
  bool fast = fa && fb;
  if (fast) {
    // |sum| <= 2 * m * max_a * max_b must stay well inside int128
    long double bound = 2.0L * static_cast<long double>(m) * static_cast<long double>(fa->max_abs) *
                        static_cast<long double>(fb->max_abs);
    fast = bound < 1e37L;
  }
  if (fast) {
    // nonzero column lists of b's rows make sparse right factors cheap
    std::vector<std::vector<std::size_t>> row_nz(m);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < p; ++j)
        if (fb->re[k * p + j] != 0 || fb->im[k * p + j] != 0) row_nz[k].push_back(j);
    std::vector<int128> acc_re(p), acc_im(p);
    int128 scale = int128(fa->scale) * fb->scale;
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(acc_re.begin(), acc_re.end(), 0);
      std::fill(acc_im.begin(), acc_im.end(), 0);
      for (std::size_t k = 0; k < m; ++k) {
        int128 ar = fa->re[i * m + k];
        int128 ai = fa->im[i * m + k];
        if (ar == 0 && ai == 0) continue;
        const std::int64_t* br = &fb->re[k * p];
        const std::int64_t* bi = &fb->im[k * p];
        if (ai == 0) {
          for (std::size_t j : row_nz[k]) {
            acc_re[j] += ar * br[j];
            acc_im[j] += ar * bi[j];
          }
        } else {
          for (std::size_t j : row_nz[k]) {
            acc_re[j] += ar * br[j] - ai * bi[j];
            acc_im[j] += ar * bi[j] + ai * br[j];
          }
        }
      }
      for (std::size_t j = 0; j < p; ++j) {
        if (acc_re[j] == 0 && acc_im[j] == 0) continue;
        out[i * p + j] = GaussRat(Rational::from_int128(acc_re[j], scale), Rational::from_int128(acc_im[j], scale));
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const GaussRat& x = a[i * m + k];
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < p; ++j) {
        const GaussRat& y = b[k * p + j];
        if (!y.is_zero()) out[i * p + j] += x * y;
      }
    }
  return out;
}

}  // namespace detail

inline ExactMatrix matmul(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::dimension_mismatch, "matmul inner dimensions " + std::to_string(a.cols()) + " and " +
                                                   std::to_string(b.rows()));
  auto flat = detail::multiply_flat(a.entries(), b.entries(), a.rows(), a.cols(), b.cols());
  ExactMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) = std::move(flat[r * b.cols() + c]);
  return out;
}

inline ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) { return matmul(a, b); }

inline ExactVector matvec(const ExactMatrix& a, const ExactVector& v) {
  if (a.cols() != v.size())
    throw Error(ErrorCode::dimension_mismatch, "matvec with " + std::to_string(a.cols()) + " columns and length " +
                                                   std::to_string(v.size()));
  return ExactVector(detail::multiply_flat(a.entries(), v.entries(), a.rows(), a.cols(), 1));
}

inline ExactVector operator*(const ExactMatrix& a, const ExactVector& v) { return matvec(a, v); }

/// Kronecker product; row index of the result is u * rows(b) + u'.
inline ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t u = 0; u < a.rows(); ++u)
    for (std::size_t v = 0; v < a.cols(); ++v) {
      const GaussRat& x = a(u, v);
      if (x.is_zero()) continue;
      for (std::size_t up = 0; up < b.rows(); ++up)
        for (std::size_t vp = 0; vp < b.cols(); ++vp) {
          const GaussRat& y = b(up, vp);
          if (!y.is_zero()) out(u * b.rows() + up, v * b.cols() + vp) = x * y;
        }
    }
  return out;
}

/// b tensored with itself `power` times; power 0 gives the 1x1 identity.
inline ExactMatrix kron_power(const ExactMatrix& b, unsigned power) {
  ExactMatrix out = ExactMatrix::identity(1);
  for (unsigned k = 0; k < power; ++k) out = kron(out, b);
  return out;
}

/// Conjugate transpose.
inline ExactMatrix adjoint(const ExactMatrix& b) { return b.transpose().conjugate(); }

/// Hermitian inner product sum_k u_k * conj(v_k); the second argument is conjugated.
inline GaussRat inner(const ExactVector& u, const ExactVector& v) {
  if (u.size() != v.size())
    throw Error(ErrorCode::dimension_mismatch,
                "inner product of lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  GaussRat acc;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].is_zero() || v[k].is_zero()) continue;
    acc += u[k] * v[k].conj();
  }
  return acc;
}

/// ||v||^2 as a nonnegative rational.
inline Rational norm_sq(const ExactVector& v) {
  Rational acc;
  for (const auto& x : v.entries())
    if (!x.is_zero()) acc += x.norm();
  return acc;
}

/// Integer power of a square matrix (n >= 0).
inline ExactMatrix matrix_power(const ExactMatrix& b, unsigned n) {
  ExactMatrix out = ExactMatrix::identity(b.rows());
  for (unsigned k = 0; k < n; ++k) out = out * b;
  return out;
}

inline ExactMatrix commutator(const ExactMatrix& a, const ExactMatrix& b) { return a * b - b * a; }

}  // namespace cubetriple
