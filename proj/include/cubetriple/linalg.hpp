#pragma once

// Exact elimination-based routines: rank, null space, orthogonalisation and
// coordinate extraction with respect to a (not necessarily orthogonal) basis.

#include <optional>
#include <vector>

#include "cubetriple/error.hpp"
#include "cubetriple/matrix.hpp"

namespace cubetriple {

namespace detail {

// Scales each row by the lcm of its denominators so every entry is a
// Gaussian integer; row scaling does not change the row space.
inline void clear_row_denominators(std::vector<std::vector<GaussRat>>& rows) {
  for (auto& row : rows) {
    mpz_class lcm = 1;
    for (const auto& x : row) {
      for (const Rational* q : {&x.re(), &x.im()})
        if (!q->is_integer()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q->denominator().get_mpz_t());
    }
    if (lcm == 1) continue;
    GaussRat s(Rational::from_mpq(mpq_class(lcm)));
    for (auto& x : row)
      if (!x.is_zero()) x = s * x;
  }
}

struct Echelon {
  std::vector<std::vector<GaussRat>> rows;  // first `pivots.size()` rows are the echelon rows
  std::vector<std::size_t> pivots;          // pivot column of each echelon row
};

// Fraction-free (Bareiss) forward elimination. Each update
//   row_i <- (p * row_i - a_i * row_k) / p_prev
// is an exact division in Z[i] by Sylvester's identity.
inline Echelon bareiss_echelon(const ExactMatrix& b) {
  Echelon e;
  e.rows.assign(b.rows(), std::vector<GaussRat>(b.cols()));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) e.rows[r][c] = b(r, c);
  clear_row_denominators(e.rows);
  const std::size_t m = b.rows();
  const std::size_t n = b.cols();
  GaussRat prev(1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t p = rank;
    while (p < m && e.rows[p][col].is_zero()) ++p;
    if (p == m) continue;
    std::swap(e.rows[p], e.rows[rank]);
    const auto& piv_row = e.rows[rank];
    const GaussRat piv = piv_row[col];
    for (std::size_t i = rank + 1; i < m; ++i) {
      auto& row = e.rows[i];
      const GaussRat a = row[col];
      for (std::size_t j = col + 1; j < n; ++j) {
        GaussRat v = piv * row[j];
        if (!a.is_zero() && !piv_row[j].is_zero()) v -= a * piv_row[j];
        row[j] = prev == GaussRat(1) ? v : v / prev;
      }
      row[col] = GaussRat();
    }
    prev = piv;
    e.pivots.push_back(col);
    ++rank;
  }
  return e;
}

// Solves g * x = rhs for square nonsingular g by Gauss-Jordan elimination;
// rhs may hold several right-hand sides as columns.
inline ExactMatrix solve_square(ExactMatrix g, ExactMatrix rhs) {
  const std::size_t n = g.rows();
  if (!g.is_square() || rhs.rows() != n) throw Error(ErrorCode::dimension_mismatch, "solve_square shape");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && g(p, col).is_zero()) ++p;
    if (p == n) throw Error(ErrorCode::singular_system, "coefficient system is singular");
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(g(p, j), g(col, j));
      for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(p, j), rhs(col, j));
    }
    GaussRat inv = g(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) g(col, j) *= inv;
    for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(col, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || g(i, col).is_zero()) continue;
      GaussRat f = g(i, col);
      for (std::size_t j = 0; j < n; ++j)
        if (!g(col, j).is_zero()) g(i, j) -= f * g(col, j);
      for (std::size_t j = 0; j < rhs.cols(); ++j)
        if (!rhs(col, j).is_zero()) rhs(i, j) -= f * rhs(col, j);
    }
  }
  return rhs;
}

}  // namespace detail

inline std::size_t rank(const ExactMatrix& b) { return detail::bareiss_echelon(b).pivots.size(); }

/// Basis of {v : b v = 0}, one vector per non-pivot column in increasing
/// column order, with a 1 in that free coordinate and 0 in the other free ones.
inline std::vector<ExactVector> kernel_basis(const ExactMatrix& b) {
  auto e = detail::bareiss_echelon(b);
  const std::size_t n = b.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<ExactVector> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    ExactVector x(n);
    x[f] = GaussRat(1);
    for (std::size_t k = e.pivots.size(); k-- > 0;) {
      const auto& row = e.rows[k];
      std::size_t pc = e.pivots[k];
      GaussRat s;
      for (std::size_t j = pc + 1; j < n; ++j)
        if (!row[j].is_zero() && !x[j].is_zero()) s += row[j] * x[j];
      if (!s.is_zero()) x[pc] = -s / row[pc];
    }
    out.push_back(std::move(x));
  }
  return out;
}

/// Pairwise-orthogonal vectors with the same span; lengths are left as they
/// fall (no normalisation).
inline std::vector<ExactVector> gram_schmidt(const std::vector<ExactVector>& vs) {
  std::vector<ExactVector> out;
  std::vector<Rational> norms;
  out.reserve(vs.size());
  for (std::size_t k = 0; k < vs.size(); ++k) {
    ExactVector w = vs[k];
    for (std::size_t j = 0; j < out.size(); ++j) {
      GaussRat c = inner(vs[k], out[j]) / GaussRat(norms[j]);
      if (!c.is_zero()) w = w - c * out[j];
    }
    Rational n = norm_sq(w);
    if (n.is_zero())
      throw Error(ErrorCode::dependent_input, "vector " + std::to_string(k) + " lies in the span of its predecessors");
    out.push_back(std::move(w));
    norms.push_back(std::move(n));
  }
  return out;
}

/// Coordinates with respect to a fixed list of linearly independent vectors.
/// Coefficients come from the Gram system and are then checked by exact
/// reconstruction, so a vector outside the span is reported as such.
class BasisCoordinates {
 public:
  explicit BasisCoordinates(std::vector<ExactVector> basis) : basis_(std::move(basis)) {
    const std::size_t k = basis_.size();
    gram_ = ExactMatrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) gram_(i, j) = inner(basis_[j], basis_[i]);
    // probing the Gram matrix once surfaces dependence up front
    detail::solve_square(gram_, ExactMatrix::identity(k));
  }

  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<ExactVector>& basis() const noexcept { return basis_; }

  std::optional<std::vector<GaussRat>> coordinates(const ExactVector& y) const {
    auto solved = solve_many({y});
    if (!solved) return std::nullopt;
    return solved->front();
  }

  /// Matrix B with op(basis_j) = sum_i B_ij basis_i; throws when some image
  /// leaves the span.
  ExactMatrix represent(const ExactMatrix& op) const {
    std::vector<ExactVector> images;
    images.reserve(basis_.size());
    for (const auto& b : basis_) images.push_back(op * b);
    return transition_to(images);
  }

  /// Matrix C with targets_j = sum_i C_ij basis_i.
  ExactMatrix transition_to(const std::vector<ExactVector>& targets) const {
    auto solved = solve_many(targets);
    if (!solved) throw Error(ErrorCode::invariant_violation, "target vector outside the basis span");
    ExactMatrix c(basis_.size(), targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j)
      for (std::size_t i = 0; i < basis_.size(); ++i) c(i, j) = (*solved)[j][i];
    return c;
  }

 private:
  std::optional<std::vector<std::vector<GaussRat>>> solve_many(const std::vector<ExactVector>& ys) const {
    const std::size_t k = basis_.size();
    ExactMatrix rhs(k, ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j)
      for (std::size_t i = 0; i < k; ++i) rhs(i, j) = inner(ys[j], basis_[i]);
    ExactMatrix sol = detail::solve_square(gram_, rhs);
    std::vector<std::vector<GaussRat>> out(ys.size(), std::vector<GaussRat>(k));
    for (std::size_t j = 0; j < ys.size(); ++j) {
      ExactVector rebuilt(ys[j].size());
      for (std::size_t i = 0; i < k; ++i) {
        out[j][i] = sol(i, j);
        if (!sol(i, j).is_zero()) rebuilt = rebuilt + sol(i, j) * basis_[i];
      }
      if (!(rebuilt == ys[j])) return std::nullopt;
    }
    return out;
  }

  std::vector<ExactVector> basis_;
  ExactMatrix gram_;
};

inline bool in_span(const std::vector<ExactVector>& basis, const ExactVector& y) {
  if (basis.empty()) return y.is_zero();
  return BasisCoordinates(basis).coordinates(y).has_value();
}

/// Inverse of a small square matrix by Gauss-Jordan elimination.
inline ExactMatrix inverse(const ExactMatrix& b) {
  if (!b.is_square()) throw Error(ErrorCode::dimension_mismatch, "inverse of non-square matrix");
  return detail::solve_square(b, ExactMatrix::identity(b.rows()));
}

}  // namespace cubetriple
