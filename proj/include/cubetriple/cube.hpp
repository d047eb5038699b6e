#pragma once

// Operators of the D-cube Q_D relative to the base vertex x = (0,...,0):
// adjacency A, dual adjacency A*, imaginary adjacency Ae, the conjugating
// matrix P, distance matrices and the three idempotent families.
//
// Vertex (t_1, ..., t_D) has index sum_k t_k 2^(D-k), so t_1 is the most
// significant bit and Kronecker factors appear in coordinate order.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "cubetriple/error.hpp"
#include "cubetriple/linalg.hpp"
#include "cubetriple/matrix.hpp"
#include "cubetriple/report.hpp"

namespace cubetriple {

inline constexpr unsigned k_default_d_limit = 10;

struct ContextOptions {
  unsigned d_limit = k_default_d_limit;
  bool primitive = true;  // E_0..E_D
  bool dual = true;       // E*_0..E*_D
  bool imaginary = true;  // Ee_0..Ee_D (needs the primitive family)
  bool distances = true;  // A_0..A_D
};

struct CubeContext {
  unsigned D = 0;
  std::size_t size = 0;  // 2^D
  std::size_t base_point = 0;
  ExactMatrix A;
  ExactMatrix Astar;
  ExactMatrix Aeps;
  ExactMatrix P;
  ExactMatrix P_inv;
  std::vector<ExactMatrix> dist_matrices;
  std::vector<ExactMatrix> E;
  std::vector<ExactMatrix> Estar;
  std::vector<ExactMatrix> Eeps;

  /// Eigenvalue D - 2i shared by A, A* and Ae.
  long long theta(unsigned i) const { return static_cast<long long>(D) - 2 * static_cast<long long>(i); }
};

inline unsigned hamming_weight(std::size_t y) { return static_cast<unsigned>(std::popcount(y)); }
inline unsigned cube_distance(std::size_t y, std::size_t z) { return hamming_weight(y ^ z); }

/// Index of the vertex (t_1, ..., t_D); t_1 is the most significant bit.
inline std::size_t vertex_index(const std::vector<int>& tuple) {
  std::size_t y = 0;
  for (int t : tuple) y = (y << 1) | static_cast<std::size_t>(t != 0);
  return y;
}

inline std::vector<int> vertex_tuple(std::size_t y, unsigned D) {
  std::vector<int> t(D);
  for (unsigned k = 0; k < D; ++k) t[k] = static_cast<int>((y >> (D - 1 - k)) & 1U);
  return t;
}

namespace detail {

// sum_{i=0}^{D-1} I^{(x)i} (x) factor (x) I^{(x)(D-1-i)}
inline ExactMatrix kronecker_sum(const ExactMatrix& factor, unsigned D) {
  const std::size_t n = std::size_t(1) << D;
  ExactMatrix total(n, n);
  const ExactMatrix id2 = ExactMatrix::identity(2);
  for (unsigned i = 0; i < D; ++i)
    total = total + kron(kron(kron_power(id2, i), factor), kron_power(id2, D - 1 - i));
  return total;
}

inline ExactMatrix interpolation_idempotent(const ExactMatrix& op, unsigned D, unsigned i) {
  const std::size_t n = op.rows();
  ExactMatrix acc = ExactMatrix::identity(n);
  Rational denom(1);
  const long long theta_i = static_cast<long long>(D) - 2LL * i;
  for (unsigned j = 0; j <= D; ++j) {
    if (j == i) continue;
    const long long theta_j = static_cast<long long>(D) - 2LL * j;
    acc = acc * (op - ExactMatrix::scalar(n, GaussRat(theta_j)));
    denom *= Rational(theta_i - theta_j);
  }
  return GaussRat(denom.inverse()) * acc;
}

}  // namespace detail

inline ExactMatrix adjacency_q1() { return ExactMatrix{{0, 1}, {1, 0}}; }
inline ExactMatrix dual_adjacency_q1() { return ExactMatrix{{1, 0}, {0, -1}}; }
inline ExactMatrix imaginary_adjacency_q1() {
  return ExactMatrix{{0, GaussRat::i()}, {-GaussRat::i(), 0}};
}
/// P_1 = [[1, 1], [-i, i]].
inline ExactMatrix p_matrix_q1() { return ExactMatrix{{1, 1}, {-GaussRat::i(), GaussRat::i()}}; }

/// A_i: (y,z)-entry 1 iff the Hamming distance of y and z is i.
inline ExactMatrix distance_matrix(unsigned D, unsigned i) {
  const std::size_t n = std::size_t(1) << D;
  ExactMatrix m(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t z = 0; z < n; ++z)
      if (cube_distance(y, z) == i) m(y, z) = GaussRat(1);
  return m;
}

inline ExactMatrix dual_adjacency_from_distances(unsigned D) {
  const std::size_t n = std::size_t(1) << D;
  ExactMatrix m(n, n);
  for (std::size_t y = 0; y < n; ++y) m(y, y) = GaussRat(static_cast<long long>(D) - 2LL * hamming_weight(y));
  return m;
}

/// P = P_1^{(x)D}.
inline ExactMatrix build_P(unsigned D) { return kron_power(p_matrix_q1(), D); }

/// Permutation matrix of the coordinate transposition (a b): entry (y, z) is
/// 1 iff y with coordinates a and b swapped equals z (coordinates 1-based).
inline ExactMatrix transposition_matrix(unsigned D, unsigned a, unsigned b) {
  const std::size_t n = std::size_t(1) << D;
  ExactMatrix m(n, n);
  for (std::size_t y = 0; y < n; ++y) {
    auto t = vertex_tuple(y, D);
    std::swap(t[a - 1], t[b - 1]);
    m(y, vertex_index(t)) = GaussRat(1);
  }
  return m;
}

/// Ae = -i (A A* - A* A) / 2, cross-checked against the entry formula
/// i (d(x,z) - d(x,y)) A_yz and against the Kronecker sum of Ae_1.
inline ExactMatrix imaginary_adjacency(const CubeContext& ctx) {
  const GaussRat scale = GaussRat(Rational(0), Rational(-1, 2));
  ExactMatrix aeps = scale * commutator(ctx.A, ctx.Astar);

  ExactMatrix by_entries(ctx.size, ctx.size);
  for (std::size_t y = 0; y < ctx.size; ++y)
    for (std::size_t z = 0; z < ctx.size; ++z)
      if (!ctx.A(y, z).is_zero()) {
        long long diff = static_cast<long long>(hamming_weight(z)) - hamming_weight(y);
        by_entries(y, z) = GaussRat(Rational(0), Rational(diff)) * ctx.A(y, z);
      }
  if (!(aeps == by_entries))
    throw Error(ErrorCode::invariant_violation, "imaginary adjacency disagrees with its entry formula");
  if (!(aeps == detail::kronecker_sum(imaginary_adjacency_q1(), ctx.D)))
    throw Error(ErrorCode::invariant_violation, "imaginary adjacency disagrees with its Kronecker sum");
  return aeps;
}

inline std::vector<ExactMatrix> primitive_idempotents(const CubeContext& ctx) {
  std::vector<ExactMatrix> out;
  for (unsigned i = 0; i <= ctx.D; ++i) out.push_back(detail::interpolation_idempotent(ctx.A, ctx.D, i));
  return out;
}

/// Diagonal projections onto the distance slices of the base vertex.
inline std::vector<ExactMatrix> dual_idempotents(const CubeContext& ctx) {
  std::vector<ExactMatrix> out(ctx.D + 1, ExactMatrix(ctx.size, ctx.size));
  for (std::size_t y = 0; y < ctx.size; ++y) out[hamming_weight(y)](y, y) = GaussRat(1);
  return out;
}

/// Ee_i = P^-1 E_i P.
inline std::vector<ExactMatrix> imaginary_idempotents(const CubeContext& ctx) {
  if (ctx.E.size() != ctx.D + 1)
    throw Error(ErrorCode::invariant_violation, "imaginary idempotents need the primitive family");
  std::vector<ExactMatrix> out;
  for (const auto& e : ctx.E) out.push_back(ctx.P_inv * e * ctx.P);
  return out;
}

inline CubeContext build_context(unsigned D, const ContextOptions& options = {}) {
  if (D < 1 || D > options.d_limit)
    throw Error(ErrorCode::out_of_range,
                "D = " + std::to_string(D) + " outside 1.." + std::to_string(options.d_limit));
  CubeContext ctx;
  ctx.D = D;
  ctx.size = std::size_t(1) << D;
  ctx.base_point = 0;

  if (options.distances)
    for (unsigned i = 0; i <= D; ++i) ctx.dist_matrices.push_back(distance_matrix(D, i));
  ctx.A = options.distances ? ctx.dist_matrices[1] : distance_matrix(D, 1);
  if (!(ctx.A == detail::kronecker_sum(adjacency_q1(), D)))
    throw Error(ErrorCode::invariant_violation, "adjacency disagrees with its Kronecker sum");

  ctx.Astar = dual_adjacency_from_distances(D);
  if (!(ctx.Astar == detail::kronecker_sum(dual_adjacency_q1(), D)))
    throw Error(ErrorCode::invariant_violation, "dual adjacency disagrees with its Kronecker sum");

  ctx.Aeps = imaginary_adjacency(ctx);
  ctx.P = build_P(D);
  ctx.P_inv = GaussRat(pow2(-static_cast<long long>(D))) * adjoint(ctx.P);

  if (options.primitive || options.imaginary) ctx.E = primitive_idempotents(ctx);
  if (options.dual) ctx.Estar = dual_idempotents(ctx);
  if (options.imaginary) ctx.Eeps = imaginary_idempotents(ctx);
  if (!options.primitive) ctx.E.clear();
  return ctx;
}

/// The three commutator relations and the two tridiagonal relations.
inline std::vector<IdentityCheck> verify_commutators(const CubeContext& ctx) {
  const GaussRat two_i(Rational(0), Rational(2));
  const ExactMatrix& A = ctx.A;
  const ExactMatrix& As = ctx.Astar;
  const ExactMatrix& Ae = ctx.Aeps;
  std::vector<IdentityCheck> out;
  out.push_back(check_equal("A A* - A* A = 2i Ae", commutator(A, As), two_i * Ae));
  out.push_back(check_equal("A* Ae - Ae A* = 2i A", commutator(As, Ae), two_i * A));
  out.push_back(check_equal("Ae A - A Ae = 2i A*", commutator(Ae, A), two_i * As));
  ExactMatrix star_a = As * A;
  ExactMatrix a_star = A * As;
  out.push_back(check_equal("A*^2 A - 2 A* A A* + A A*^2 = 4 A",
                            As * star_a - GaussRat(2) * (star_a * As) + a_star * As, GaussRat(4) * A));
  out.push_back(check_equal("A^2 A* - 2 A A* A + A* A^2 = 4 A*",
                            A * a_star - GaussRat(2) * (a_star * A) + star_a * A, GaussRat(4) * As));
  return out;
}

/// P P^H = P^H P = 2^D I, P^3 = 2^D (1-i)^D I, the conjugation cycle
/// A -> A* -> Ae -> A under X -> P X P^-1, and P commuting with every
/// coordinate transposition.
inline std::vector<IdentityCheck> verify_conjugation(const CubeContext& ctx) {
  const std::size_t n = ctx.size;
  const ExactMatrix Ph = adjoint(ctx.P);
  const ExactMatrix scaled_id = ExactMatrix::scalar(n, GaussRat(pow2(ctx.D)));
  std::vector<IdentityCheck> out;
  out.push_back(check_equal("P adj(P) = 2^D I", ctx.P * Ph, scaled_id));
  out.push_back(check_equal("adj(P) P = 2^D I", Ph * ctx.P, scaled_id));
  out.push_back(check_equal("P P^-1 = I", ctx.P * ctx.P_inv, ExactMatrix::identity(n)));
  const GaussRat cube_scalar =
      GaussRat(pow2(ctx.D)) * int_power(GaussRat(Rational(1), Rational(-1)), static_cast<long long>(ctx.D));
  out.push_back(check_equal("P^3 = 2^D (1-i)^D I", ctx.P * ctx.P * ctx.P, ExactMatrix::scalar(n, cube_scalar)));
  out.push_back(check_equal("P A P^-1 = A*", ctx.P * ctx.A * ctx.P_inv, ctx.Astar));
  out.push_back(check_equal("P A* P^-1 = Ae", ctx.P * ctx.Astar * ctx.P_inv, ctx.Aeps));
  out.push_back(check_equal("P Ae P^-1 = A", ctx.P * ctx.Aeps * ctx.P_inv, ctx.A));
  CheckAccumulator commutes("P M_sigma = M_sigma P for all transpositions");
  for (unsigned a = 1; a <= ctx.D; ++a)
    for (unsigned b = a + 1; b <= ctx.D; ++b) {
      ExactMatrix m = transposition_matrix(ctx.D, a, b);
      commutes.require(ctx.P * m, m * ctx.P);
    }
  out.push_back(commutes.result());
  return out;
}

/// Rank of an idempotent matrix: it equals the trace once E^2 = E holds.
inline std::size_t idempotent_rank(const ExactMatrix& e) {
  if (!(e * e == e)) throw Error(ErrorCode::invariant_violation, "matrix is not idempotent");
  GaussRat t = e.trace();
  if (!t.is_real() || !t.re().is_integer() || t.re().sign() < 0)
    throw Error(ErrorCode::invariant_violation, "idempotent trace is not a nonnegative integer");
  return static_cast<std::size_t>(mpz_get_ui(t.re().numerator().get_mpz_t()));
}

namespace detail {

inline void family_checks(std::vector<IdentityCheck>& out, const CubeContext& ctx, const std::string& name,
                          const std::vector<ExactMatrix>& family, const ExactMatrix& op, bool check_real) {
  const std::size_t n = ctx.size;
  ExactMatrix sum(n, n);
  for (const auto& e : family) sum = sum + e;
  out.push_back(check_equal("sum " + name + "_i = I", sum, ExactMatrix::identity(n)));

  CheckAccumulator transpose(name + "_i^t = " + name + "_i");
  CheckAccumulator real("conj(" + name + "_i) = " + name + "_i");
  CheckAccumulator hermitian("adj(" + name + "_i) = " + name + "_i");
  CheckAccumulator products(name + "_i " + name + "_j = delta_ij " + name + "_i");
  CheckAccumulator eigen("op " + name + "_i = " + name + "_i op = theta_i " + name + "_i");
  CheckAccumulator ranks("rank " + name + "_i = C(D,i)");
  ExactMatrix spectral(n, n);
  for (unsigned i = 0; i <= ctx.D; ++i) {
    const auto& e = family[i];
    if (check_real) {
      transpose.require(e.transpose(), e);
      real.require(e.conjugate(), e);
    }
    hermitian.require(adjoint(e), e);
    for (unsigned j = 0; j <= ctx.D; ++j) products.require(e * family[j], i == j ? e : ExactMatrix(n, n));
    ExactMatrix scaled = GaussRat(ctx.theta(i)) * e;
    eigen.require(op * e, scaled);
    eigen.require(e * op, scaled);
    spectral = spectral + scaled;
    if (products.ok()) {
      GaussRat t = e.trace();
      mpz_class expected;
      mpz_bin_uiui(expected.get_mpz_t(), ctx.D, i);
      ranks.require(t == GaussRat(Rational::from_mpq(mpq_class(expected))));
    } else {
      ranks.require(false);
    }
  }
  if (check_real) {
    out.push_back(transpose.result());
    out.push_back(real.result());
  }
  out.push_back(hermitian.result());
  out.push_back(products.result());
  out.push_back(eigen.result());
  out.push_back(check_equal("op = sum theta_i " + name + "_i", spectral, op));
  out.push_back(ranks.result());
}

}  // namespace detail

/// Defining relations of the primitive, dual and imaginary idempotents plus
/// the cross-checks between their independent constructions.
inline std::vector<IdentityCheck> verify_idempotents(const CubeContext& ctx) {
  if (ctx.E.size() != ctx.D + 1 || ctx.Estar.size() != ctx.D + 1 || ctx.Eeps.size() != ctx.D + 1)
    throw Error(ErrorCode::invariant_violation, "context was built without all idempotent families");
  const std::size_t n = ctx.size;
  std::vector<IdentityCheck> out;
  ExactMatrix all_ones(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) all_ones(r, c) = GaussRat(1);
  out.push_back(check_equal("E_0 = J / 2^D", ctx.E[0], GaussRat(pow2(-static_cast<long long>(ctx.D))) * all_ones));
  detail::family_checks(out, ctx, "E", ctx.E, ctx.A, true);
  detail::family_checks(out, ctx, "E*", ctx.Estar, ctx.Astar, true);
  detail::family_checks(out, ctx, "Ee", ctx.Eeps, ctx.Aeps, false);

  CheckAccumulator dual_interp("E*_i = interpolation polynomial in A*");
  CheckAccumulator eps_interp("Ee_i = interpolation polynomial in Ae");
  CheckAccumulator cyc1("E*_i = P E_i P^-1");
  CheckAccumulator cyc2("Ee_i = P E*_i P^-1");
  CheckAccumulator cyc3("E_i = P Ee_i P^-1");
  for (unsigned i = 0; i <= ctx.D; ++i) {
    dual_interp.require(detail::interpolation_idempotent(ctx.Astar, ctx.D, i), ctx.Estar[i]);
    eps_interp.require(detail::interpolation_idempotent(ctx.Aeps, ctx.D, i), ctx.Eeps[i]);
    cyc1.require(ctx.P * ctx.E[i] * ctx.P_inv, ctx.Estar[i]);
    cyc2.require(ctx.P * ctx.Estar[i] * ctx.P_inv, ctx.Eeps[i]);
    cyc3.require(ctx.P * ctx.Eeps[i] * ctx.P_inv, ctx.E[i]);
  }
  out.push_back(dual_interp.result());
  out.push_back(eps_interp.result());
  out.push_back(cyc1.result());
  out.push_back(cyc2.result());
  out.push_back(cyc3.result());
  return out;
}

/// p^h_{1j} for Q_D: nonzero exactly when j = h - 1 >= 0 or j = h + 1 <= D.
inline bool slice_step_possible(unsigned D, unsigned h, unsigned j) {
  return (h >= 1 && j + 1 == h) || (h + 1 <= D && j == h + 1);
}

/// Bipartite parity (E*_j A E*_h = 0 when h + j is even, i.e. when h + 1 + j
/// is odd) and the equivalence of the vanishing of E*_h A E*_j, E_h Ae E_j,
/// E*_h Ae E*_j, Ee_h A Ee_j and Ee_h A* Ee_j with p^h_{1j} = 0.
inline std::vector<IdentityCheck> verify_slice_structure(const CubeContext& ctx) {
  if (ctx.E.size() != ctx.D + 1 || ctx.Estar.size() != ctx.D + 1 || ctx.Eeps.size() != ctx.D + 1)
    throw Error(ErrorCode::invariant_violation, "context was built without all idempotent families");
  CheckAccumulator parity("E*_j A E*_h = 0 for h + j even");
  CheckAccumulator equivalence("E_h Ae E_j, E*_h Ae E*_j, Ee_h A Ee_j, Ee_h A* Ee_j vanish iff p^h_1j = 0");
  for (unsigned h = 0; h <= ctx.D; ++h) {
    ExactMatrix eh_aeps = ctx.E[h] * ctx.Aeps;
    ExactMatrix esh_aeps = ctx.Estar[h] * ctx.Aeps;
    ExactMatrix esh_a = ctx.Estar[h] * ctx.A;
    ExactMatrix eeh_a = ctx.Eeps[h] * ctx.A;
    ExactMatrix eeh_as = ctx.Eeps[h] * ctx.Astar;
    for (unsigned j = 0; j <= ctx.D; ++j) {
      if ((h + j) % 2 == 1) continue;
      parity.require((ctx.Estar[j] * ctx.A * ctx.Estar[h]).is_zero());
    }
    for (unsigned j = 0; j <= ctx.D; ++j) {
      bool vanish = !slice_step_possible(ctx.D, h, j);
      equivalence.require((esh_a * ctx.Estar[j]).is_zero() == vanish);
      equivalence.require((eh_aeps * ctx.E[j]).is_zero() == vanish);
      equivalence.require((esh_aeps * ctx.Estar[j]).is_zero() == vanish);
      equivalence.require((eeh_a * ctx.Eeps[j]).is_zero() == vanish);
      equivalence.require((eeh_as * ctx.Eeps[j]).is_zero() == vanish);
    }
  }
  return {parity.result(), equivalence.result()};
}

enum class OperatorKind { adjacency, dual, imaginary };

struct SpectrumEntry {
  long long eigenvalue = 0;
  std::size_t multiplicity = 0;
  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

using SpectrumTable = std::vector<SpectrumEntry>;

/// Eigenvalues D - 2i with multiplicities read off the idempotent ranks.
inline SpectrumTable spectrum(const CubeContext& ctx, OperatorKind which) {
  const std::vector<ExactMatrix>* family = nullptr;
  switch (which) {
    case OperatorKind::adjacency: family = &ctx.E; break;
    case OperatorKind::dual: family = &ctx.Estar; break;
    case OperatorKind::imaginary: family = &ctx.Eeps; break;
  }
  if (family->size() != ctx.D + 1) throw Error(ErrorCode::invariant_violation, "idempotent family not built");
  SpectrumTable table;
  for (unsigned i = 0; i <= ctx.D; ++i) table.push_back({ctx.theta(i), idempotent_rank((*family)[i])});
  return table;
}

}  // namespace cubetriple
