#pragma once

// Six bases of an irreducible module built from the seeds u, u*, ue, the
// matrices representing A, A*, Ae in them, the inner products between basis
// vectors, the transition matrices between the bases, and a recognizer for
// Leonard triples.
//
// Notation: seeds s_0 = u, s_1 = u*, s_2 = ue and families F_0 = E, F_1 = E*,
// F_2 = Ee. Conjugation by P sends F_k to F_{k+1} and s_k to a multiple of
// s_{k+1} (indices mod 3), so most statements come in three rotated parts.

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubetriple/cube.hpp"
#include "cubetriple/decomposition.hpp"
#include "cubetriple/hypergeometric.hpp"
#include "cubetriple/linalg.hpp"
#include "cubetriple/report.hpp"

namespace cubetriple {

enum class BasisId { star_u, eps_u, eps_ustar, prim_ustar, prim_ueps, star_ueps };
inline constexpr std::array<BasisId, 6> k_all_bases = {BasisId::star_u,     BasisId::eps_u,     BasisId::eps_ustar,
                                                       BasisId::prim_ustar, BasisId::prim_ueps, BasisId::star_ueps};

inline const char* to_string(BasisId b) {
  switch (b) {
    case BasisId::star_u: return "Estar_u";
    case BasisId::eps_u: return "Eeps_u";
    case BasisId::eps_ustar: return "Eeps_ustar";
    case BasisId::prim_ustar: return "E_ustar";
    case BasisId::prim_ueps: return "E_ueps";
    case BasisId::star_ueps: return "Estar_ueps";
  }
  return "?";
}

/// Family index (0 = E, 1 = E*, 2 = Ee) and seed index (0 = u, 1 = u*, 2 = ue).
struct BasisShape {
  int family;
  int seed;
};

inline BasisShape shape_of(BasisId b) {
  switch (b) {
    case BasisId::star_u: return {1, 0};
    case BasisId::eps_u: return {2, 0};
    case BasisId::eps_ustar: return {2, 1};
    case BasisId::prim_ustar: return {0, 1};
    case BasisId::prim_ueps: return {0, 2};
    case BasisId::star_ueps: return {1, 2};
  }
  return {0, 0};
}

inline BasisId basis_of(int family, int seed) {
  family %= 3;
  seed %= 3;
  for (BasisId b : k_all_bases) {
    auto s = shape_of(b);
    if (s.family == family && s.seed == seed) return b;
  }
  throw Error(ErrorCode::out_of_range, "no basis F_" + std::to_string(family) + " s_" + std::to_string(seed));
}

struct SixBases {
  unsigned r = 0;
  unsigned d = 0;
  std::array<ExactVector, 3> seeds;  // u, u*, ue
  std::array<std::vector<ExactVector>, 6> lists;

  const std::vector<ExactVector>& operator[](BasisId b) const { return lists[static_cast<std::size_t>(b)]; }
  std::vector<ExactVector>& operator[](BasisId b) { return lists[static_cast<std::size_t>(b)]; }
};

namespace detail {

inline const std::vector<ExactMatrix>& family(const CubeContext& ctx, int f) {
  switch (f) {
    case 0: return ctx.E;
    case 1: return ctx.Estar;
    default: return ctx.Eeps;
  }
}

[[noreturn]] inline void bases_failure(const IrreducibleModule& m, const std::string& what) {
  throw Error(ErrorCode::invariant_violation, "module (r=" + std::to_string(m.r) + ", index=" +
                                                  std::to_string(m.index) + "): " + what);
}

// Checks P src_i = c dst_i for one scalar c shared by every i.
inline bool p_shift(const ExactMatrix& P, const std::vector<ExactVector>& src, const std::vector<ExactVector>& dst) {
  std::optional<GaussRat> c;
  for (std::size_t i = 0; i < src.size(); ++i) {
    ExactVector image = P * src[i];
    if (!c) {
      std::size_t k = 0;
      while (k < dst[i].size() && dst[i][k].is_zero()) ++k;
      if (k == dst[i].size()) return false;
      c = image[k] / dst[i][k];
      if (c->is_zero()) return false;
    }
    if (!(image == *c * dst[i])) return false;
  }
  return true;
}

}  // namespace detail

/// The six bases F_{r+i} s for the pairs (F, s) of BasisId. Every vector must
/// be nonzero, every list must be independent and sum back to its seed, and P
/// must carry each list onto a multiple of its rotated partner.
inline SixBases build_six_bases(const CubeContext& ctx, const IrreducibleModule& m) {
  SixBases out;
  out.r = m.r;
  out.d = m.d;
  out.seeds = {m.u, m.u_star, m.u_eps};
  for (BasisId b : k_all_bases) {
    auto [f, s] = shape_of(b);
    const auto& fam = detail::family(ctx, f);
    auto& list = out[b];
    ExactVector sum(ctx.size);
    for (unsigned i = 0; i <= m.d; ++i) {
      list.push_back(fam[m.r + i] * out.seeds[s]);
      if (list.back().is_zero()) detail::bases_failure(m, std::string("zero vector in basis ") + to_string(b));
      sum = sum + list.back();
    }
    if (!(sum == out.seeds[s])) detail::bases_failure(m, std::string("basis ") + to_string(b) + " does not sum to its seed");
    try {
      BasisCoordinates check(list);
    } catch (const Error&) {
      detail::bases_failure(m, std::string("basis ") + to_string(b) + " is linearly dependent");
    }
  }
  for (BasisId b : k_all_bases) {
    auto [f, s] = shape_of(b);
    if (!detail::p_shift(ctx.P, out[b], out[basis_of(f + 1, s + 1)]))
      detail::bases_failure(m, std::string("P does not carry ") + to_string(b) + " onto " +
                                   to_string(basis_of(f + 1, s + 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representation matrices

enum class RepOperator { A, Astar, Aeps };
inline constexpr std::array<RepOperator, 3> k_all_operators = {RepOperator::A, RepOperator::Astar, RepOperator::Aeps};

inline const char* to_string(RepOperator op) {
  switch (op) {
    case RepOperator::A: return "A";
    case RepOperator::Astar: return "Astar";
    case RepOperator::Aeps: return "Aeps";
  }
  return "?";
}

inline const ExactMatrix& operator_matrix(const CubeContext& ctx, RepOperator op) {
  switch (op) {
    case RepOperator::A: return ctx.A;
    case RepOperator::Astar: return ctx.Astar;
    default: return ctx.Aeps;
  }
}

/// diag: diag(d, d-2, ..., -d).
/// real_tridiagonal: subdiagonal 1..d, superdiagonal d..1.
/// i_tridiagonal_neg_sub: i times (superdiagonal d..1, subdiagonal -1..-d).
/// i_tridiagonal_neg_super: i times (superdiagonal -d..-1, subdiagonal 1..d).
enum class MatrixForm { diag, real_tridiagonal, i_tridiagonal_neg_sub, i_tridiagonal_neg_super };

inline const char* to_string(MatrixForm f) {
  switch (f) {
    case MatrixForm::diag: return "diag";
    case MatrixForm::real_tridiagonal: return "real_tridiagonal";
    case MatrixForm::i_tridiagonal_neg_sub: return "i_tridiagonal_neg_sub";
    case MatrixForm::i_tridiagonal_neg_super: return "i_tridiagonal_neg_super";
  }
  return "?";
}

inline ExactMatrix closed_form(MatrixForm form, unsigned d) {
  const std::size_t n = d + 1;
  ExactMatrix m(n, n);
  const GaussRat i_unit = GaussRat::i();
  for (std::size_t k = 0; k < n; ++k) {
    if (form == MatrixForm::diag) {
      m(k, k) = GaussRat(Rational(static_cast<long long>(d) - 2 * static_cast<long long>(k)));
      continue;
    }
    if (k + 1 >= n) continue;
    const GaussRat super(Rational(static_cast<long long>(d - k)));
    const GaussRat sub(Rational(static_cast<long long>(k + 1)));
    switch (form) {
      case MatrixForm::real_tridiagonal:
        m(k, k + 1) = super;
        m(k + 1, k) = sub;
        break;
      case MatrixForm::i_tridiagonal_neg_sub:
        m(k, k + 1) = i_unit * super;
        m(k + 1, k) = -(i_unit * sub);
        break;
      case MatrixForm::i_tridiagonal_neg_super:
        m(k, k + 1) = -(i_unit * super);
        m(k + 1, k) = i_unit * sub;
        break;
      case MatrixForm::diag: break;
    }
  }
  return m;
}

inline MatrixForm expected_form(BasisId b, RepOperator op) {
  using F = MatrixForm;
  switch (op) {
    case RepOperator::A:
      switch (b) {
        case BasisId::star_u: return F::real_tridiagonal;
        case BasisId::eps_u: return F::real_tridiagonal;
        case BasisId::eps_ustar: return F::i_tridiagonal_neg_sub;
        case BasisId::prim_ustar: return F::diag;
        case BasisId::prim_ueps: return F::diag;
        case BasisId::star_ueps: return F::i_tridiagonal_neg_super;
      }
      break;
    case RepOperator::Astar:
      switch (b) {
        case BasisId::star_u: return F::diag;
        case BasisId::eps_u: return F::i_tridiagonal_neg_super;
        case BasisId::eps_ustar: return F::real_tridiagonal;
        case BasisId::prim_ustar: return F::real_tridiagonal;
        case BasisId::prim_ueps: return F::i_tridiagonal_neg_sub;
        case BasisId::star_ueps: return F::diag;
      }
      break;
    case RepOperator::Aeps:
      switch (b) {
        case BasisId::star_u: return F::i_tridiagonal_neg_sub;
        case BasisId::eps_u: return F::diag;
        case BasisId::eps_ustar: return F::diag;
        case BasisId::prim_ustar: return F::i_tridiagonal_neg_super;
        case BasisId::prim_ueps: return F::real_tridiagonal;
        case BasisId::star_ueps: return F::real_tridiagonal;
      }
      break;
  }
  return F::diag;
}

/// Matrix B with op(v_j) = sum_i B_ij v_i for the chosen basis.
inline ExactMatrix representation_matrix(const CubeContext& ctx, RepOperator op, const SixBases& bases, BasisId b) {
  return BasisCoordinates(bases[b]).represent(operator_matrix(ctx, op));
}

struct RepCell {
  BasisId basis;
  RepOperator op;
  MatrixForm form;
  ExactMatrix computed;
  bool passed = false;
};

struct RepReport {
  std::vector<RepCell> cells;          // 6 bases x 3 operators
  std::vector<IdentityCheck> extras;   // row sums and represented commutators

  bool passed() const {
    for (const auto& c : cells)
      if (!c.passed) return false;
    return all_passed(extras);
  }
  const RepCell& cell(BasisId b, RepOperator op) const {
    for (const auto& c : cells)
      if (c.basis == b && c.op == op) return c;
    throw Error(ErrorCode::out_of_range, "missing representation cell");
  }
};

inline RepReport verify_rep_matrices(const CubeContext& ctx, const SixBases& bases) {
  RepReport report;
  const GaussRat two_i(Rational(0), Rational(2));
  for (BasisId b : k_all_bases) {
    BasisCoordinates coords(bases[b]);
    std::array<ExactMatrix, 3> reps;
    for (RepOperator op : k_all_operators) {
      ExactMatrix m = coords.represent(operator_matrix(ctx, op));
      MatrixForm form = expected_form(b, op);
      bool ok = m == closed_form(form, bases.d);
      reps[static_cast<std::size_t>(op)] = m;
      report.cells.push_back({b, op, form, std::move(m), ok});
    }
    const auto& [B, Bs, Be] = reps;
    const std::string tag = std::string(" in ") + to_string(b);
    report.extras.push_back(check_equal("B B* - B* B = 2i Be" + tag, commutator(B, Bs), two_i * Be));
    report.extras.push_back(check_equal("B* Be - Be B* = 2i B" + tag, commutator(Bs, Be), two_i * B));
    report.extras.push_back(check_equal("Be B - B Be = 2i B*" + tag, commutator(Be, B), two_i * Bs));
  }
  const ExactMatrix tri = closed_form(MatrixForm::real_tridiagonal, bases.d);
  ExactVector ones(bases.d + 1);
  for (std::size_t k = 0; k <= bases.d; ++k) ones[k] = GaussRat(Rational(1));
  report.extras.push_back(
      check_true("real tridiagonal form has row sums d", tri * ones == GaussRat(Rational(static_cast<long long>(bases.d))) * ones));
  return report;
}

// ---------------------------------------------------------------------------
// Inner products

struct PairingCheck {
  std::string identity_id;
  unsigned i = 0;
  unsigned j = 0;
  bool passed = false;
};

struct InnerProductReport {
  std::vector<PairingCheck> cells;

  bool passed() const {
    for (const auto& c : cells)
      if (!c.passed) return false;
    return true;
  }
  std::map<std::string, bool> by_identity() const {
    std::map<std::string, bool> out;
    for (const auto& c : cells) {
      auto [it, inserted] = out.emplace(c.identity_id, c.passed);
      if (!inserted) it->second = it->second && c.passed;
    }
    return out;
  }
};

/// Checks every pairing of basis vectors whose value is known in closed form:
///   orthogonality      <F_{k+1} s_k(i), F_{k+1} s_k(j)> = delta_ij C(d,i) 2^-d ||s_k||^2 (and F_{k+2})
///   proportionality    F_k s_{k+2}(i) = i^i (1-i)^d <s_{k+2},s_{k+1}> ||s_{k+1}||^-2 F_k s_{k+1}(i)
///   diagonal_pairing   <F_k s_{k+2}(i), F_k s_{k+1}(j)> = delta_ij i^i C(d,i) (1+i)^-d <s_{k+2},s_{k+1}>
///   krawtchouk         <F_k s_{k+1}(i), F_{k+1} s_k(j)> = 2^-d <s_{k+1},s_k> C(d,i) Phi_ij
///   krawtchouk_twist_j <F_k s_{k+1}(i), F_{k+1} s_{k+2}(j)> = i^j 2^-d <s_{k+1},s_{k+2}> C(d,i) Phi_ij
///   krawtchouk_twist_i <F_k s_{k+2}(i), F_{k+1} s_k(j)> = i^i 2^-d <s_{k+2},s_k> C(d,i) Phi_ij
///   self_pairing       <F_k s_{k+1}(i), F_{k+2} s_{k+1}(j)> = i^(-i-j) (2-2i)^-d ||s_{k+1}||^2 C(d,i) Phi_ij
/// for k = 0, 1, 2 (reported as parts 1, 2, 3).
inline InnerProductReport verify_inner_products(const SixBases& bases, const PhiMatrix& phi) {
  InnerProductReport report;
  const unsigned d = bases.d;
  if (phi.d() != static_cast<int>(d)) throw Error(ErrorCode::dimension_mismatch, "Phi grid has the wrong diameter");
  const GaussRat one(Rational(1));
  const GaussRat one_plus_i(Rational(1), Rational(1));
  const GaussRat one_minus_i(Rational(1), Rational(-1));
  const GaussRat two_minus_2i(Rational(2), Rational(-2));
  const GaussRat inv_2d(pow2(-static_cast<int>(d)));
  auto seed = [&](int k) -> const ExactVector& { return bases.seeds[static_cast<std::size_t>(k % 3)]; };
  auto list = [&](int f, int s) -> const std::vector<ExactVector>& { return bases[basis_of(f, s)]; };
  auto cd = [&](unsigned i) { return GaussRat(binomial(static_cast<long long>(d), static_cast<long long>(i))); };
  auto krawtchouk = [&](unsigned i, unsigned j) { return cd(i) * GaussRat(phi(static_cast<int>(i), static_cast<int>(j))); };

  for (int k = 0; k < 3; ++k) {
    const std::string part = "/" + std::to_string(k + 1);
    const ExactVector& s0 = seed(k);
    const ExactVector& s1 = seed(k + 1);
    const ExactVector& s2 = seed(k + 2);
    const GaussRat n0(norm_sq(s0));
    const GaussRat n1(norm_sq(s1));
    for (unsigned i = 0; i <= d; ++i) {
      for (unsigned j = 0; j <= d; ++j) {
        const GaussRat delta = i == j ? one : GaussRat();
        for (int f : {k + 1, k + 2}) {
          const auto& v = list(f, k);
          report.cells.push_back({"orthogonality" + part, i, j, inner(v[i], v[j]) == delta * cd(i) * inv_2d * n0});
        }
        report.cells.push_back(
            {"diagonal_pairing" + part, i, j,
             inner(list(k, k + 2)[i], list(k, k + 1)[j]) ==
                 delta * i_power(static_cast<int>(i)) * cd(i) * int_power(one_plus_i, -static_cast<int>(d)) *
                     inner(s2, s1)});
        report.cells.push_back({"krawtchouk" + part, i, j,
                                inner(list(k, k + 1)[i], list(k + 1, k)[j]) ==
                                    inv_2d * inner(s1, s0) * krawtchouk(i, j)});
        report.cells.push_back({"krawtchouk_twist_j" + part, i, j,
                                inner(list(k, k + 1)[i], list(k + 1, k + 2)[j]) ==
                                    i_power(static_cast<int>(j)) * inv_2d * inner(s1, s2) * krawtchouk(i, j)});
        report.cells.push_back({"krawtchouk_twist_i" + part, i, j,
                                inner(list(k, k + 2)[i], list(k + 1, k)[j]) ==
                                    i_power(static_cast<int>(i)) * inv_2d * inner(s2, s0) * krawtchouk(i, j)});
        report.cells.push_back({"self_pairing" + part, i, j,
                                inner(list(k, k + 1)[i], list(k + 2, k + 1)[j]) ==
                                    i_power(-static_cast<int>(i + j)) * int_power(two_minus_2i, -static_cast<int>(d)) *
                                        n1 * krawtchouk(i, j)});
      }
      const GaussRat factor = i_power(static_cast<int>(i)) * int_power(one_minus_i, static_cast<int>(d)) *
                              inner(s2, s1) / n1;
      report.cells.push_back(
          {"proportionality" + part, i, i, list(k, k + 2)[i] == factor * list(k, k + 1)[i]});
    }
  }
  return report;
}

inline InnerProductReport verify_inner_products(const SixBases& bases) {
  return verify_inner_products(bases, PhiMatrix(static_cast<int>(bases.d)));
}

// ---------------------------------------------------------------------------
// Transition matrices

/// Closed-form shape of one table cell: scalar * (1+i)^(e_plus d) (1-i)^(e_minus d)
/// * <s_x, s_y>/||s_y||^2 (when ratio is set) times one of
///   [i^(a i + b j) Phi_ij], diag(i^0..i^d), diag(i^-0..i^-d), or I.
struct TransitionFormula {
  enum class Kind { identity, phi, diag_up, diag_down } kind = Kind::identity;
  int a = 0;
  int b = 0;
  int e_plus = 0;
  int e_minus = 0;
  std::optional<std::pair<int, int>> ratio;
};

inline TransitionFormula transition_formula(BasisId from, BasisId to) {
  using K = TransitionFormula::Kind;
  auto phi = [](int a, int b, int ep, int em, std::optional<std::pair<int, int>> ratio) {
    return TransitionFormula{K::phi, a, b, ep, em, ratio};
  };
  auto up = [](int em, std::pair<int, int> ratio) { return TransitionFormula{K::diag_up, 0, 0, 0, em, ratio}; };
  auto down = [](int ep, std::pair<int, int> ratio) { return TransitionFormula{K::diag_down, 0, 0, ep, 0, ratio}; };
  using P = std::pair<int, int>;
  if (from == to) return {};
  switch (from) {
    case BasisId::star_u:
      switch (to) {
        case BasisId::eps_u: return phi(-1, -1, 0, -1, std::nullopt);
        case BasisId::eps_ustar: return phi(-1, 0, 0, 0, P{1, 0});
        case BasisId::prim_ustar: return phi(0, 0, 0, 0, P{1, 0});
        case BasisId::prim_ueps: return phi(0, 1, 0, 0, P{2, 0});
        case BasisId::star_ueps: return down(1, P{2, 0});
        default: break;
      }
      break;
    case BasisId::eps_u:
      switch (to) {
        case BasisId::star_u: return phi(1, 1, -1, 0, std::nullopt);
        case BasisId::eps_ustar: return up(1, P{1, 0});
        case BasisId::prim_ustar: return phi(0, -1, 0, 0, P{1, 0});
        case BasisId::prim_ueps: return phi(0, 0, 0, 0, P{2, 0});
        case BasisId::star_ueps: return phi(1, 0, 0, 0, P{2, 0});
        default: break;
      }
      break;
    case BasisId::eps_ustar:
      switch (to) {
        case BasisId::star_u: return phi(0, 1, 0, 0, P{0, 1});
        case BasisId::eps_u: return down(1, P{0, 1});
        case BasisId::prim_ustar: return phi(-1, -1, 0, -1, std::nullopt);
        case BasisId::prim_ueps: return phi(-1, 0, 0, 0, P{2, 1});
        case BasisId::star_ueps: return phi(0, 0, 0, 0, P{2, 1});
        default: break;
      }
      break;
    case BasisId::prim_ustar:
      switch (to) {
        case BasisId::star_u: return phi(0, 0, 0, 0, P{0, 1});
        case BasisId::eps_u: return phi(1, 0, 0, 0, P{0, 1});
        case BasisId::eps_ustar: return phi(1, 1, -1, 0, std::nullopt);
        case BasisId::prim_ueps: return up(1, P{2, 1});
        case BasisId::star_ueps: return phi(0, -1, 0, 0, P{2, 1});
        default: break;
      }
      break;
    case BasisId::prim_ueps:
      switch (to) {
        case BasisId::star_u: return phi(-1, 0, 0, 0, P{0, 2});
        case BasisId::eps_u: return phi(0, 0, 0, 0, P{0, 2});
        case BasisId::eps_ustar: return phi(0, 1, 0, 0, P{1, 2});
        case BasisId::prim_ustar: return down(1, P{1, 2});
        case BasisId::star_ueps: return phi(-1, -1, 0, -1, std::nullopt);
        default: break;
      }
      break;
    case BasisId::star_ueps:
      switch (to) {
        case BasisId::star_u: return up(1, P{0, 2});
        case BasisId::eps_u: return phi(0, -1, 0, 0, P{0, 2});
        case BasisId::eps_ustar: return phi(0, 0, 0, 0, P{1, 2});
        case BasisId::prim_ustar: return phi(1, 0, 0, 0, P{1, 2});
        case BasisId::prim_ueps: return phi(1, 1, -1, 0, std::nullopt);
        default: break;
      }
      break;
  }
  throw Error(ErrorCode::out_of_range, "no transition formula");
}

inline ExactMatrix evaluate_transition_formula(const TransitionFormula& tf, const SixBases& bases,
                                               const PhiMatrix& phi) {
  using K = TransitionFormula::Kind;
  const int d = static_cast<int>(bases.d);
  const std::size_t n = bases.d + 1;
  if (tf.kind == K::identity) return ExactMatrix::identity(n);
  GaussRat scalar = int_power(GaussRat(Rational(1), Rational(1)), tf.e_plus * d) *
                    int_power(GaussRat(Rational(1), Rational(-1)), tf.e_minus * d);
  if (tf.ratio) {
    const ExactVector& x = bases.seeds[static_cast<std::size_t>(tf.ratio->first)];
    const ExactVector& y = bases.seeds[static_cast<std::size_t>(tf.ratio->second)];
    scalar = scalar * inner(x, y) / GaussRat(norm_sq(y));
  }
  ExactMatrix m(n, n);
  for (int i = 0; i <= d; ++i) {
    if (tf.kind == K::diag_up) {
      m(i, i) = scalar * i_power(i);
    } else if (tf.kind == K::diag_down) {
      m(i, i) = scalar * i_power(-i);
    } else {
      for (int j = 0; j <= d; ++j) m(i, j) = scalar * i_power(tf.a * i + tf.b * j) * GaussRat(phi(i, j));
    }
  }
  return m;
}

struct TransitionCell {
  BasisId from;
  BasisId to;
  ExactMatrix formula;
  ExactMatrix computed;
  bool passed = false;
};

struct TransitionReport {
  std::vector<TransitionCell> cells;  // 36, row-major over (from, to)
  bool inverse_coherent = false;
  bool composition_coherent = false;

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : cells)
      if (!c.passed) out.push_back(std::string(to_string(c.from)) + "->" + to_string(c.to));
    if (!inverse_coherent) out.push_back("inverse coherence");
    if (!composition_coherent) out.push_back("composition coherence");
    return out;
  }
  bool passed() const { return failures().empty(); }
  const TransitionCell& cell(BasisId from, BasisId to) const {
    return cells[static_cast<std::size_t>(from) * 6 + static_cast<std::size_t>(to)];
  }
};

/// Transition matrix C from basis `from` to basis `to`: to_j = sum_i C_ij from_i.
inline TransitionReport transition_matrices(const SixBases& bases, const PhiMatrix& phi) {
  TransitionReport report;
  std::vector<BasisCoordinates> coords;
  for (BasisId b : k_all_bases) coords.emplace_back(bases[b]);
  for (BasisId from : k_all_bases)
    for (BasisId to : k_all_bases) {
      ExactMatrix computed = coords[static_cast<std::size_t>(from)].transition_to(bases[to]);
      ExactMatrix formula = evaluate_transition_formula(transition_formula(from, to), bases, phi);
      bool ok = computed == formula;
      report.cells.push_back({from, to, std::move(formula), std::move(computed), ok});
    }
  report.inverse_coherent = true;
  report.composition_coherent = true;
  const ExactMatrix id = ExactMatrix::identity(bases.d + 1);
  for (BasisId a : k_all_bases)
    for (BasisId b : k_all_bases) {
      const ExactMatrix& ab = report.cell(a, b).formula;
      if (!(ab * report.cell(b, a).formula == id)) report.inverse_coherent = false;
      for (BasisId c : k_all_bases)
        if (!(ab * report.cell(b, c).formula == report.cell(a, c).formula)) report.composition_coherent = false;
    }
  return report;
}

inline TransitionReport transition_matrices(const SixBases& bases) {
  return transition_matrices(bases, PhiMatrix(static_cast<int>(bases.d)));
}

// ---------------------------------------------------------------------------
// Leonard triple recognizer

enum class LeonardVerdict { yes, no, unverifiable };

inline const char* to_string(LeonardVerdict v) {
  switch (v) {
    case LeonardVerdict::yes: return "true";
    case LeonardVerdict::no: return "false";
    case LeonardVerdict::unverifiable: return "unverifiable";
  }
  return "?";
}

inline bool is_tridiagonal(const ExactMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if ((r > c + 1 || c > r + 1) && !m(r, c).is_zero()) return false;
  return true;
}

inline bool is_irreducible_tridiagonal(const ExactMatrix& m) {
  if (!m.is_square() || !is_tridiagonal(m)) return false;
  for (std::size_t k = 0; k + 1 < m.rows(); ++k)
    if (m(k + 1, k).is_zero() || m(k, k + 1).is_zero()) return false;
  return true;
}

struct LeonardCertificate {
  std::array<std::vector<long long>, 3> eigenvalues;      // descending, per operator
  std::array<std::vector<ExactVector>, 3> eigenbases;     // matching the eigenvalues
  std::array<std::array<ExactMatrix, 2>, 3> represented;  // the other two operators in each eigenbasis
  std::string order = "descending";
  std::string reason;
};

struct LeonardResult {
  LeonardVerdict verdict = LeonardVerdict::unverifiable;
  LeonardCertificate certificate;
};

/// Decides whether (B, B*, Be) is a Leonard triple. Each operator is
/// diagonalised against the candidate eigenvalues n-1, n-3, ..., 1-n; the other
/// two are represented in the eigenbasis ordered by descending eigenvalue and
/// must be irreducible tridiagonal.
inline LeonardResult is_leonard_triple(const ExactMatrix& B, const ExactMatrix& Bstar, const ExactMatrix& Beps) {
  if (!B.is_square() || B.rows() != Bstar.rows() || B.rows() != Beps.rows() || !Bstar.is_square() ||
      !Beps.is_square() || B.rows() == 0)
    throw Error(ErrorCode::dimension_mismatch, "Leonard triple needs three square matrices of one size");
  const std::size_t n = B.rows();
  const long long d = static_cast<long long>(n) - 1;
  const std::array<const ExactMatrix*, 3> ops = {&B, &Bstar, &Beps};
  LeonardResult result;
  bool all_ok = true;
  for (std::size_t k = 0; k < 3; ++k) {
    auto& vals = result.certificate.eigenvalues[k];
    auto& basis = result.certificate.eigenbases[k];
    bool repeated = false;
    for (long long theta = d; theta >= -d; theta -= 2) {
      auto kernel = kernel_basis(*ops[k] - ExactMatrix::scalar(n, GaussRat(Rational(theta))));
      if (kernel.size() > 1) repeated = true;
      for (auto& v : kernel) {
        vals.push_back(theta);
        basis.push_back(std::move(v));
      }
    }
    if (basis.size() != n) {
      result.verdict = LeonardVerdict::unverifiable;
      result.certificate.reason = "operator " + std::to_string(k) + " is not diagonalisable over the candidate spectrum";
      return result;
    }
    if (repeated) {
      all_ok = false;
      if (result.certificate.reason.empty())
        result.certificate.reason = "operator " + std::to_string(k) + " has a repeated eigenvalue";
    }
    BasisCoordinates coords(basis);
    for (std::size_t o = 0; o < 2; ++o) {
      const ExactMatrix& other = *ops[(k + 1 + o) % 3];
      ExactMatrix rep = coords.represent(other);
      if (!is_irreducible_tridiagonal(rep)) {
        all_ok = false;
        if (result.certificate.reason.empty())
          result.certificate.reason = "operator " + std::to_string((k + 1 + o) % 3) +
                                      " is not irreducible tridiagonal in the eigenbasis of operator " +
                                      std::to_string(k);
      }
      result.certificate.represented[k][o] = std::move(rep);
    }
  }
  result.verdict = all_ok ? LeonardVerdict::yes : LeonardVerdict::no;
  return result;
}

// ---------------------------------------------------------------------------
// Per-module report

struct ModuleVerification {
  unsigned D = 0;
  unsigned r = 0;
  std::size_t index = 0;
  std::optional<RepReport> rep;
  std::optional<InnerProductReport> inner;
  std::optional<TransitionReport> transitions;
  std::optional<LeonardVerdict> leonard;

  bool passed() const {
    return (!rep || rep->passed()) && (!inner || inner->passed()) && (!transitions || transitions->passed()) &&
           (!leonard || *leonard == LeonardVerdict::yes);
  }
};

struct ModuleSuites {
  bool rep = true;
  bool inner = true;
  bool transitions = true;
  bool leonard = true;
};

inline ModuleVerification verify_module(const CubeContext& ctx, const IrreducibleModule& m, const ModuleSuites& suites,
                                        const PhiMatrix* phi_override = nullptr) {
  ModuleVerification out;
  out.D = ctx.D;
  out.r = m.r;
  out.index = m.index;
  const SixBases bases = build_six_bases(ctx, m);
  const PhiMatrix phi = phi_override ? *phi_override : PhiMatrix(static_cast<int>(m.d));
  if (suites.rep || suites.leonard) {
    RepReport rep = verify_rep_matrices(ctx, bases);
    if (suites.leonard) {
      auto verdict = is_leonard_triple(rep.cell(BasisId::star_u, RepOperator::A).computed,
                                       rep.cell(BasisId::star_u, RepOperator::Astar).computed,
                                       rep.cell(BasisId::star_u, RepOperator::Aeps).computed);
      out.leonard = verdict.verdict;
    }
    if (suites.rep) out.rep = std::move(rep);
  }
  if (suites.inner) out.inner = verify_inner_products(bases, phi);
  if (suites.transitions) out.transitions = transition_matrices(bases, phi);
  return out;
}

inline nlohmann::json module_report_json(const ModuleVerification& v) {
  nlohmann::json j{{"D", v.D}, {"r", v.r}, {"module_index", v.index}};
  if (v.rep) {
    nlohmann::json reps = nlohmann::json::object();
    for (const auto& c : v.rep->cells)
      reps[to_string(c.basis)][to_string(c.op)] = {{"form", to_string(c.form)}, {"passed", c.passed}};
    j["rep_matrices"] = std::move(reps);
    nlohmann::json extras = nlohmann::json::array();
    for (const auto& e : v.rep->extras) extras.push_back(to_json(e));
    j["rep_identities"] = std::move(extras);
  }
  if (v.inner) {
    nlohmann::json ip = nlohmann::json::object();
    for (const auto& [id, ok] : v.inner->by_identity()) ip[id] = ok;
    j["inner_products"] = std::move(ip);
  }
  if (v.transitions) {
    j["transitions"] = {{"cells_checked", v.transitions->cells.size()}, {"failures", v.transitions->failures()}};
  }
  if (v.leonard) j["leonard_triple"] = to_string(*v.leonard);
  return j;
}

}  // namespace cubetriple
