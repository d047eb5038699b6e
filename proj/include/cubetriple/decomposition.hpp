#pragma once

// Orthogonal decomposition of the standard module C^(2^D) into irreducible
// T-modules. Each module is seeded by a vector u* of the distance-r slice
// killed by the lowering operator; its slice basis is u*, R u*, ..., R^d u*.

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "cubetriple/cube.hpp"
#include "cubetriple/error.hpp"
#include "cubetriple/linalg.hpp"
#include "cubetriple/report.hpp"

namespace cubetriple {

struct IrreducibleModule {
  unsigned r = 0;          // endpoint
  unsigned d = 0;          // diameter, D - 2r
  std::size_t index = 0;   // position among the modules with this endpoint
  ExactVector u_star;      // spans E*_r W
  ExactVector u;           // spans E_r W
  ExactVector u_eps;       // spans Ee_r W
  std::vector<ExactVector> slice_basis;  // slice_basis[i] spans E*_{r+i} W

  std::size_t dim() const noexcept { return d + 1; }
};

struct Decomposition {
  unsigned D = 0;
  std::vector<IrreducibleModule> modules;
  std::map<unsigned, std::size_t> multiplicities;  // endpoint -> count
};

/// L = sum_{i=1..D} E*_{i-1} A E*_i.
inline ExactMatrix lowering_operator(const CubeContext& ctx) {
  if (ctx.Estar.size() != ctx.D + 1) throw Error(ErrorCode::invariant_violation, "dual idempotents not built");
  ExactMatrix L(ctx.size, ctx.size);
  for (unsigned i = 1; i <= ctx.D; ++i) L = L + ctx.Estar[i - 1] * ctx.A * ctx.Estar[i];
  return L;
}

/// R = sum_{i=0..D-1} E*_{i+1} A E*_i.
inline ExactMatrix raising_operator(const CubeContext& ctx) {
  if (ctx.Estar.size() != ctx.D + 1) throw Error(ErrorCode::invariant_violation, "dual idempotents not built");
  ExactMatrix R(ctx.size, ctx.size);
  for (unsigned i = 0; i + 1 <= ctx.D; ++i) R = R + ctx.Estar[i + 1] * ctx.A * ctx.Estar[i];
  return R;
}

/// Number of irreducible modules with endpoint r: C(D, r) - C(D, r - 1).
inline std::size_t multiplicity(unsigned D, int r) {
  if (r < 0 || 2 * r > static_cast<int>(D))
    throw Error(ErrorCode::out_of_range, "endpoint " + std::to_string(r) + " for D = " + std::to_string(D));
  mpz_class hi, lo;
  mpz_bin_uiui(hi.get_mpz_t(), D, static_cast<unsigned long>(r));
  if (r > 0) mpz_bin_uiui(lo.get_mpz_t(), D, static_cast<unsigned long>(r - 1));
  mpz_class diff = hi - lo;
  return static_cast<std::size_t>(mpz_get_ui(diff.get_mpz_t()));
}

namespace detail {

inline std::vector<std::size_t> slice_vertices(const CubeContext& ctx, unsigned weight) {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < ctx.size; ++y)
    if (hamming_weight(y) == weight) out.push_back(y);
  return out;
}

[[noreturn]] inline void module_failure(const IrreducibleModule& m, const std::string& invariant) {
  throw Error(ErrorCode::invariant_violation, "module (r=" + std::to_string(m.r) + ", index=" +
                                                  std::to_string(m.index) + "): " + invariant);
}

inline bool proportional(const ExactVector& x, const ExactVector& y) {
  if (x.is_zero() || y.is_zero()) return false;
  return in_span({y}, x);
}

// Rank of the columns [first, first + count) of m.
inline std::size_t block_rank(const ExactMatrix& m, std::size_t first, std::size_t count) {
  ExactMatrix t(count, m.rows());
  bool any = false;
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) {
      t(c, r) = m(r, first + c);
      any = any || !t(c, r).is_zero();
    }
  return any ? rank(t) : 0;
}

inline void validate_decomposition(const CubeContext& ctx, const Decomposition& dec) {
  // stack every module basis side by side
  std::vector<ExactVector> all;
  std::vector<std::size_t> offsets;
  for (const auto& m : dec.modules) {
    offsets.push_back(all.size());
    all.insert(all.end(), m.slice_basis.begin(), m.slice_basis.end());
  }
  if (all.size() != ctx.size)
    throw Error(ErrorCode::invariant_violation, "module dimensions sum to " + std::to_string(all.size()) +
                                                    ", expected " + std::to_string(ctx.size));
  const ExactMatrix stacked = ExactMatrix::from_columns(all);

  const ExactMatrix gram = adjoint(stacked) * stacked;
  for (std::size_t a = 0; a < dec.modules.size(); ++a)
    for (std::size_t b = 0; b < dec.modules.size(); ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < dec.modules[a].dim(); ++i)
        for (std::size_t j = 0; j < dec.modules[b].dim(); ++j)
          if (!gram(offsets[a] + i, offsets[b] + j).is_zero())
            module_failure(dec.modules[a], "not orthogonal to module " + std::to_string(b) + " of the list");
    }

  const std::vector<std::pair<const char*, const std::vector<ExactMatrix>*>> families = {
      {"E", &ctx.E}, {"E*", &ctx.Estar}, {"Ee", &ctx.Eeps}};
  for (const auto& [name, family] : families) {
    for (unsigned i = 0; i <= ctx.D; ++i) {
      const ExactMatrix image = (*family)[i] * stacked;
      for (std::size_t a = 0; a < dec.modules.size(); ++a) {
        const auto& m = dec.modules[a];
        std::size_t rk = block_rank(image, offsets[a], m.dim());
        bool inside = i >= m.r && i <= m.r + m.d;
        if (rk > 1) module_failure(m, std::string("thinness: dim(") + name + "_" + std::to_string(i) + " W) > 1");
        if ((rk == 1) != inside)
          module_failure(m, std::string("nonvanishing window of ") + name + "_" + std::to_string(i) + " W");
      }
    }
  }

  for (const auto& m : dec.modules) {
    BasisCoordinates coords(m.slice_basis);
    for (const auto& v : m.slice_basis) {
      if (!coords.coordinates(ctx.A * v)) module_failure(m, "A W not contained in W");
      if (!coords.coordinates(ctx.Astar * v)) module_failure(m, "A* W not contained in W");
    }
    if (inner(m.u_star, m.u).is_zero()) module_failure(m, "<u*, u> = 0");
    if (inner(m.u, m.u_eps).is_zero()) module_failure(m, "<u, ue> = 0");
    if (inner(m.u_eps, m.u_star).is_zero()) module_failure(m, "<ue, u*> = 0");
  }

  for (const auto& [r, count] : dec.multiplicities)
    if (count != multiplicity(ctx.D, static_cast<int>(r)))
      throw Error(ErrorCode::invariant_violation,
                  "endpoint " + std::to_string(r) + " has " + std::to_string(count) + " modules, expected " +
                      std::to_string(multiplicity(ctx.D, static_cast<int>(r))));
}

}  // namespace detail

/// Splits C^(2^D) into irreducible modules. For each endpoint r the kernel of
/// L on the distance-r slice is orthogonalised; every resulting vector u*
/// seeds one module with u = E_r u*, ue = Ee_r u*. All module invariants are
/// validated before returning.
inline Decomposition decompose(const CubeContext& ctx) {
  if (ctx.E.size() != ctx.D + 1 || ctx.Estar.size() != ctx.D + 1 || ctx.Eeps.size() != ctx.D + 1)
    throw Error(ErrorCode::invariant_violation, "decompose needs all idempotent families");
  const ExactMatrix L = lowering_operator(ctx);
  const ExactMatrix R = raising_operator(ctx);
  Decomposition dec;
  dec.D = ctx.D;
  for (unsigned r = 0; 2 * r <= ctx.D; ++r) {
    const auto slice = detail::slice_vertices(ctx, r);
    const auto below = r > 0 ? detail::slice_vertices(ctx, r - 1) : std::vector<std::size_t>{};
    ExactMatrix restricted(below.size(), slice.size());
    for (std::size_t a = 0; a < below.size(); ++a)
      for (std::size_t b = 0; b < slice.size(); ++b) restricted(a, b) = L(below[a], slice[b]);
    std::vector<ExactVector> seeds;
    for (const auto& k : kernel_basis(restricted)) {
      ExactVector full(ctx.size);
      for (std::size_t b = 0; b < slice.size(); ++b) full[slice[b]] = k[b];
      seeds.push_back(std::move(full));
    }
    seeds = gram_schmidt(seeds);
    dec.multiplicities[r] = seeds.size();
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      IrreducibleModule m;
      m.r = r;
      m.d = ctx.D - 2 * r;
      m.index = k;
      m.u_star = seeds[k];
      m.slice_basis.push_back(m.u_star);
      for (unsigned i = 1; i <= m.d; ++i) m.slice_basis.push_back(R * m.slice_basis.back());
      m.u = ctx.E[r] * m.u_star;
      m.u_eps = ctx.Eeps[r] * m.u_star;
      dec.modules.push_back(std::move(m));
    }
  }
  detail::validate_decomposition(ctx, dec);
  return dec;
}

/// A maps each slice vector into the span of its two neighbours.
inline bool tridiagonal_action_holds(const CubeContext& ctx, const IrreducibleModule& m) {
  for (std::size_t i = 0; i < m.slice_basis.size(); ++i) {
    std::vector<ExactVector> nbrs;
    if (i > 0) nbrs.push_back(m.slice_basis[i - 1]);
    if (i + 1 < m.slice_basis.size()) nbrs.push_back(m.slice_basis[i + 1]);
    if (!in_span(nbrs, ctx.A * m.slice_basis[i])) return false;
  }
  return true;
}

/// P E_i W = E*_i W, P E*_i W = Ee_i W, P Ee_i W = E_i W for every i in the
/// module window (each space is a line, so containment of spanning vectors
/// decides equality).
inline bool p_cycles_slices(const CubeContext& ctx, const IrreducibleModule& m) {
  for (unsigned k = 0; k <= m.d; ++k) {
    const ExactVector prim = ctx.E[m.r + k] * m.u_star;
    const ExactVector& dual = m.slice_basis[k];
    const ExactVector imag = ctx.Eeps[m.r + k] * m.u_star;
    if (!detail::proportional(ctx.P * prim, dual)) return false;
    if (!detail::proportional(ctx.P * dual, imag)) return false;
    if (!detail::proportional(ctx.P * imag, prim)) return false;
  }
  return true;
}

/// The three norm relations between u, u*, ue and positivity of
/// <u,u*><u*,ue><ue,u>(1+i)^d.
inline std::vector<IdentityCheck> seed_norm_relations(const IrreducibleModule& m) {
  const GaussRat one_plus_i_d = int_power(GaussRat(Rational(1), Rational(1)), m.d);
  const GaussRat uus = inner(m.u, m.u_star);
  const GaussRat usu = inner(m.u_star, m.u);
  const GaussRat usue = inner(m.u_star, m.u_eps);
  const GaussRat ueus = inner(m.u_eps, m.u_star);
  const GaussRat ueu = inner(m.u_eps, m.u);
  const GaussRat uue = inner(m.u, m.u_eps);
  std::vector<IdentityCheck> out;
  out.push_back(check_true("||u||^2 = (1+i)^d <u,u*><ue,u> / <ue,u*>",
                           GaussRat(norm_sq(m.u)) == one_plus_i_d * uus * ueu / ueus));
  out.push_back(check_true("||u*||^2 = (1+i)^d <u*,ue><u,u*> / <u,ue>",
                           GaussRat(norm_sq(m.u_star)) == one_plus_i_d * usue * uus / uue));
  out.push_back(check_true("||ue||^2 = (1+i)^d <ue,u><u*,ue> / <u*,u>",
                           GaussRat(norm_sq(m.u_eps)) == one_plus_i_d * ueu * usue / usu));
  const GaussRat product = uus * usue * ueu * one_plus_i_d;
  out.push_back(check_true("<u,u*><u*,ue><ue,u>(1+i)^d is real and positive",
                           product.is_real() && product.re().sign() > 0));
  return out;
}

/// Rescales the seeds so that <u,u*> = a, <u*,ue> = b, <ue,u> = c. With
/// delta = a b c (1+i)^d / ||c u*||^2 the factors are
///   u <- a delta^(-1/2) <u,u*>^-1 u,   u* <- delta^(1/2) u*,
///   ue <- conj(b) delta^(-1/2) <ue,u*>^-1 ue.
/// Only targets whose delta is the square of a rational are reachable inside Q(i).
inline IrreducibleModule normalize_seeds(const IrreducibleModule& module, const GaussRat& a, const GaussRat& b,
                                         const GaussRat& c) {
  if (a.is_zero() || b.is_zero() || c.is_zero())
    throw Error(ErrorCode::infeasible_targets, "seed inner products must be nonzero");
  const GaussRat product = a * b * c * int_power(GaussRat(Rational(1), Rational(1)), module.d);
  if (!product.is_real() || product.re().sign() <= 0)
    throw Error(ErrorCode::infeasible_targets, "a b c (1+i)^d is not a positive real");
  const Rational delta = product.re() / (c.norm() * norm_sq(module.u_star));
  Rational root;
  if (!rational_sqrt(delta, root))
    throw Error(ErrorCode::needs_field_extension, "delta = " + delta.to_string() + " is not a rational square");
  const GaussRat lambda = a / (GaussRat(root) * inner(module.u, module.u_star));
  const GaussRat lambda_star(root);
  const GaussRat lambda_eps = b.conj() / (GaussRat(root) * inner(module.u_eps, module.u_star));

  IrreducibleModule out = module;
  out.u = lambda * module.u;
  out.u_star = lambda_star * module.u_star;
  out.u_eps = lambda_eps * module.u_eps;
  for (auto& v : out.slice_basis) v = lambda_star * v;
  if (!(inner(out.u, out.u_star) == a) || !(inner(out.u_star, out.u_eps) == b) || !(inner(out.u_eps, out.u) == c))
    detail::module_failure(out, "rescaled seeds miss the requested inner products");
  return out;
}

inline nlohmann::json decomposition_report(const Decomposition& dec) {
  nlohmann::json modules = nlohmann::json::array();
  for (const auto& m : dec.modules)
    modules.push_back({{"r", m.r}, {"d", m.d}, {"index", m.index}, {"dim", m.dim()}});
  nlohmann::json mult = nlohmann::json::object();
  for (const auto& [r, count] : dec.multiplicities) mult[std::to_string(r)] = count;
  return {{"D", dec.D}, {"modules", std::move(modules)}, {"multiplicities", std::move(mult)}};
}

}  // namespace cubetriple
