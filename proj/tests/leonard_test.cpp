#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "cubetriple/leonard.hpp"

using namespace cubetriple;

namespace {

const GaussRat I = GaussRat::i();

const CubeContext& context(unsigned D) {
  static std::map<unsigned, CubeContext> cache;
  auto it = cache.find(D);
  if (it == cache.end()) it = cache.emplace(D, build_context(D)).first;
  return it->second;
}

const Decomposition& decomposition(unsigned D) {
  static std::map<unsigned, Decomposition> cache;
  auto it = cache.find(D);
  if (it == cache.end()) it = cache.emplace(D, decompose(context(D))).first;
  return it->second;
}

const IrreducibleModule& module_with_diameter(unsigned D, unsigned d) {
  for (const auto& m : decomposition(D).modules)
    if (m.d == d) return m;
  throw std::runtime_error("no module with that diameter");
}

}  // namespace

TEST(SixBases, SingleEdgeCube) {
  const auto& m = decomposition(1).modules[0];
  SixBases b = build_six_bases(context(1), m);
  const auto& list = b[BasisId::star_u];
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0], m.u[0] * ExactVector::unit(2, 0));
  EXPECT_EQ(list[1], m.u[1] * ExactVector::unit(2, 1));
}

TEST(SixBases, AllListsHaveFullLengthAndNoZeroVectors) {
  for (const auto& m : decomposition(4).modules) {
    SixBases b = build_six_bases(context(4), m);
    for (BasisId id : k_all_bases) {
      ASSERT_EQ(b[id].size(), m.d + 1);
      for (const auto& v : b[id]) EXPECT_FALSE(v.is_zero());
    }
  }
}

TEST(SixBases, DualSliceBasisIsOrthogonalWithBinomialNorms) {
  for (const auto& m : decomposition(5).modules) {
    SixBases b = build_six_bases(context(5), m);
    const auto& list = b[BasisId::star_u];
    for (unsigned i = 0; i <= m.d; ++i)
      for (unsigned j = 0; j <= m.d; ++j) {
        GaussRat expected = i == j ? GaussRat(binomial(m.d, i) * pow2(-static_cast<long long>(m.d)) * norm_sq(m.u))
                                   : GaussRat();
        EXPECT_EQ(inner(list[i], list[j]), expected);
      }
  }
}

TEST(RepMatrices, ClosedFormsAtDiameterTwo) {
  EXPECT_EQ(closed_form(MatrixForm::diag, 2), (ExactMatrix{{2, 0, 0}, {0, 0, 0}, {0, 0, -2}}));
  EXPECT_EQ(closed_form(MatrixForm::real_tridiagonal, 2), (ExactMatrix{{0, 2, 0}, {1, 0, 1}, {0, 2, 0}}));
  EXPECT_EQ(closed_form(MatrixForm::i_tridiagonal_neg_sub, 2),
            I * ExactMatrix({{0, 2, 0}, {-1, 0, 1}, {0, -2, 0}}));
  EXPECT_EQ(closed_form(MatrixForm::i_tridiagonal_neg_super, 2),
            I * ExactMatrix({{0, -2, 0}, {1, 0, -1}, {0, 2, 0}}));
}

TEST(RepMatrices, ComputedMatricesAtDiameterTwo) {
  const auto& m = module_with_diameter(4, 2);
  SixBases b = build_six_bases(context(4), m);
  EXPECT_EQ(representation_matrix(context(4), RepOperator::A, b, BasisId::prim_ustar),
            (ExactMatrix{{2, 0, 0}, {0, 0, 0}, {0, 0, -2}}));
  EXPECT_EQ(representation_matrix(context(4), RepOperator::A, b, BasisId::star_u),
            (ExactMatrix{{0, 2, 0}, {1, 0, 1}, {0, 2, 0}}));
  EXPECT_EQ(representation_matrix(context(4), RepOperator::Aeps, b, BasisId::star_u),
            I * ExactMatrix({{0, 2, 0}, {-1, 0, 1}, {0, -2, 0}}));
}

TEST(RepMatrices, GridMatchesForEveryModule) {
  for (unsigned D = 1; D <= 5; ++D)
    for (const auto& m : decomposition(D).modules) {
      RepReport report = verify_rep_matrices(context(D), build_six_bases(context(D), m));
      EXPECT_TRUE(report.passed()) << "D = " << D << " r = " << m.r;
      EXPECT_EQ(report.cells.size(), 18u);
    }
}

TEST(RepMatrices, SixDiagonalAndTwelveIrreducibleTridiagonalCells) {
  const auto& m = module_with_diameter(5, 3);
  RepReport report = verify_rep_matrices(context(5), build_six_bases(context(5), m));
  int diagonal = 0, tridiagonal = 0;
  for (const auto& c : report.cells) {
    if (c.computed.is_diagonal()) ++diagonal;
    if (is_irreducible_tridiagonal(c.computed)) ++tridiagonal;
  }
  EXPECT_EQ(diagonal, 6);
  EXPECT_EQ(tridiagonal, 12);
}

TEST(RepMatrices, RealTridiagonalFormHasConstantRowSums) {
  for (unsigned d = 0; d <= 8; ++d) {
    ExactVector ones(d + 1);
    for (std::size_t k = 0; k <= d; ++k) ones[k] = GaussRat(1);
    EXPECT_EQ(closed_form(MatrixForm::real_tridiagonal, d) * ones, GaussRat(static_cast<long long>(d)) * ones);
  }
}

TEST(InnerProducts, AllPairingsHold) {
  for (unsigned D = 1; D <= 5; ++D)
    for (const auto& m : decomposition(D).modules) {
      auto report = verify_inner_products(build_six_bases(context(D), m));
      EXPECT_TRUE(report.passed()) << "D = " << D << " r = " << m.r;
      EXPECT_EQ(report.by_identity().size(), 21u);
    }
}

TEST(InnerProducts, SpotValues) {
  const auto& m = module_with_diameter(4, 2);
  SixBases b = build_six_bases(context(4), m);
  // zero because 2F1(-1, -1; -2; 2) = 0
  EXPECT_EQ(inner(b[BasisId::prim_ustar][1], b[BasisId::star_u][1]), GaussRat());
  EXPECT_EQ(inner(b[BasisId::star_u][0], b[BasisId::star_u][0]), GaussRat(Rational(1, 4) * norm_sq(m.u)));
  EXPECT_EQ(inner(b[BasisId::star_u][0], b[BasisId::star_u][2]), GaussRat());
}

TEST(InnerProducts, EveryPhiPerturbationIsDetected) {
  for (unsigned d : {2u, 3u}) {
    const auto& m = module_with_diameter(d + 2, d);
    SixBases b = build_six_bases(context(d + 2), m);
    for (int i = 0; i <= static_cast<int>(d); ++i)
      for (int j = 0; j <= static_cast<int>(d); ++j) {
        PhiMatrix phi(static_cast<int>(d));
        Rational& x = phi.at(i, j);
        x = x.is_zero() ? Rational(1) : -x;
        EXPECT_FALSE(verify_inner_products(b, phi).passed()) << i << ", " << j;
        EXPECT_FALSE(transition_matrices(b, phi).passed()) << i << ", " << j;
      }
  }
}

TEST(Transitions, AllCellsMatch) {
  for (unsigned D = 1; D <= 5; ++D)
    for (const auto& m : decomposition(D).modules) {
      auto report = transition_matrices(build_six_bases(context(D), m));
      EXPECT_EQ(report.cells.size(), 36u);
      EXPECT_TRUE(report.passed()) << "D = " << D << " r = " << m.r;
      for (BasisId b : k_all_bases) EXPECT_EQ(report.cell(b, b).computed, ExactMatrix::identity(m.d + 1));
    }
}

TEST(Transitions, SingleCellByHand) {
  const auto& m = module_with_diameter(5, 3);
  SixBases b = build_six_bases(context(5), m);
  auto report = transition_matrices(b);
  const GaussRat scale = int_power(GaussRat(Rational(1), Rational(-1)), 3) * inner(m.u_star, m.u) / GaussRat(norm_sq(m.u));
  ExactMatrix expected(4, 4);
  for (int k = 0; k <= 3; ++k) expected(k, k) = scale * i_power(k);
  EXPECT_EQ(report.cell(BasisId::eps_u, BasisId::eps_ustar).computed, expected);
  // the defining relation: target_j = sum_i C_ij source_i
  const auto& c = report.cell(BasisId::star_u, BasisId::prim_ueps).computed;
  for (std::size_t j = 0; j <= 3; ++j) {
    ExactVector rebuilt(context(5).size);
    for (std::size_t i = 0; i <= 3; ++i) rebuilt = rebuilt + c(i, j) * b[BasisId::star_u][i];
    EXPECT_EQ(rebuilt, b[BasisId::prim_ueps][j]);
  }
}

TEST(Transitions, CompositionOfComputedMatrices) {
  for (const auto& m : decomposition(3).modules) {
    auto report = transition_matrices(build_six_bases(context(3), m));
    EXPECT_EQ(report.cell(BasisId::star_u, BasisId::eps_u).computed *
                  report.cell(BasisId::eps_u, BasisId::eps_ustar).computed,
              report.cell(BasisId::star_u, BasisId::eps_ustar).computed);
  }
}

TEST(Leonard, ModuleTriplesAreRecognised) {
  for (const auto& m : decomposition(4).modules) {
    RepReport rep = verify_rep_matrices(context(4), build_six_bases(context(4), m));
    auto result = is_leonard_triple(rep.cell(BasisId::star_u, RepOperator::A).computed,
                                    rep.cell(BasisId::star_u, RepOperator::Astar).computed,
                                    rep.cell(BasisId::star_u, RepOperator::Aeps).computed);
    EXPECT_EQ(result.verdict, LeonardVerdict::yes);
    EXPECT_EQ(result.certificate.order, "descending");
  }
}

TEST(Leonard, CommutingDiagonalPairIsRejected) {
  ExactMatrix d{{1, 0}, {0, -1}};
  auto result = is_leonard_triple(d, d, ExactMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(result.verdict, LeonardVerdict::no);
  EXPECT_FALSE(result.certificate.reason.empty());
}

TEST(Leonard, TwoByTwoClosedForms) {
  auto result = is_leonard_triple(closed_form(MatrixForm::real_tridiagonal, 1), closed_form(MatrixForm::diag, 1),
                                  closed_form(MatrixForm::i_tridiagonal_neg_sub, 1));
  EXPECT_EQ(result.verdict, LeonardVerdict::yes);
  for (const auto& per_op : result.certificate.represented)
    for (const auto& m : per_op) EXPECT_TRUE(is_irreducible_tridiagonal(m));
}

TEST(Leonard, UnverifiableOutsideCandidateSpectrum) {
  ExactMatrix x{{0, 1}, {1, 0}};
  EXPECT_EQ(is_leonard_triple(ExactMatrix{{3, 0}, {0, -3}}, x, x).verdict, LeonardVerdict::unverifiable);
  EXPECT_EQ(is_leonard_triple(ExactMatrix{{1, 1}, {0, 1}}, x, x).verdict, LeonardVerdict::unverifiable);
  EXPECT_THROW(is_leonard_triple(x, ExactMatrix::identity(3), x), Error);
}

TEST(Leonard, RepeatedEigenvalueIsRejected) {
  ExactMatrix x = closed_form(MatrixForm::real_tridiagonal, 2);
  ExactMatrix flat{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  EXPECT_EQ(is_leonard_triple(x, flat, x).verdict, LeonardVerdict::no);
  ExactMatrix repeated{{2, 0, 0}, {0, 2, 0}, {0, 0, -2}};
  EXPECT_EQ(is_leonard_triple(repeated, x, x).verdict, LeonardVerdict::no);
}

TEST(Leonard, OnlyDescendingOrReversedEigenbasisKeepsTridiagonality) {
  const auto& m = module_with_diameter(5, 3);
  RepReport rep = verify_rep_matrices(context(5), build_six_bases(context(5), m));
  const ExactMatrix& B = rep.cell(BasisId::star_u, RepOperator::A).computed;
  const ExactMatrix& Bs = rep.cell(BasisId::star_u, RepOperator::Astar).computed;
  auto result = is_leonard_triple(B, Bs, rep.cell(BasisId::star_u, RepOperator::Aeps).computed);
  ASSERT_EQ(result.verdict, LeonardVerdict::yes);
  EXPECT_EQ(result.certificate.eigenvalues[0], (std::vector<long long>{3, 1, -1, -3}));
  const auto& basis = result.certificate.eigenbases[0];
  std::vector<std::size_t> perm(4);
  std::iota(perm.begin(), perm.end(), 0);
  int tridiagonal_orders = 0;
  do {
    std::vector<ExactVector> permuted;
    for (auto k : perm) permuted.push_back(basis[k]);
    bool tri = is_tridiagonal(BasisCoordinates(permuted).represent(Bs));
    bool identity_or_reverse = perm == std::vector<std::size_t>{0, 1, 2, 3} || perm == std::vector<std::size_t>{3, 2, 1, 0};
    EXPECT_EQ(tri, identity_or_reverse);
    tridiagonal_orders += tri;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(tridiagonal_orders, 2);
}

TEST(ModuleReport, JsonShape) {
  const auto& m = module_with_diameter(3, 1);
  auto v = verify_module(context(3), m, {});
  EXPECT_TRUE(v.passed());
  auto j = module_report_json(v);
  EXPECT_EQ(j["D"], 3);
  EXPECT_EQ(j["r"], 1);
  EXPECT_EQ(j["module_index"], 0);
  EXPECT_EQ(j["rep_matrices"]["Estar_u"]["A"]["form"], "real_tridiagonal");
  EXPECT_EQ(j["rep_matrices"]["Estar_u"]["Astar"]["form"], "diag");
  EXPECT_EQ(j["transitions"]["cells_checked"], 36);
  EXPECT_TRUE(j["transitions"]["failures"].empty());
  EXPECT_EQ(j["leonard_triple"], "true");
}
