#include <gtest/gtest.h>

#include "cubetriple/cube.hpp"

using namespace cubetriple;

namespace {

const GaussRat I = GaussRat::i();

// Adjacency straight from the Hamming metric on bit strings.
ExactMatrix brute_adjacency(unsigned D) {
  const std::size_t n = std::size_t(1) << D;
  ExactMatrix a(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t z = 0; z < n; ++z) {
      int differing = 0;
      for (unsigned k = 0; k < D; ++k) differing += ((y >> k) & 1) != ((z >> k) & 1);
      if (differing == 1) a(y, z) = GaussRat(1);
    }
  return a;
}

const CubeContext& context(unsigned D) {
  static std::map<unsigned, CubeContext> cache;
  auto it = cache.find(D);
  if (it == cache.end()) it = cache.emplace(D, build_context(D)).first;
  return it->second;
}

}  // namespace

TEST(Vertices, IndexAndTupleAreInverse) {
  EXPECT_EQ(vertex_index({1, 0, 1}), 5u);
  EXPECT_EQ(vertex_tuple(5, 3), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(vertex_tuple(1, 3), (std::vector<int>{0, 0, 1}));
  for (std::size_t y = 0; y < 16; ++y) EXPECT_EQ(vertex_index(vertex_tuple(y, 4)), y);
  EXPECT_EQ(cube_distance(0b1010, 0b0110), 2u);
}

TEST(Operators, SingleEdgeCube) {
  const auto& ctx = context(1);
  EXPECT_EQ(ctx.A, (ExactMatrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(ctx.Astar, (ExactMatrix{{1, 0}, {0, -1}}));
  EXPECT_EQ(ctx.Aeps, (ExactMatrix{{0, I}, {-I, 0}}));
  EXPECT_EQ(commutator(ctx.A, ctx.Astar), (ExactMatrix{{0, -2}, {2, 0}}));
  EXPECT_EQ(ctx.P, (ExactMatrix{{1, 1}, {-I, I}}));
}

TEST(Operators, AdjacencyMatchesHammingMetric) {
  for (unsigned D = 1; D <= 5; ++D) EXPECT_EQ(context(D).A, brute_adjacency(D)) << "D = " << D;
  EXPECT_EQ(context(2).A.nonzero_count(), 8u);
}

TEST(Operators, DualAdjacencyIsWeightDiagonal) {
  const auto& ctx = context(4);
  for (std::size_t y = 0; y < ctx.size; ++y) {
    int weight = 0;
    for (unsigned k = 0; k < 4; ++k) weight += (y >> k) & 1;
    EXPECT_EQ(ctx.Astar(y, y), GaussRat(4 - 2 * weight));
  }
  EXPECT_TRUE(ctx.Astar.is_diagonal());
}

TEST(Operators, DistanceMatricesPartitionTheAllOnesMatrix) {
  const auto& ctx = context(3);
  ExactMatrix sum(8, 8);
  for (const auto& m : ctx.dist_matrices) sum = sum + m;
  ExactMatrix ones(8, 8);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) ones(r, c) = GaussRat(1);
  EXPECT_EQ(sum, ones);
  EXPECT_EQ(ctx.dist_matrices[0], ExactMatrix::identity(8));
}

TEST(Operators, ContextRejectsBadDimension) {
  for (unsigned D : {0u, 11u}) {
    try {
      build_context(D);
      FAIL() << "D = " << D;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::out_of_range);
    }
  }
  ContextOptions small;
  small.d_limit = 3;
  EXPECT_THROW(build_context(4, small), Error);
}

TEST(Commutators, FiveIdentitiesHold) {
  for (unsigned D = 1; D <= 6; ++D) {
    auto checks = verify_commutators(context(D));
    EXPECT_EQ(checks.size(), 5u);
    EXPECT_TRUE(all_passed(checks)) << "D = " << D;
  }
}

TEST(Commutators, EverySignFlipOfAepsIsDetected) {
  CubeContext ctx = context(3);
  const ExactMatrix original = ctx.Aeps;
  for (std::size_t r = 0; r < ctx.size; ++r)
    for (std::size_t c = 0; c < ctx.size; ++c) {
      if (original(r, c).is_zero()) continue;
      ctx.Aeps = original;
      ctx.Aeps(r, c) = -ctx.Aeps(r, c);
      EXPECT_FALSE(all_passed(verify_commutators(ctx))) << "(" << r << ", " << c << ")";
    }
}

TEST(Conjugation, PStructure) {
  for (unsigned D = 1; D <= 5; ++D) {
    const auto& ctx = context(D);
    const GaussRat scale(pow2(D));
    EXPECT_EQ(ctx.P * adjoint(ctx.P), ExactMatrix::scalar(ctx.size, scale));
    const GaussRat cube = scale * int_power(GaussRat(Rational(1), Rational(-1)), D);
    EXPECT_EQ(ctx.P * ctx.P * ctx.P, ExactMatrix::scalar(ctx.size, cube));
    EXPECT_EQ(ctx.P * ctx.A * ctx.P_inv, ctx.Astar);
    EXPECT_EQ(ctx.P * ctx.Astar * ctx.P_inv, ctx.Aeps);
    EXPECT_EQ(ctx.P * ctx.Aeps * ctx.P_inv, ctx.A);
    EXPECT_TRUE(all_passed(verify_conjugation(ctx))) << "D = " << D;
  }
}

TEST(Conjugation, PCommutesWithCoordinateTranspositions) {
  const auto& ctx = context(4);
  for (unsigned a = 1; a <= 4; ++a)
    for (unsigned b = a + 1; b <= 4; ++b) {
      ExactMatrix S = transposition_matrix(4, a, b);
      EXPECT_EQ(S * S, ExactMatrix::identity(16));
      EXPECT_EQ(S * ctx.P, ctx.P * S);
    }
}

TEST(Idempotents, FirstPrimitiveIdempotentIsScaledAllOnes) {
  const auto& ctx = context(3);
  ExactMatrix j(8, 8);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) j(r, c) = GaussRat(Rational(1, 8));
  EXPECT_EQ(ctx.E[0], j);
}

TEST(Idempotents, RanksAreBinomialByElimination) {
  const auto& ctx = context(4);
  for (unsigned i = 0; i <= 4; ++i) {
    const auto expected = static_cast<std::size_t>(mpz_class(binomial(4, i).numerator()).get_ui());
    EXPECT_EQ(rank(ctx.E[i]), expected);
    EXPECT_EQ(rank(ctx.Estar[i]), expected);
    EXPECT_EQ(rank(ctx.Eeps[i]), expected);
    EXPECT_EQ(idempotent_rank(ctx.E[i]), expected);
  }
}

TEST(Idempotents, EigenvalueEquations) {
  const auto& ctx = context(4);
  ExactMatrix sum(16, 16);
  for (unsigned i = 0; i <= 4; ++i) {
    const GaussRat theta(ctx.theta(i));
    EXPECT_EQ(ctx.A * ctx.E[i], theta * ctx.E[i]);
    EXPECT_EQ(ctx.Astar * ctx.Estar[i], theta * ctx.Estar[i]);
    EXPECT_EQ(ctx.Aeps * ctx.Eeps[i], theta * ctx.Eeps[i]);
    sum = sum + ctx.Eeps[i];
  }
  EXPECT_EQ(sum, ExactMatrix::identity(16));
}

TEST(Idempotents, FullSuitePasses) {
  for (unsigned D = 1; D <= 5; ++D) EXPECT_TRUE(all_passed(verify_idempotents(context(D)))) << "D = " << D;
}

TEST(Idempotents, IdempotentRankRejectsNonIdempotent) {
  EXPECT_THROW(idempotent_rank(ExactMatrix{{2, 0}, {0, 0}}), Error);
}

TEST(Slices, AdjacencyOnlyJoinsNeighbouringSlices) {
  const auto& ctx = context(4);
  for (unsigned h = 0; h <= 4; ++h)
    for (unsigned j = 0; j <= 4; ++j) {
      bool zero = (ctx.Estar[j] * ctx.A * ctx.Estar[h]).is_zero();
      bool neighbours = h + 1 == j || j + 1 == h;
      EXPECT_EQ(!zero, neighbours) << h << ", " << j;
      EXPECT_EQ(slice_step_possible(4, h, j), neighbours);
    }
  EXPECT_TRUE(all_passed(verify_slice_structure(ctx)));
}

TEST(Spectrum, BinomialMultiplicities) {
  const auto& ctx = context(5);
  for (auto kind : {OperatorKind::adjacency, OperatorKind::dual, OperatorKind::imaginary}) {
    auto table = spectrum(ctx, kind);
    ASSERT_EQ(table.size(), 6u);
    const std::size_t expected[] = {1, 5, 10, 10, 5, 1};
    for (unsigned i = 0; i <= 5; ++i) {
      EXPECT_EQ(table[i].eigenvalue, 5 - 2 * static_cast<long long>(i));
      EXPECT_EQ(table[i].multiplicity, expected[i]);
    }
  }
}

TEST(Context, PartialBuildsSkipFamilies) {
  ContextOptions o;
  o.primitive = o.dual = o.imaginary = o.distances = false;
  auto ctx = build_context(3, o);
  EXPECT_TRUE(ctx.E.empty());
  EXPECT_TRUE(ctx.Estar.empty());
  EXPECT_TRUE(ctx.Eeps.empty());
  EXPECT_TRUE(all_passed(verify_commutators(ctx)));
}
