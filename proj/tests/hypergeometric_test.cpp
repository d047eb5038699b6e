#include <gtest/gtest.h>

#include "cubetriple/hypergeometric.hpp"

using namespace cubetriple;

namespace {

// Binary Krawtchouk polynomial by its generating-function coefficients:
// K_i(j) = sum_k (-1)^k C(j, k) C(d - j, i - k).
Rational binary_krawtchouk(int i, int j, int d) {
  Rational sum;
  for (int k = 0; k <= i; ++k) {
    Rational term = binomial(j, k) * binomial(d - j, i - k);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace

TEST(Hypergeometric, SmallValues) {
  EXPECT_EQ(hypergeometric_2f1(1, 1, 2), Rational(0));
  EXPECT_EQ(hypergeometric_2f1(1, 1, 1), Rational(-1));
  for (int d = 0; d <= 6; ++d)
    for (int j = 0; j <= d; ++j) EXPECT_EQ(hypergeometric_2f1(0, j, d), Rational(1));
}

TEST(Hypergeometric, AgreesWithKrawtchoukSum) {
  for (int d = 1; d <= 12; ++d)
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        EXPECT_EQ(binomial(d, i) * hypergeometric_2f1(i, j, d), binary_krawtchouk(i, j, d))
            << i << ", " << j << ", " << d;
}

TEST(Hypergeometric, RejectsOutOfRangeArguments) {
  EXPECT_THROW(hypergeometric_2f1(3, 0, 2), Error);
  EXPECT_THROW(hypergeometric_2f1(-1, 0, 2), Error);
  EXPECT_THROW(hypergeometric_2f1(0, 0, -1), Error);
  EXPECT_THROW(krawtchouk_recurrence_rhs(1, 0, 3), Error);
}

TEST(Hypergeometric, RecurrenceHoldsUpToTwelve) {
  for (int d = 0; d <= 12; ++d) EXPECT_TRUE(verify_krawtchouk_recurrence(d)) << "d = " << d;
}

TEST(Phi, DiameterTwoGrid) {
  EXPECT_EQ(phi_matrix(2).as_matrix(), (ExactMatrix{{1, 2, 1}, {1, 0, -1}, {1, -2, 1}}));
}

TEST(Phi, SquaresToScaledIdentity) {
  for (int d = 0; d <= 12; ++d) {
    ExactMatrix phi = phi_matrix(d).as_matrix();
    EXPECT_EQ(phi * phi, ExactMatrix::scalar(d + 1, GaussRat(pow2(d)))) << "d = " << d;
  }
}

TEST(Phi, FirstRowIsBinomialRow) {
  for (int d = 0; d <= 9; ++d) {
    PhiMatrix phi(d);
    for (int j = 0; j <= d; ++j) EXPECT_EQ(phi(0, j), binomial(d, j));
  }
}
