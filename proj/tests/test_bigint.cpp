#include <random>

#include <gtest/gtest.h>

#include "slowent/bigint_matrix.hpp"
#include "slowent/error.hpp"

using namespace slowent;

TEST(BigIntMatrix, FibonacciPowersMatchRecurrence) {
  IntMatrix f(2, 2);
  f << 1, 1, 1, 0;
  const BigIntMatrix p = BigIntMatrix(f).power(100);
  BigInt a = 0, b = 1; // F_0, F_1
  for (int i = 0; i < 100; ++i) {
    const BigInt c = a + b;
    a = b;
    b = c;
  }
  // [[F101, F100], [F100, F99]]
  EXPECT_EQ(p(0, 0), b);
  EXPECT_EQ(p(0, 1), a);
  EXPECT_EQ(p(1, 1), b - a);
}

TEST(BigIntMatrix, DeterminantMatchesFloatingPointOnSmallMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    const double ref = m.cast<double>().determinant();
    EXPECT_EQ(static_cast<double>(BigIntMatrix(m).determinant()), std::round(ref));
  }
}

TEST(BigIntMatrix, ZeroPivotNeedsRowSwap) {
  IntMatrix m(3, 3);
  m << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_EQ(BigIntMatrix(m).determinant(), -1);
}

TEST(BigIntMatrix, InverseAndNegativePowers) {
  IntMatrix m(3, 3);
  m << 2, 1, 0, 1, 1, 0, 0, 0, 1;
  const BigIntMatrix a(m);
  EXPECT_EQ(a * a.unimodular_inverse(), BigIntMatrix::identity(3));
  EXPECT_EQ(a.power(-7) * a.power(7), BigIntMatrix::identity(3));
  EXPECT_EQ(a.power(0), BigIntMatrix::identity(3));
}

TEST(BigIntMatrix, NonUnimodularInverseThrows) {
  IntMatrix m(2, 2);
  m << 2, 0, 0, 1;
  try {
    BigIntMatrix(m).unimodular_inverse();
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::NonUnimodular);
  }
}

TEST(BigIntMatrix, Norms) {
  IntMatrix m(2, 2);
  m << 2, -7, 1, 1;
  const BigIntMatrix a(m);
  EXPECT_EQ(a.max_abs(), 7);
  EXPECT_EQ(a.row_sum_norm(), 9);
  EXPECT_EQ(a.to_double()(0, 1), -7.0);
}
