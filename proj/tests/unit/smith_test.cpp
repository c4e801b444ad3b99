#include "oracles.hpp"

#include <qce/smith.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qce;

namespace {

IntMatrix<BigInt> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long long lo, long long hi) {
  std::uniform_int_distribution<long long> v(lo, hi);
  IntMatrix<BigInt> M(r, c);
  for (auto& x : M.data) x = v(rng);
  return M;
}

void expect_valid_smith(const IntMatrix<BigInt>& M, const SmithResult<BigInt>& s) {
  const std::size_t n = std::min(M.rows, M.cols);
  ASSERT_EQ(s.diagonal.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_GE(s.diagonal[i], 0);
    if (i + 1 < n && s.diagonal[i] != 0) {
      EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
    }
    if (s.diagonal[i] == 0 && i + 1 < n) {
      EXPECT_EQ(s.diagonal[i + 1], 0);
    }
  }
  EXPECT_EQ(oracle::invariant_factors_by_minors(M), s.diagonal);
  ASSERT_EQ(s.left.rows, M.rows);
  ASSERT_EQ(s.right.rows, M.cols);
  EXPECT_EQ(int_abs(determinant(s.left)), 1);
  EXPECT_EQ(int_abs(determinant(s.right)), 1);
  IntMatrix<BigInt> D(M.rows, M.cols);
  for (std::size_t i = 0; i < n; ++i) D(i, i) = s.diagonal[i];
  EXPECT_EQ(s.left * M * s.right, D);
}

}  // namespace

TEST(Determinant, Examples) {
  IntMatrix<BigInt> A(3, 3);
  A.data = {2, 0, 1, 1, 3, 2, 1, 1, 1};
  EXPECT_EQ(determinant(A), 2 * (3 - 2) - 0 + 1 * (1 - 3));
  IntMatrix<BigInt> Z(2, 2);
  Z.data = {0, 1, 1, 0};
  EXPECT_EQ(determinant(Z), -1);
  EXPECT_EQ(determinant(IntMatrix<BigInt>(0, 0)), 1);
  EXPECT_THROW(determinant(IntMatrix<BigInt>(2, 3)), DomainError);
}

TEST(Smith, Examples) {
  const auto s = smith_normal_form({{2, 0}, {0, 3}});
  EXPECT_EQ(s.diagonal, (std::vector<BigInt>{1, 6}));
  const auto z = smith_normal_form({{0, 0}, {0, 0}});
  EXPECT_EQ(z.diagonal, (std::vector<BigInt>{0, 0}));
  const auto r = smith_normal_form({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  EXPECT_EQ(r.diagonal, (std::vector<BigInt>{2, 6, 12}));
}

TEST(Smith, MatchesDeterminantalDivisorsOnRandomMatrices) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int k = 0; k < 150; ++k) {
    const auto M = random_matrix(rng, dim(rng), dim(rng), -9, 9);
    expect_valid_smith(M, smith_normal_form(M));
  }
}

TEST(Smith, FallsBackToBigIntegersOnOverflow) {
  IntMatrix<BigInt> M(2, 2);
  const BigInt big = BigInt(1) << 62;
  M.data = {big, big + 1, big - 1, big};
  const auto s = smith_normal_form(M);
  // det = big² - (big² - 1) = 1, so the group is trivial.
  EXPECT_EQ(s.diagonal, (std::vector<BigInt>{1, 1}));
  IntMatrix<BigInt> H(2, 2);
  H.data = {BigInt(1) << 70, 0, 0, BigInt(1) << 65};
  const auto h = smith_normal_form(H);
  EXPECT_EQ(h.diagonal, (std::vector<BigInt>{BigInt(1) << 65, BigInt(1) << 70}));
  expect_valid_smith(M, s);
}

TEST(Smith, CheckedIntegersDetectOverflow) {
  const CheckedInt64 m = std::numeric_limits<std::int64_t>::max();
  EXPECT_THROW(m + 1, IntegerOverflow);
  EXPECT_THROW(m * 2, IntegerOverflow);
  EXPECT_THROW(-CheckedInt64(std::numeric_limits<std::int64_t>::min()), IntegerOverflow);
  IntMatrix<BigInt> H(1, 1);
  H(0, 0) = BigInt(1) << 64;
  EXPECT_THROW(convert_matrix<CheckedInt64>(H), IntegerOverflow);
}

TEST(Cokernel, InvariantFactorsAndProbeImages) {
  IntMatrix<CheckedInt64> M(2, 2);
  M(0, 0) = 2;
  M(1, 1) = 3;
  const auto probes = IntMatrix<CheckedInt64>::identity(2);
  const auto ck = cokernel(M, probes);
  ASSERT_EQ(ck.invariant_factors, (std::vector<BigInt>{6}));
  ASSERT_EQ(ck.probe_images.size(), 2u);
  // e1 has order 2 and e2 has order 3 in Z/6.
  EXPECT_EQ(ck.probe_images[0][0] * 2 % 6, 0);
  EXPECT_NE(ck.probe_images[0][0], 0);
  EXPECT_EQ(ck.probe_images[1][0] * 3 % 6, 0);
  EXPECT_NE(ck.probe_images[1][0], 0);
}

TEST(Cokernel, FreePartAndRandomOrders) {
  IntMatrix<CheckedInt64> M(1, 2);
  M(0, 0) = 4;
  const auto ck = cokernel(M, IntMatrix<CheckedInt64>::identity(2));
  EXPECT_EQ(ck.invariant_factors, (std::vector<BigInt>{4, 0}));

  // For square nonsingular M the group order is |det M|.
  std::mt19937_64 rng(23);
  for (int k = 0; k < 60; ++k) {
    const auto B = random_matrix(rng, 4, 4, -6, 6);
    const BigInt det = int_abs(determinant(B));
    if (det == 0) continue;
    const auto c = cokernel(convert_matrix<CheckedInt64>(B), IntMatrix<CheckedInt64>::identity(4));
    BigInt order = 1;
    for (const auto& d : c.invariant_factors) order *= d;
    EXPECT_EQ(order, det);
  }
}
