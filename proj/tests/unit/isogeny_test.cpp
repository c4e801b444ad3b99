#include <qce/isogeny_bounds.hpp>

#include <gtest/gtest.h>

using namespace qce;

TEST(Faltings, Examples) {
  EXPECT_DOUBLE_EQ(faltings_upper_from_j_height(0.0), 2.38);
  EXPECT_DOUBLE_EQ(faltings_upper_from_j_height(12.0), 3.38);
  EXPECT_DOUBLE_EQ(faltings_upper_from_j_height(24.0), 4.38);
  EXPECT_THROW(faltings_upper_from_j_height(-1.0), DomainError);
}

TEST(Serre, UniformBoundExamples) {
  EXPECT_DOUBLE_EQ(serre_uniform_bound(1, 500.0), 9.70225e12);
  EXPECT_NEAR(serre_uniform_bound(2, 1000.0), 4.022e13, 1e10);
  EXPECT_THROW(serre_uniform_bound(0, 1.0), DomainError);
}

TEST(Serre, ProductInequality) {
  const auto e = serre_product_inequality(1, 0.0, {}, {});
  EXPECT_EQ(e.lhs, 1.0);
  EXPECT_TRUE(e.satisfied);
  EXPECT_TRUE(serre_product_inequality(1, 0.0, {9'702'249'999'989}, {}).satisfied);
  EXPECT_FALSE(serre_product_inequality(1, 0.0, {9'702'250'000'007}, {}).satisfied);
  const double rhs = serre_product_inequality(1, 0.0, {}, {7}).rhs;
  const u64 q = static_cast<u64>(2.0 * std::sqrt(rhs)) + 10;
  EXPECT_FALSE(serre_product_inequality(1, 0.0, {}, {q}).satisfied);
}

TEST(QCurve, CaseBounds) {
  const auto b = qcurve_case_bounds(2, 985.0);
  EXPECT_NEAR(b.borel_dp, 3.903e13, 1e10);
  // The Cartan bound carries the [K:Q]² factor as well: 4 · 10^7 · 4 · (985 + 4 log 4)².
  EXPECT_NEAR(b.cartan_dp2, 4.0 * 3.925e13, 4e10);
  EXPECT_DOUBLE_EQ(qcurve_case_bounds(1, 0.0).borel_dp, 9.70225e12);
}

TEST(Exceptional, Examples) {
  EXPECT_EQ(exceptional_bound(1), 31u);
  EXPECT_EQ(exceptional_bound(2), 61u);
  EXPECT_EQ(exceptional_bound(3), 91u);
  EXPECT_EQ(next_prime_above(exceptional_bound(2)), 67u);
  EXPECT_THROW(exceptional_bound(0), DomainError);
}

TEST(Thresholds, MainTheorem) {
  for (u64 D : {3, 4}) {
    const auto t = main_thresholds(D);
    EXPECT_EQ(t.borel, 2e13);
    EXPECT_EQ(t.split_cartan, 1e7);
    EXPECT_EQ(t.nonsplit_cartan, 1e7);
    EXPECT_EQ(t.exceptional, 67);
  }
  EXPECT_THROW(main_thresholds(12), NotFundamental);
}

TEST(Thresholds, NonsplitBranchTakesOverForHugeDiscriminants) {
  u64 D = 100'000'000'000'000'003ull;  // 1e17 + 3
  while (!is_fundamental(-static_cast<i64>(D))) D += 4;
  const auto t = main_thresholds(D);
  EXPECT_GT(t.nonsplit_cartan, 1e7);
  EXPECT_GE(t.borel, t.split_cartan);
}

TEST(Search, BorelAndCartan) {
  const auto b = contradiction_search(SearchCase::borel, 100'000);
  EXPECT_EQ(b.argmax_d, 2u);
  EXPECT_LE(b.max_allowed_p, 2e13);
  EXPECT_NEAR(b.max_allowed_p, 1.95e13, 1e11);
  const auto c = contradiction_search(SearchCase::cartan, 100'000);
  EXPECT_EQ(c.argmax_d, 2u);
  EXPECT_LE(c.max_allowed_p, 1e7);
}
