#include <qce/trace_formula.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace qce;

namespace {

NumericOptions small_budget(u64 budget = 200'000) {
  NumericOptions o;
  o.term_budget = budget;
  return o;
}

}  // namespace

TEST(Series, SAExamplesWithinWeilInducedBound) {
  const auto chi3 = make_character(3);
  const auto s49 = series_SA(1, chi3, 49, 49, 20'000);
  EXPECT_LT(s49.tail_bound, 1e-10);
  EXPECT_LE(std::abs(s49.value), 6.0 + s49.tail_bound);
  const auto s98 = series_SA(1, chi3, 49, 98, 20'000);
  EXPECT_LE(std::abs(s98.value), 2.0 * 3.0 * 7.0 * 2.0 / std::sqrt(98.0) + s98.tail_bound);
  EXPECT_THROW(series_SA(1, chi3, 49, 50, 100), LevelMismatch);
}

TEST(Series, SATailShrinksWithNMax) {
  const auto chi3 = make_character(3);
  const auto a = series_SA(1, chi3, 49, 49, 2000);
  EXPECT_LT(a.tail_bound, 1e-12 * std::abs(a.value));
  double prev = 1e300;
  for (u64 n : {10, 100, 1000}) {
    const double t = series_SA(1, chi3, 49, 49, n).tail_bound;
    EXPECT_LT(t, prev);
    prev = t;
  }
}

TEST(Series, SBExamples) {
  const auto chi3 = make_character(3);
  const auto s2 = series_SB(1, chi3, 49, 2, 20'000);
  EXPECT_LE(std::abs(s2.value), 3.0 * 2.0 / std::sqrt(2.0) + s2.tail_bound);
  EXPECT_LT(series_SB(1, chi3, 49, 5, 2000).tail_bound, 1e-10);
  EXPECT_THROW(series_SB(1, chi3, 49, 7, 100), LevelMismatch);
}

TEST(Series, SBAtTrivialModulusIsBesselSeries) {
  const auto chi3 = make_character(3);
  const PairingParams P(1, 49, chi3);
  double direct = 0.0;
  for (u64 n = 1; n <= 500; ++n) {
    const double nd = static_cast<double>(n);
    direct += chi3(static_cast<i64>(n)) / std::sqrt(nd) * bessel_j1(4.0 * pi * std::sqrt(nd) / 7.0) * std::exp(-nd * P.x);
  }
  EXPECT_NEAR(series_SB(1, chi3, 49, 1, 500).value, direct, 1e-10);
}

TEST(Pairing, RejectsLevelSharingFactorWithDiscriminant) {
  EXPECT_THROW(PairingParams(1, 9, make_character(3)), DividesDiscriminant);
  EXPECT_THROW(PairingParams(0, 7, make_character(3)), DomainError);
}

TEST(Numeric, WithinClosedFormBounds) {
  const auto chi3 = make_character(3);
  const auto o = small_budget();
  const auto a49 = A_numeric(PairingParams(1, 49, chi3), o);
  EXPECT_LE(std::abs(a49.value), 14.0 * 3.0 / 49.0 + a49.error_bound);
  const auto a7 = A_numeric(PairingParams(1, 7, chi3), o);
  EXPECT_LE(std::abs(a7.value), 6.0 + a7.error_bound);
  const auto b49 = B_numeric(PairingParams(1, 49, chi3), o);
  EXPECT_LE(std::abs(b49.value), 21.0 + b49.error_bound);
  const auto b7 = B_numeric(PairingParams(7, 7, chi3), o);
  EXPECT_LE(std::abs(b7.value), 7.0 * 3.0 * std::sqrt(7.0) + b7.error_bound);
  EXPECT_NEAR(7.0 * 3.0 * std::sqrt(7.0), 55.56, 5e-3);
}

TEST(Numeric, SelfConsistentUnderCutoffDoubling) {
  const auto chi3 = make_character(3);
  const PairingParams P(1, 49, chi3);
  const auto a1 = A_numeric(P, small_budget(100'000)), a2 = A_numeric(P, small_budget(200'000));
  EXPECT_LE(std::abs(a1.value - a2.value), a1.error_bound + a2.error_bound);
  EXPECT_LE(a2.error_bound, a1.error_bound);
  const auto b1 = B_numeric(P, small_budget(100'000)), b2 = B_numeric(P, small_budget(200'000));
  EXPECT_LE(std::abs(b1.value - b2.value), b1.error_bound + b2.error_bound);
}

TEST(Numeric, LevelOneDoesNotNeedAPrimeFactor) {
  const auto b = B_numeric(PairingParams(1, 1, make_character(3)), small_budget(50'000));
  EXPECT_TRUE(std::isfinite(b.value));
  EXPECT_TRUE(std::isfinite(b.error_bound));
}

TEST(Bounds, Examples) {
  const auto chi3 = make_character(3);
  const auto a = A_bound_detail(1, chi3, 49);
  EXPECT_NEAR(a.weil, 0.857, 5e-4);
  EXPECT_NEAR(a.abel, 1.291, 5e-4);
  EXPECT_NEAR(A_bound(1, chi3, 49), 14.0 * 3.0 / 49.0, 1e-12);
  const auto b = B_bound_detail(1, chi3, 49);
  // (sqrt(3)/7)(9 log²3 + 12 log 3 log 49 + 6 log²49) + 2/sqrt(3).
  EXPECT_NEAR(b.abel, 39.02, 0.01);
  EXPECT_NEAR(B_bound(1, chi3, 49), 21.0, 1e-12);
  EXPECT_THROW(A_bound(2, chi3, 49), UnsupportedCase);
  EXPECT_THROW(B_bound(1, chi3, 15), UnsupportedCase);
  EXPECT_THROW(A_bound(1, chi3, 9), DividesDiscriminant);
}

TEST(Bounds, AbelBranchWinsForLargeDiscriminant) {
  u64 D = 1'000'003;
  while (!is_fundamental(-static_cast<i64>(D))) ++D;
  const auto a = A_bound_detail(1, make_character(D), 49);
  EXPECT_LT(a.abel, a.weil);
  EXPECT_EQ(a.value, a.abel);
}

TEST(Bounds, EnvelopeDominatesNumericSeries) {
  for (u64 D : {3, 4, 15})
    for (u64 p : {7, 11, 13}) {
      const auto chi = make_character(D);
      for (auto [m, N] : {std::pair<u64, u64>{1, p * p}, {1, p}, {p, p}}) {
        const PairingParams P(m, N, chi);
        const auto o = small_budget(60'000);
        const auto A = A_numeric(P, o);
        const auto B = B_numeric(P, o);
        EXPECT_LE(std::abs(A.value), A_bound(m, chi, N) + A.error_bound) << D << " " << m << " " << N;
        EXPECT_LE(std::abs(B.value), B_bound(m, chi, N) + B.error_bound) << D << " " << m << " " << N;
      }
    }
}

TEST(Pairing, WithinTriangleEnvelope) {
  const auto chi3 = make_character(3);
  const auto v = pairing_numeric(1, 49, chi3, small_budget());
  ASSERT_TRUE(std::isfinite(v.value));
  const double x = 2.0 * pi / (3.0 * 7.0);
  const double lead = 4.0 * pi * std::exp(-x);
  EXPECT_GT(lead, 0.0);
  EXPECT_LE(std::abs(v.value - lead), 8.0 * pi * pi * (A_bound(1, chi3, 49) + B_bound(1, chi3, 49) / 7.0) + v.error_bound);
}

TEST(Certificate, Examples) {
  const auto c = certify_nonvanishing(271, make_character(15));
  EXPECT_EQ(c.verdict, Verdict::certified_positive);
  EXPECT_NEAR(c.lower_bound, 0.08, 0.01);
  const auto n = certify_nonvanishing(73, make_character(3));
  EXPECT_EQ(n.verdict, Verdict::indeterminate);
  EXPECT_NEAR(n.components.display, -1.36, 0.01);
  EXPECT_NEAR(n.lower_bound, n.components.display, 1e-12);
  EXPECT_FALSE(n.diagnostic.empty());
  EXPECT_THROW(certify_nonvanishing(3, make_character(3)), DividesDiscriminant);
  EXPECT_THROW(certify_nonvanishing(91, make_character(3)), NotPrime);
}

TEST(Certificate, WeilMixHandlesSmallDiscriminants) {
  const auto c = certify_nonvanishing(163, make_character(7), CertMode::weil_mix);
  EXPECT_EQ(c.verdict, Verdict::certified_positive);
  EXPECT_FALSE(c.paper_exact);
}

TEST(Certificate, LowerBoundNeverExceedsAssembly) {
  for (u64 D : {15, 20, 403}) {
    const auto c = certify_nonvanishing(certificate_prime(D), make_character(D));
    EXPECT_LE(c.lower_bound, c.components.assembled);
    if (!std::isnan(c.components.display)) {
      EXPECT_LE(c.lower_bound, c.components.display);
    }
  }
}

TEST(Thresholds, NonsplitExamples) {
  EXPECT_NEAR(nonsplit_threshold(3), 72.293, 5e-3);
  EXPECT_GE(nonsplit_threshold(3), 72.0);
  EXPECT_NEAR(nonsplit_threshold(4), 98.026, 5e-3);
  EXPECT_NEAR(nonsplit_threshold(15), 266.5, 5e-2);
  EXPECT_THROW(nonsplit_threshold(2), DomainError);
  EXPECT_EQ(certificate_prime(15), 269u);
  EXPECT_EQ(certificate_prime(3), 73u);
}
