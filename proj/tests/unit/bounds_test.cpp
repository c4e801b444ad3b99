#include "oracles.hpp"

#include <qce/explicit_bounds.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qce;

TEST(Weil, Examples) {
  EXPECT_NEAR(weil_bound(1, 1, 1).bound_value, 1.0, 1e-12);
  EXPECT_NEAR(weil_bound(1, 1, 9).bound_value, 9.0, 1e-12);  // sqrt(1) * 3 * 3
  const auto r = weil_bound(1, 1, 9, 3);
  EXPECT_EQ(r.tag, WeilTag::odd_prime_power_coprime);
  EXPECT_NEAR(r.bound_value, 6.0, 1e-12);
  EXPECT_THROW(weil_bound(1, 1, 9, 5), InvalidHint);
  EXPECT_THROW(weil_bound(1, 1, 8, 2), InvalidHint);
  EXPECT_THROW(weil_bound(1, 1, 0), DomainError);
}

TEST(Weil, EveryApplicableBoundHoldsOnRandomInputs) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> mn(-200, 200);
  std::uniform_int_distribution<u64> cc(1, 500);
  for (int k = 0; k < 400; ++k) {
    const i64 m = mn(rng), n = mn(rng);
    const u64 c = cc(rng);
    const double s = std::abs(kloosterman_direct(m, n, c));
    for (const auto& b : weil_bounds_all(m, n, c)) EXPECT_LE(s, b.bound_value + 1e-8) << m << " " << n << " " << c;
  }
}

TEST(Weil, RefinedCasesOnPrimePowers) {
  for (u64 p : {3, 5, 7})
    for (u64 a = 1; a <= 3; ++a)
      for (u64 cp : {1, 2, 4}) {
        u64 c = cp;
        for (u64 i = 0; i < a; ++i) c *= p;
        for (i64 m = -6; m <= 6; ++m)
          for (i64 n = -6; n <= 6; ++n) {
            const auto b = weil_refined(m, n, c, p);
            EXPECT_LE(std::abs(kloosterman_direct(m, n, c)), b.bound_value + 1e-8) << m << " " << n << " " << c;
          }
      }
}

TEST(Trig, ExamplesAndOracle) {
  EXPECT_NEAR(trig_sum_direct(1, 7), 6.0, 1e-12);
  EXPECT_NEAR(trig_sum_direct(0, 7), 0.0, 1e-12);
  for (u64 F = 2; F <= 60; ++F)
    for (u64 K = 0; K <= 2 * F; ++K) {
      const double s = trig_sum_direct(K, F);
      EXPECT_NEAR(s, oracle::trig_sum(K, F), 1e-9);
      EXPECT_LE(s, trig_sum_bound(F) + 1e-12) << K << " " << F;
    }
}

TEST(Twisted, DftExamples) {
  const auto chi3 = make_character(3);
  const auto all = twisted_dft_all(1, 1, chi3);
  ASSERT_EQ(all.size(), 3u);
  for (i64 a = 0; a < 3; ++a) {
    const auto d = twisted_dft(1, 1, chi3, a);
    EXPECT_NEAR(std::abs(all[a] - d), 0.0, 1e-9);
  }
  EXPECT_NEAR(std::abs(all[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(all[1]), std::sqrt(3.0), 1e-12);
}

TEST(Twisted, DftMatchesDirectSummation) {
  for (u64 D : {3, 4, 7, 8})
    for (u64 c = 1; c <= 12; ++c)
      for (i64 m : {1, 2, -3}) {
        const auto chi = make_character(D);
        const auto all = twisted_dft_all(m, c, chi);
        for (i64 a = 0; a < static_cast<i64>(all.size()); ++a)
          EXPECT_NEAR(std::abs(all[a] - twisted_dft(m, c, chi, a)), 0.0, 1e-8) << D << " " << c << " " << m;
      }
}

TEST(Twisted, PartialSupExamples) {
  const auto chi3 = make_character(3);
  EXPECT_NEAR(twisted_partial_sup(1, 1, chi3), 1.0, 1e-12);
  KloostermanTableCache cache;
  const auto a = twisted_summand(1, 2, chi3, cache);
  EXPECT_NEAR(twisted_partial_sup(1, 2, chi3), oracle::window_sup(a), 1e-9);
}

TEST(Twisted, PartialSupMatchesWindowOracleAndBoundAwayFromConductor) {
  for (u64 D : {3, 4, 7, 8, 11})
    for (u64 c = 1; c <= 20; ++c) {
      if (c == D) continue;
      const auto chi = make_character(D);
      for (i64 m : {1, 2, 5}) {
        KloostermanTableCache cache;
        const auto det = twisted_partial_sup_detail(m, c, chi, cache);
        ASSERT_TRUE(det.bounded) << D << " " << c << " " << m;
        EXPECT_NEAR(det.value, oracle::window_sup(twisted_summand(m, c, chi, cache)), 1e-7);
        EXPECT_LE(det.value, twisted_partial_bound(c, D) + 1e-9) << D << " " << c << " " << m;
      }
    }
}

TEST(Twisted, UnboundedWhenModulusEqualsConductor) {
  // For c = D and gcd(m, D) = 1 the period sum is -chi(m) D, so partial
  // sums grow linearly.
  for (u64 D : {3, 4, 7, 8, 11}) {
    const auto chi = make_character(D);
    KloostermanTableCache cache;
    const auto det = twisted_partial_sup_detail(1, D, chi, cache);
    EXPECT_FALSE(det.within_hypothesis);
    EXPECT_FALSE(det.bounded);
    EXPECT_TRUE(std::isinf(det.value));
    EXPECT_NEAR(det.period_sum, -static_cast<double>(D), 1e-8);
  }
}

TEST(Twisted, PartialBoundExamples) {
  EXPECT_NEAR(twisted_partial_bound(1, 3), 1.824, 5e-4);
  // 4 c sqrt(D)/π² (log(Dc) + 1.5) evaluated by hand: 16/π² (log 8 + 1.5) and 40 sqrt(3)/π² (log 30 + 1.5).
  EXPECT_NEAR(twisted_partial_bound(2, 4), 5.8028, 5e-4);
  EXPECT_NEAR(twisted_partial_bound(10, 3), 34.405, 5e-3);
}

TEST(Tails, Examples) {
  const auto t1 = tail_bounds(1);
  EXPECT_DOUBLE_EQ(t1.harmonic, 1.0);
  EXPECT_DOUBLE_EQ(t1.log_over_n, 0.0);
  EXPECT_DOUBLE_EQ(t1.tau_tail, 7.0);
  EXPECT_THROW(tail_bounds(0), DomainError);
}

TEST(Tails, HarmonicAndTauTailHold) {
  const u64 limit = 200'000;
  const auto suffix = tau_suffix_sums(limit);
  double h = 0.0;
  for (u64 lam = 1; lam <= 5000; ++lam) {
    h += 1.0 / static_cast<double>(lam);
    EXPECT_LE(h, tail_bounds(lam).harmonic + 1e-12) << lam;
    // Finite suffix sums only bound the tail from below, which is the
    // direction that can falsify the bound.
    EXPECT_LE(suffix[lam], tail_bounds(lam).tau_tail) << lam;
  }
}

TEST(Tails, LogOverNBoundHoldsFromForty) {
  double s = 0.0;
  u64 last_failure = 0;
  for (u64 n = 1; n <= 20000; ++n) {
    s += std::log(static_cast<double>(n)) / static_cast<double>(n);
    if (s > tail_bounds(n).log_over_n) last_failure = n;
  }
  EXPECT_LT(last_failure, 40u);
}
