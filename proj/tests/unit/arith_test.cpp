#include "oracles.hpp"

#include <qce/arith.hpp>
#include <qce/kloosterman_table.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qce;

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(-3, 2), -1);
  EXPECT_EQ(kronecker(-3, 3), 0);
  EXPECT_EQ(kronecker(-4, 3), -1);
}

TEST(Kronecker, AgreesWithLegendreOracleOnOddPrimes) {
  for (i64 a = -60; a <= 60; ++a)
    for (u64 p = 3; p < 200; p += 2) {
      if (!oracle::is_prime(p)) continue;
      EXPECT_EQ(kronecker(a, static_cast<i64>(p)), oracle::legendre(a, p)) << a << " " << p;
    }
}

TEST(Character, Tables) {
  EXPECT_EQ(make_character(3).table(), (std::vector<std::int8_t>{0, 1, -1}));
  EXPECT_EQ(make_character(4).table(), (std::vector<std::int8_t>{0, 1, 0, -1}));
  EXPECT_THROW(make_character(9), NotFundamental);
  EXPECT_THROW(make_character(1), NotFundamental);
  EXPECT_THROW(make_character(12), NotFundamental);
  EXPECT_NO_THROW(make_character(20));
}

TEST(Character, MatchesFactorizationOracle) {
  for (u64 D = 3; D <= 200; ++D) {
    if (!is_fundamental(-static_cast<i64>(D))) continue;
    const auto chi = make_character(D);
    for (u64 n = 1; n <= 300; ++n) EXPECT_EQ(chi(static_cast<i64>(n)), oracle::quadratic_character(D, n)) << D << " " << n;
  }
}

TEST(Character, PropertiesOddPeriodicMultiplicative) {
  for (u64 D : {3, 4, 7, 8, 15, 20, 23, 403}) {
    const auto chi = make_character(D);
    const i64 Di = static_cast<i64>(D);
    EXPECT_EQ(chi(-1), -1) << D;
    for (i64 a = -40; a <= 40; ++a) {
      EXPECT_EQ(chi(a), chi(a + Di));
      for (i64 b = 1; b <= 20; ++b) EXPECT_EQ(chi(a * b), chi(a) * chi(b));
    }
  }
}

TEST(Fundamental, KnownList) {
  std::vector<u64> got;
  for (u64 D = 3; D <= 40; ++D)
    if (is_fundamental(-static_cast<i64>(D))) got.push_back(D);
  EXPECT_EQ(got, (std::vector<u64>{3, 4, 7, 8, 11, 15, 19, 20, 23, 24, 31, 35, 39, 40}));
}

TEST(Multiplicative, Examples) {
  auto v = multiplicative_functions(12);
  EXPECT_EQ(v.tau, 6u);
  EXPECT_EQ(v.phi, 4u);
  EXPECT_EQ(v.mobius, 0);
  v = multiplicative_functions(1);
  EXPECT_EQ(v.tau, 1u);
  EXPECT_EQ(v.phi, 1u);
  EXPECT_EQ(v.mobius, 1);
  v = multiplicative_functions(30);
  EXPECT_EQ(v.tau, 8u);
  EXPECT_EQ(v.phi, 8u);
  EXPECT_EQ(v.mobius, -1);
  for (u64 n = 1; n <= 500; ++n) EXPECT_EQ(divisor_count(n), oracle::divisor_count(n));
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(3, 7), 5u);
  EXPECT_EQ(mod_inverse(1, 1), 0u);
  EXPECT_THROW(mod_inverse(2, 4), NotInvertible);
  EXPECT_EQ(mod_inverse(-3, 7), 2u);
  for (u64 c = 2; c < 60; ++c)
    for (u64 v = 0; v < c; ++v) {
      if (std::gcd(v, c) != 1) continue;
      EXPECT_EQ(mod_inverse(static_cast<i64>(v), static_cast<i64>(c)), oracle::inverse_by_search(v, c));
    }
}

TEST(Primes, AgreeWithTrialDivision) {
  for (u64 n = 0; n < 5000; ++n) EXPECT_EQ(is_prime(n), oracle::is_prime(n)) << n;
  EXPECT_TRUE(is_prime(1'000'000'007ull));
  EXPECT_FALSE(is_prime(3'215'031'751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_EQ(next_prime_above(61), 67u);
}

TEST(Kloosterman, Examples) {
  EXPECT_NEAR(kloosterman_direct(1, 1, 2), 1.0, 1e-12);
  EXPECT_NEAR(kloosterman_direct(1, 1, 3), -1.0, 1e-12);
  EXPECT_NEAR(kloosterman_direct(1, 1, 5), 0.3819660112501051, 1e-9);
  EXPECT_NEAR(kloosterman_direct(0, 0, 12), 4.0, 1e-12);
  EXPECT_NEAR(kloosterman_fast(1, 1, 6), kloosterman_direct(1, 1, 6), 1e-12);
  EXPECT_NEAR(kloosterman_fast(1, 0, 4), 0.0, 1e-12);
  EXPECT_NEAR(kloosterman_fast(1, 1, 1), 1.0, 0.0);
  EXPECT_NEAR(kloosterman_direct(1, 1, 1), 1.0, 0.0);
}

TEST(Kloosterman, DirectMatchesSearchOracle) {
  for (u64 c = 1; c <= 60; ++c)
    for (i64 m = -3; m <= 8; ++m)
      for (i64 n = 0; n <= 8; ++n) {
        const auto a = kloosterman_complex(m, n, c);
        const auto b = oracle::kloosterman(m, n, c);
        EXPECT_NEAR(a.real(), b.real(), 1e-9);
        EXPECT_NEAR(a.imag(), b.imag(), 1e-9);
      }
}

TEST(Kloosterman, RamanujanSumIsMobiusForUnitFirstArgument) {
  // S(m, 0; c) = c_c(m) and for gcd(m, c) = 1 this is mu(c).
  for (u64 c = 1; c <= 200; ++c)
    EXPECT_NEAR(kloosterman_fast(1, 0, c), multiplicative_functions(c).mobius, 1e-9) << c;
}

TEST(Kloosterman, FastAndTabulatedMatchDirectOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> mn(-1000, 1000);
  std::uniform_int_distribution<u64> cc(1, 3000);
  KloostermanTableCache cache;
  for (int k = 0; k < 300; ++k) {
    const i64 m = mn(rng), n = mn(rng);
    const u64 c = cc(rng);
    const double d = kloosterman_direct(m, n, c);
    EXPECT_NEAR(kloosterman_fast(m, n, c), d, 1e-8) << m << " " << n << " " << c;
    EXPECT_NEAR(kloosterman_tabulated(cache, m, n, c), d, 1e-8) << m << " " << n << " " << c;
  }
}

TEST(Kloosterman, StreamWalksSecondArgument) {
  KloostermanTableCache cache;
  for (u64 c : {1, 7, 12, 49, 360, 1001}) {
    KloostermanStream s(cache, 5, c, 3);
    for (i64 n = 3; n < 3 + 2 * static_cast<i64>(c); ++n, s.advance())
      EXPECT_NEAR(s.value(), kloosterman_direct(5, n, c), 1e-9) << c << " " << n;
  }
}

TEST(GaussSum, Examples) {
  const auto g3 = gauss_sum(make_character(3));
  EXPECT_NEAR(g3.real(), 0.0, 1e-12);
  EXPECT_NEAR(g3.imag(), std::sqrt(3.0), 1e-12);
  const auto g4 = gauss_sum(make_character(4));
  EXPECT_NEAR(g4.real(), 0.0, 1e-12);
  EXPECT_NEAR(g4.imag(), 2.0, 1e-12);
  // Odd real primitive characters: G = i sqrt(D).
  for (u64 D = 3; D <= 500; ++D) {
    if (!is_fundamental(-static_cast<i64>(D))) continue;
    const auto g = gauss_sum(make_character(D));
    EXPECT_NEAR(std::norm(g), static_cast<double>(D), 1e-8 * static_cast<double>(D));
    EXPECT_NEAR(g.imag(), std::sqrt(static_cast<double>(D)), 1e-9);
  }
}
