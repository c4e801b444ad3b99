#pragma once

// Closed-form height, isogeny and surjectivity thresholds for Q-curves, and the
// sweep combining them with the Runge bound on log|j|.

#include <qce/arith.hpp>
#include <qce/runge.hpp>
#include <qce/trace_formula.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qce {

inline constexpr double faltings_constant = 2.38;
inline constexpr double serre_height_floor = 985.0;
inline constexpr double serre_constant = 1e7;

/// h_F(E) <= h(j(E))/12 + 2.38.
inline double faltings_upper_from_j_height(double h_j) {
  if (!(h_j >= 0.0)) throw DomainError("height must be nonnegative");
  return h_j / 12.0 + faltings_constant;
}

/// 10^7 [K:Q]² (max(h_F, 985) + 4 log [K:Q])².
inline double serre_uniform_bound(u64 deg_K, double h_F) {
  if (deg_K < 1) throw DomainError("degree must be positive");
  const double d = static_cast<double>(deg_K);
  const double inner = std::max(h_F, serre_height_floor) + 4.0 * std::log(d);
  return serre_constant * d * d * inner * inner;
}

struct ProductInequality {
  double lhs;
  double rhs;
  bool satisfied;
};

/// prod_{p in B} p * prod_{q in C} q²/4 against 10^7 [K:Q]² (max(h_F, 985) + 4 log [K:Q] + 4|C| log 2)².
inline ProductInequality serre_product_inequality(u64 deg_K, double h_F, const std::vector<u64>& borel_primes,
                                                  const std::vector<u64>& cartan_primes) {
  if (deg_K < 1) throw DomainError("degree must be positive");
  double lhs = 1.0;
  for (u64 p : borel_primes) lhs *= static_cast<double>(p);
  for (u64 q : cartan_primes) lhs *= static_cast<double>(q) * static_cast<double>(q) / 4.0;
  const double d = static_cast<double>(deg_K);
  const double inner = std::max(h_F, serre_height_floor) + 4.0 * std::log(d) +
                       4.0 * static_cast<double>(cartan_primes.size()) * std::log(2.0);
  const double rhs = serre_constant * d * d * inner * inner;
  return {lhs, rhs, lhs <= rhs};
}

struct QCurveCaseBounds {
  double borel_dp;    // bound for d(E) p
  double cartan_dp2;  // bound for d(E) p²
};

inline QCurveCaseBounds qcurve_case_bounds(u64 deg_K, double h_F) {
  if (deg_K < 1) throw DomainError("degree must be positive");
  const double d = static_cast<double>(deg_K);
  const double hb = std::max(h_F, serre_height_floor);
  const double borel_inner = hb + 4.0 * std::log(d);
  const double cartan_inner = hb + 4.0 * std::log(2.0 * d);
  return {serre_constant * d * d * borel_inner * borel_inner,
          4.0 * serre_constant * d * d * cartan_inner * cartan_inner};
}

/// 30 [K:Q] + 1.
inline u64 exceptional_bound(u64 deg_K) {
  if (deg_K < 1) throw DomainError("degree must be positive");
  return 30 * deg_K + 1;
}

struct ThresholdReport {
  u64 D = 0;
  double borel = 2e13;
  double split_cartan = 1e7;
  double nonsplit_cartan = 1e7;
  double exceptional = 67;
};

inline ThresholdReport main_thresholds(u64 D) {
  if (D < 3 || !is_fundamental(-static_cast<i64>(D)))
    throw NotFundamental("-" + std::to_string(D) + " is not a fundamental discriminant");
  ThresholdReport r;
  r.D = D;
  r.nonsplit_cartan = std::max(1e7, nonsplit_threshold(D));
  r.exceptional = static_cast<double>(next_prime_above(exceptional_bound(2)));
  return r;
}

enum class SearchCase { borel, cartan };

inline const char* to_string(SearchCase c) { return c == SearchCase::borel ? "borel" : "cartan"; }

struct ContradictionSearch {
  double max_allowed_p = 0.0;
  u64 argmax_d = 0;
  double h_F_at_argmax = 0.0;
};

/// For each degree d in [2, d_max] with least prime factor d0, bound h_F by
/// runge_j_bound(d0)/12 + 3 and return the largest p permitted by the
/// quadratic-field Q-curve bounds (d p <= B or d p² <= B).
inline ContradictionSearch contradiction_search(SearchCase which, u64 d_max = 1'000'000) {
  std::vector<u64> spf(d_max + 1, 0);
  for (u64 i = 2; i <= d_max; ++i) {
    if (spf[i]) continue;
    for (u64 k = i; k <= d_max; k += i)
      if (!spf[k]) spf[k] = i;
  }
  ContradictionSearch out;
  for (u64 d = 2; d <= d_max; ++d) {
    const double h_F = runge_j_bound(spf[d]) / 12.0 + 3.0;
    const auto b = qcurve_case_bounds(2, h_F);
    const double dd = static_cast<double>(d);
    const double p = which == SearchCase::borel ? b.borel_dp / dd : std::sqrt(b.cartan_dp2 / dd);
    if (p > out.max_allowed_p) {
      out.max_allowed_p = p;
      out.argmax_d = d;
      out.h_F_at_argmax = h_F;
    }
  }
  return out;
}

}  // namespace qce
