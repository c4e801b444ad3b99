#pragma once

// Standalone explicit inequalities: Weil bounds for Kloosterman sums, the
// Kloosterman-Dirichlet twisted sums and their partial sums, the trigonometric
// sum estimate and the divisor-sum tails.

#include <qce/arith.hpp>
#include <qce/kloosterman_table.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace qce {

enum class WeilTag { generic, odd_prime_power_coprime, prime_divides_one_of_mn, prime_divides_both };

inline const char* to_string(WeilTag t) {
  switch (t) {
    case WeilTag::generic: return "generic";
    case WeilTag::odd_prime_power_coprime: return "odd-prime-power-coprime";
    case WeilTag::prime_divides_one_of_mn: return "prime-divides-one-of-mn";
    case WeilTag::prime_divides_both: return "prime-divides-both";
  }
  return "?";
}

struct WeilCase {
  WeilTag tag = WeilTag::generic;
  double bound_value = 0.0;
};

inline double weil_generic(i64 m, i64 n, u64 c) {
  const u64 g = std::gcd(std::gcd(mod_reduce(m, c), mod_reduce(n, c)), c);
  return std::sqrt(static_cast<double>(g == 0 ? c : g)) * static_cast<double>(divisor_count(c)) *
         std::sqrt(static_cast<double>(c));
}

/// The refined bound attached to the odd prime p | c (c = p^a c', p ∤ c').
inline WeilCase weil_refined(i64 m, i64 n, u64 c, u64 p) {
  u64 cp = c;
  while (cp % p == 0) cp /= p;
  const u64 g = std::gcd(std::gcd(mod_reduce(m, c), mod_reduce(n, c)), c);
  const double sg = std::sqrt(static_cast<double>(g == 0 ? c : g));
  const bool pm = mod_reduce(m, p) == 0, pn = mod_reduce(n, p) == 0;
  if (!pm && !pn)
    return {WeilTag::odd_prime_power_coprime,
            2.0 * static_cast<double>(divisor_count(cp)) * sg * std::sqrt(static_cast<double>(c))};
  if (pm != pn)
    return {WeilTag::prime_divides_one_of_mn,
            static_cast<double>(divisor_count(cp)) * sg * std::sqrt(static_cast<double>(cp))};
  return {WeilTag::prime_divides_both,
          static_cast<double>(divisor_count(c / p)) * sg * std::sqrt(static_cast<double>(c))};
}

/// Sharpest of the generic Weil bound and, if a hint is given, the refined
/// bound for that prime. Ties go to the refined case.
inline WeilCase weil_bound(i64 m, i64 n, u64 c, std::optional<u64> p_hint = std::nullopt) {
  if (c < 1) throw DomainError("modulus must be positive");
  WeilCase generic{WeilTag::generic, weil_generic(m, n, c)};
  if (!p_hint) return generic;
  const u64 p = *p_hint;
  if (p % 2 == 0 || !is_prime(p) || c % p != 0)
    throw InvalidHint(std::to_string(p) + " is not an odd prime dividing " + std::to_string(c));
  WeilCase refined = weil_refined(m, n, c, p);
  return refined.bound_value <= generic.bound_value ? refined : generic;
}

/// Every bound that applies to (m, n, c): the generic one and one refinement
/// per odd prime factor of c.
inline std::vector<WeilCase> weil_bounds_all(i64 m, i64 n, u64 c) {
  std::vector<WeilCase> out{{WeilTag::generic, weil_generic(m, n, c)}};
  for (const auto& f : factorize(c))
    if (f.p % 2 == 1) out.push_back(weil_refined(m, n, c, f.p));
  return out;
}

/// S_{K,F} = sum_{γ=1}^{F-1} |sin(πγK/F)| / sin(πγ/F), numerator reduced exactly.
inline double trig_sum_direct(u64 K, u64 F) {
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (u64 g = 1; g < F; ++g) {
    const u64 r = mulmod(g, K % F, F);
    s += std::abs(std::sin(pi * static_cast<double>(r) / static_cast<double>(F))) /
         std::sin(pi * static_cast<double>(g) / static_cast<double>(F));
  }
  return s;
}

inline double trig_sum_bound(u64 F) {
  const double pi = std::numbers::pi;
  return 4.0 * static_cast<double>(F) / (pi * pi) * (std::log(static_cast<double>(F)) + 1.5);
}

/// Values n -> chi(n) S(m, n; c) over one period F = lcm(c, D).
inline std::vector<double> twisted_summand(i64 m, u64 c, const QuadraticCharacter& chi,
                                           KloostermanTableCache& cache) {
  const u64 D = chi.conductor();
  const u64 F = std::lcm(c, D);
  std::vector<double> a(F);
  KloostermanStream s(cache, m, c, 0);
  for (u64 n = 0; n < F; ++n, s.advance()) a[n] = chi.at(n % D) * s.value();
  return a;
}

/// sum_{n=0}^{F-1} chi(n) S(m, n; c) e(nα/F) for a single α, by direct summation.
inline std::complex<double> twisted_dft(i64 m, u64 c, const QuadraticCharacter& chi, i64 alpha) {
  KloostermanTableCache cache;
  const auto a = twisted_summand(m, c, chi, cache);
  const u64 F = a.size();
  const u64 al = mod_reduce(alpha, F);
  std::complex<double> s = 0;
  for (u64 n = 0; n < F; ++n)
    if (a[n] != 0.0) s += a[n] * unit_root(mulmod(n, al, F), F);
  return s;
}

/// The twisted DFT for every α in [0, F) via one FFT.
inline std::vector<std::complex<double>> twisted_dft_all(i64 m, u64 c, const QuadraticCharacter& chi,
                                                         KloostermanTableCache& cache) {
  const auto a = twisted_summand(m, c, chi, cache);
  const u64 F = a.size();
  fftw_complex* buf = fftw_alloc_complex(F);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(F), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (u64 n = 0; n < F; ++n) {
    buf[n][0] = a[n];
    buf[n][1] = 0.0;
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> out(F);
  for (u64 k = 0; k < F; ++k) out[k] = {buf[k][0], buf[k][1]};
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

inline std::vector<std::complex<double>> twisted_dft_all(i64 m, u64 c, const QuadraticCharacter& chi) {
  KloostermanTableCache cache;
  return twisted_dft_all(m, c, chi, cache);
}

struct PartialSup {
  double value = 0.0;       // +inf when the partial sums are unbounded
  double period_sum = 0.0;  // sum over one full period
  bool bounded = true;
  bool within_hypothesis = true;  // false when c = D
};

/// sup over windows [K, K'] of |sum chi(n) S(m, n; c)|. When the period sum
/// vanishes the prefix sums are F-periodic, so scanning two periods realizes
/// every window and the supremum is max(prefix) - min(prefix).
inline PartialSup twisted_partial_sup_detail(i64 m, u64 c, const QuadraticCharacter& chi,
                                             KloostermanTableCache& cache) {
  const auto a = twisted_summand(m, c, chi, cache);
  const u64 F = a.size();
  PartialSup out;
  out.within_hypothesis = c != chi.conductor();
  double total = 0.0;
  for (double v : a) total += v;
  out.period_sum = total;
  const double scale = static_cast<double>(c) * std::sqrt(static_cast<double>(chi.conductor()));
  if (std::abs(total) > 1e-8 * scale * static_cast<double>(F)) {
    out.bounded = false;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  double prefix = 0.0, lo = 0.0, hi = 0.0;
  for (u64 k = 0; k < 2 * F; ++k) {
    prefix += a[k % F];
    lo = std::min(lo, prefix);
    hi = std::max(hi, prefix);
  }
  out.value = hi - lo;
  return out;
}

inline double twisted_partial_sup(i64 m, u64 c, const QuadraticCharacter& chi) {
  KloostermanTableCache cache;
  return twisted_partial_sup_detail(m, c, chi, cache).value;
}

inline double twisted_partial_bound(u64 c, u64 D) {
  const double pi = std::numbers::pi;
  const double cd = static_cast<double>(c), Dd = static_cast<double>(D);
  return 4.0 * cd * std::sqrt(Dd) / (pi * pi) * (std::log(Dd * cd) + 1.5);
}

struct TailBounds {
  double harmonic;    // bound for sum_{n<=λ} 1/n
  double log_over_n;  // bound for sum_{n<=λ} log(n)/n
  double tau_tail;    // bound for sum_{n>=λ} τ(n)/n^{3/2}
};

inline TailBounds tail_bounds(u64 lambda) {
  if (lambda < 1) throw DomainError("lambda must be >= 1");
  const double L = std::log(static_cast<double>(lambda));
  return {L + 1.0, L * L / 2.0, (2.0 * L + 7.0) / std::sqrt(static_cast<double>(lambda))};
}

/// Suffix sums t[λ] = sum_{λ <= n <= limit} τ(n)/n^{3/2}, λ in [1, limit].
inline std::vector<double> tau_suffix_sums(u64 limit) {
  std::vector<std::uint32_t> tau(limit + 1, 0);
  for (u64 d = 1; d <= limit; ++d)
    for (u64 k = d; k <= limit; k += d) ++tau[k];
  std::vector<double> suffix(limit + 2, 0.0);
  long double acc = 0.0L;
  for (u64 n = limit; n >= 1; --n) {
    const long double nn = static_cast<long double>(n);
    acc += static_cast<long double>(tau[n]) / (nn * std::sqrt(nn));
    suffix[n] = static_cast<double>(acc);
  }
  return suffix;
}

}  // namespace qce
