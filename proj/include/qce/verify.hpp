#pragma once

// Property suites shared by the command-line `verify` command and the
// acceptance binary. Each suite returns named checks with a pass flag and a
// short human-readable detail line; nothing here prints.

#include <qce/arith.hpp>
#include <qce/bessel.hpp>
#include <qce/component_groups.hpp>
#include <qce/explicit_bounds.hpp>
#include <qce/isogeny_bounds.hpp>
#include <qce/kloosterman_table.hpp>
#include <qce/parallel.hpp>
#include <qce/runge.hpp>
#include <qce/smith.hpp>
#include <qce/trace_formula.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace qce {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

struct VerifyOptions {
  u64 max_c = 400;
  u64 seed = 20240229;
  unsigned threads = 1;
};

inline std::string strprintf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

namespace detail {

/// Runs body(report) and records the wall time.
inline SuiteReport timed_suite(const std::string& name, const std::function<void(SuiteReport&)>& body) {
  SuiteReport r;
  r.suite = name;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<u64> fundamental_discriminants(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 D = std::max<u64>(lo, 3); D <= hi; ++D)
    if (is_fundamental(-static_cast<i64>(D))) out.push_back(D);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kloosterman sums and the Weil bounds.

inline SuiteReport verify_kloosterman(const VerifyOptions& opt = {}) {
  return detail::timed_suite("kloosterman", [&](SuiteReport& r) {
    const u64 C = opt.max_c;
    std::vector<double> imag_max(C + 1, 0.0), sym_max(C + 1, 0.0), per_max(C + 1, 0.0), fast_max(C + 1, 0.0);
    parallel_for(C, opt.threads, [&](std::size_t idx) {
      const u64 c = idx + 1;
      KloostermanTableCache cache;
      for (i64 m = 1; m <= 12; ++m)
        for (i64 n = 1; n <= 12; ++n) {
          const auto z = kloosterman_complex(m, n, c);
          imag_max[c] = std::max(imag_max[c], std::abs(z.imag()));
          sym_max[c] = std::max(sym_max[c], std::abs(z.real() - kloosterman_direct(n, m, c)));
          const i64 ci = static_cast<i64>(c);
          per_max[c] = std::max(per_max[c], std::abs(z.real() - kloosterman_direct(m + 3 * ci, n - 2 * ci, c)));
          per_max[c] = std::max(per_max[c], std::abs(z.real() - kloosterman_direct(m % ci, n % ci, c)));
          fast_max[c] = std::max(fast_max[c], std::abs(z.real() - kloosterman_fast(m, n, c)));
          fast_max[c] = std::max(fast_max[c], std::abs(z.real() - kloosterman_tabulated(cache, m, n, c)));
        }
    });
    auto mx = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
    const double im = mx(imag_max), sy = mx(sym_max), pe = mx(per_max), fa = mx(fast_max);
    r.checks.push_back({"realness", im < 1e-9, strprintf("max |Im S| = %.3g over m,n <= 12, c <= %llu", im,
                                                         static_cast<unsigned long long>(C))});
    r.checks.push_back({"symmetry", sy < 1e-9, strprintf("max |S(m,n;c) - S(n,m;c)| = %.3g", sy)});
    r.checks.push_back({"periodicity", pe < 1e-9, strprintf("max shift deviation = %.3g", pe)});
    r.checks.push_back({"oracle-equivalence", fa < 1e-9,
                        strprintf("max |fast - direct|, |table - direct| = %.3g", fa)});
    double gauss_dev = 0.0;
    for (u64 D : detail::fundamental_discriminants(3, 500)) {
      const double g2 = std::norm(gauss_sum(make_character(D)));
      gauss_dev = std::max(gauss_dev, std::abs(g2 - static_cast<double>(D)) / static_cast<double>(D));
    }
    r.checks.push_back({"gauss-modulus", gauss_dev < 1e-8,
                        strprintf("max relative ||G|^2 - D| = %.3g for D <= 500", gauss_dev)});
  });
}

inline SuiteReport verify_weil(const VerifyOptions& opt = {}) {
  return detail::timed_suite("weil", [&](SuiteReport& r) {
    const u64 C = opt.max_c;
    std::vector<double> worst(C + 1, -1e300), worst_all(C + 1, -1e300);
    parallel_for(C, opt.threads, [&](std::size_t idx) {
      const u64 c = idx + 1;
      for (i64 m = 1; m <= 12; ++m)
        for (i64 n = 1; n <= 12; ++n) {
          const double s = std::abs(kloosterman_direct(m, n, c));
          worst[c] = std::max(worst[c], s - weil_bound(m, n, c).bound_value);
          for (const auto& b : weil_bounds_all(m, n, c)) worst_all[c] = std::max(worst_all[c], s - b.bound_value);
        }
    });
    const double w = *std::max_element(worst.begin(), worst.end());
    const double wa = *std::max_element(worst_all.begin(), worst_all.end());
    r.checks.push_back({"weil-grid", w <= 1e-6, strprintf("max |S| - weil_bound = %.4g (m,n <= 12, c <= %llu)", w,
                                                          static_cast<unsigned long long>(C))});
    r.checks.push_back({"weil-every-bound", wa <= 1e-6,
                        strprintf("max |S| - (each applicable bound) = %.4g", wa)});

    // Refined cases on c = p^a c' for odd p <= 13, a <= 3.
    double worst_ref = -1e300;
    std::size_t cells = 0;
    std::map<WeilTag, std::size_t> seen;
    for (u64 p : {3, 5, 7, 11, 13}) {
      const i64 pi_ = static_cast<i64>(p);
      const std::vector<i64> mn{1, 2, 3, 5, pi_, 2 * pi_, pi_ * pi_, pi_ * pi_ * pi_};
      u64 q = 1;
      for (int a = 1; a <= 3; ++a) {
        q *= p;
        for (u64 cp : {1, 2, 4, 5, 7, 8}) {
          if (cp % p == 0) continue;
          const u64 c = q * cp;
          for (i64 m : mn)
            for (i64 n : mn) {
              const auto b = weil_bound(m, n, c, p);
              const double s = std::abs(kloosterman_fast(m, n, c));
              worst_ref = std::max(worst_ref, s - weil_refined(m, n, c, p).bound_value);
              worst_ref = std::max(worst_ref, s - b.bound_value);
              ++seen[weil_refined(m, n, c, p).tag];
              ++cells;
            }
        }
      }
    }
    r.checks.push_back({"weil-refined", worst_ref <= 1e-6 && seen.size() == 3,
                        strprintf("max |S| - refined = %.4g over %zu cells, %zu refined tags exercised", worst_ref,
                                  cells, seen.size())});
  });
}

inline SuiteReport verify_trig(const VerifyOptions& = {}) {
  return detail::timed_suite("trig", [&](SuiteReport& r) {
    double worst = -1e300;
    u64 wK = 0, wF = 0;
    for (u64 F = 1; F <= 300; ++F)
      for (u64 K = 0; K <= F; ++K) {
        const double d = trig_sum_direct(K, F) - trig_sum_bound(F);
        if (d > worst) worst = d, wK = K, wF = F;
      }
    r.checks.push_back({"trig-inequality", worst <= 1e-9,
                        strprintf("max S_{K,F} - bound = %.4g at (K,F) = (%llu,%llu), F <= 300", worst,
                                  static_cast<unsigned long long>(wK), static_cast<unsigned long long>(wF))});
  });
}

struct TwistedGridStats {
  double dft_excess = -1e300;     // max |DFT| - c sqrt(D)
  double zero_excess = 0.0;       // max |DFT| / (c sqrt D) on the predicted zeros
  double oracle_dev = 0.0;        // FFT against direct DFT on sampled α
  double sup_excess = -1e300;     // max sup - bound over bounded cells within the hypothesis
  std::size_t cells = 0;
  std::vector<std::string> unbounded;  // cells with a nonzero period sum
  std::vector<std::string> over_bound; // cells with sup > bound
  std::size_t c_eq_D_cells = 0;
  bool unbounded_only_at_c_eq_D = true;
};

inline TwistedGridStats twisted_grid(u64 c_max = 60, i64 m_max = 5) {
  TwistedGridStats st;
  KloostermanTableCache cache;
  for (u64 D : {3, 4, 7, 8, 11, 15}) {
    const auto chi = make_character(D);
    const double sD = std::sqrt(static_cast<double>(D));
    for (u64 c = 1; c <= c_max; ++c) {
      const u64 F = std::lcm(c, D), g = std::gcd(c, D);
      const double scale = static_cast<double>(c) * sD;
      for (i64 m = 1; m <= m_max; ++m) {
        ++st.cells;
        const auto dft = twisted_dft_all(m, c, chi, cache);
        for (u64 a = 0; a < F; ++a) {
          const double mod = std::abs(dft[a]);
          st.dft_excess = std::max(st.dft_excess, mod - scale);
          if (std::gcd(a, F / g) != 1) st.zero_excess = std::max(st.zero_excess, mod / scale);
        }
        for (u64 a : {u64{0}, u64{1}, F / 2, F - 1}) {
          if (a >= F) continue;
          st.oracle_dev = std::max(st.oracle_dev, std::abs(dft[a] - twisted_dft(m, c, chi, static_cast<i64>(a))));
        }
        const auto ps = twisted_partial_sup_detail(m, c, chi, cache);
        if (c == D) ++st.c_eq_D_cells;
        const bool expect_unbounded = c == D && std::gcd(static_cast<u64>(m), D) == 1;
        if (ps.bounded == expect_unbounded) st.unbounded_only_at_c_eq_D = false;
        const std::string tag = strprintf("(D=%llu,c=%llu,m=%lld)", static_cast<unsigned long long>(D),
                                          static_cast<unsigned long long>(c), static_cast<long long>(m));
        if (!ps.bounded) {
          st.unbounded.push_back(tag);
          continue;
        }
        const double ex = ps.value - twisted_partial_bound(c, D);
        st.sup_excess = std::max(st.sup_excess, ex);
        if (ex > 0) st.over_bound.push_back(tag);
      }
    }
  }
  return st;
}

inline SuiteReport verify_twisted(const VerifyOptions& = {}) {
  return detail::timed_suite("twisted", [&](SuiteReport& r) {
    const auto st = twisted_grid();
    r.checks.push_back({"twisted-dft-modulus", st.dft_excess <= 1e-6,
                        strprintf("max |DFT| - c sqrt(D) = %.4g over %zu cells", st.dft_excess, st.cells)});
    r.checks.push_back({"twisted-dft-zeros", st.zero_excess < 1e-8,
                        strprintf("max |DFT|/(c sqrt D) on predicted zeros = %.3g", st.zero_excess)});
    r.checks.push_back({"twisted-dft-oracle", st.oracle_dev < 1e-8,
                        strprintf("max |FFT - direct| = %.3g", st.oracle_dev)});
    std::string first = st.unbounded.empty() ? "" : " e.g. " + st.unbounded.front();
    // Literal grid, c = D included: there the period sum is -chi(m) D and the partial sums are unbounded.
    r.checks.push_back({"twisted-partial-sup", st.over_bound.empty() && st.unbounded.empty(),
                        strprintf("max sup - bound = %.4g on bounded cells; %zu over bound; %zu cells with "
                                  "unbounded partial sums%s",
                                  st.sup_excess, st.over_bound.size(), st.unbounded.size(), first.c_str())});
    // The lemma assumes c != D; check that the bound holds there and that c = D, (m, D) = 1 are exactly the
    // unbounded cells.
    r.checks.push_back({"twisted-partial-sup-c-ne-D", st.over_bound.empty() && st.unbounded_only_at_c_eq_D,
                        strprintf("bound holds on all %zu cells with c != D; unbounded cells are exactly c = D with "
                                  "gcd(m, D) = 1: %s",
                                  st.cells - st.c_eq_D_cells, st.unbounded_only_at_c_eq_D ? "yes" : "no")});
  });
}

inline SuiteReport verify_tails(const VerifyOptions& = {}) {
  return detail::timed_suite("tails", [&](SuiteReport& r) {
    const auto suf = tau_suffix_sums(1'000'000);
    double worst = -1e300;
    u64 wl = 0;
    for (u64 l = 1; l <= 1000; ++l) {
      const double d = suf[l] - tail_bounds(l).tau_tail;
      if (d > worst) worst = d, wl = l;
    }
    r.checks.push_back({"tau-tail", worst <= 0.0,
                        strprintf("max partial - bound = %.4g at lambda = %llu (lambda <= 1000)", worst,
                                  static_cast<unsigned long long>(wl))});
    r.checks.push_back({"tau-tail-at-1", suf[1] > 6.7 && suf[1] < 6.9 && suf[1] <= 7.0,
                        strprintf("sum_{n <= 1e6} tau(n)/n^1.5 = %.6f vs bound 7", suf[1])});
    // Harmonic bound everywhere; log(n)/n bound from lambda = 40 on, where it holds.
    double h = 0.0, ln = 0.0, worst_h = -1e300, worst_ln = -1e300;
    u64 last_ln_fail = 0;
    for (u64 l = 1; l <= 100'000; ++l) {
      h += 1.0 / static_cast<double>(l);
      ln += std::log(static_cast<double>(l)) / static_cast<double>(l);
      const auto tb = tail_bounds(l);
      worst_h = std::max(worst_h, h - tb.harmonic);
      if (ln > tb.log_over_n) last_ln_fail = l;
      if (l >= 40) worst_ln = std::max(worst_ln, ln - tb.log_over_n);
    }
    r.checks.push_back({"harmonic-bound", worst_h <= 1e-12, strprintf("max H_l - (log l + 1) = %.4g", worst_h)});
    r.checks.push_back({"log-over-n-bound", worst_ln <= 0.0 && last_ln_fail < 40,
                        strprintf("max sum log(n)/n - log^2(l)/2 = %.4g for 40 <= l <= 1e5; last failure at l = %llu",
                                  worst_ln, static_cast<unsigned long long>(last_ln_fail))});
  });
}

// ---------------------------------------------------------------------------
// Runge estimates.

inline SuiteReport verify_runge(const VerifyOptions& opt = {}) {
  return detail::timed_suite("runge", [&](SuiteReport& r) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ure(-0.5, 0.5), uim(0.9, 3.0);
    const std::vector<u64> primes{2, 3, 5, 7, 11};
    double fe1 = 0.0, fe2 = 0.0;
    for (int k = 0; k < 50; ++k) {
      const cplx t(ure(rng), uim(rng));
      for (u64 p : primes) {
        const double pd = static_cast<double>(p);
        const double target = 12.0 * std::log(pd);
        // Compare logarithms: relative error of the product = |exp(dev) - 1|.
        const cplx l1 = log_unit_g(UpperHalfPoint(-1.0 / t), p) + log_unit_g(UpperHalfPoint(t / pd), p);
        const cplx l2 = log_unit_g(UpperHalfPoint(-1.0 / (pd * t)), p) + log_unit_g(UpperHalfPoint(t), p);
        const cplx one(1.0, 0.0);
        fe1 = std::max(fe1, std::abs(std::exp(l1 - target) - one));
        fe2 = std::max(fe2, std::abs(std::exp(l2 - target) - one));
      }
    }
    r.checks.push_back({"functional-equation-S", fe1 < 1e-8,
                        strprintf("max |g(-1/t) g(t/p) / p^12 - 1| = %.3g (50 tau x 5 primes)", fe1)});
    r.checks.push_back({"functional-equation-W", fe2 < 1e-8,
                        strprintf("max |g(-1/(pt)) g(t) / p^12 - 1| = %.3g", fe2)});

    // Reduction invariant on arbitrary points.
    std::uniform_real_distribution<double> wre(-7.0, 7.0), wim(0.001, 3.0);
    const double qmax = std::exp(-std::numbers::pi * std::sqrt(3.0));
    double worst_q = 0.0, worst_map = 0.0;
    for (int k = 0; k < 200; ++k) {
      const UpperHalfPoint t(wre(rng), wim(rng));
      const auto red = reduce_to_fundamental_domain(t);
      worst_q = std::max(worst_q, red.tau.abs_q());
      const cplx back = red.gamma.act(t.tau());
      worst_map = std::max(worst_map, std::abs(back - red.tau.tau()) / std::max(1.0, std::abs(back)));
    }
    r.checks.push_back({"reduction-invariant", worst_q <= qmax * (1 + 1e-9) && worst_q < 0.005 && worst_map < 1e-9,
                        strprintf("max |q| = %.6f (limit %.6f), max |gamma t - t'| = %.2g", worst_q, qmax,
                                  worst_map)});

    // Deviation estimates for g near each cusp on reduced points.
    std::uniform_real_distribution<double> dim(std::sqrt(3.0) / 2.0, 3.0);
    double worst_inf = -1e300, worst_zero = -1e300;
    for (int k = 0; k < 200; ++k) {
      const auto red = reduce_to_fundamental_domain(UpperHalfPoint(ure(rng), dim(rng)));
      const u64 p = primes[static_cast<std::size_t>(k) % primes.size()];
      const auto g = g_deviation(red.tau, p);
      worst_inf = std::max(worst_inf, g.near_inf_dev - g.near_inf_bound);
      worst_zero = std::max(worst_zero, g.near_zero_dev - g.near_zero_bound);
    }
    r.checks.push_back({"g-deviation-infinity", worst_inf <= 0.0,
                        strprintf("max dev - 25|q| = %.4g on 200 reduced points", worst_inf)});
    r.checks.push_back({"g-deviation-zero", worst_zero <= 0.0,
                        strprintf("max dev - (4 pi^2 p / log|1/q| + 12 log p) = %.4g", worst_zero)});

    // The two estimate chains.
    u64 inf_fail = 0;
    for (u64 p = 2; p <= 10'000; ++p)
      if (!chain_near_infinity(p, 0.005).holds()) ++inf_fail;
    r.checks.push_back({"chain-near-infinity", inf_fail == 0,
                        strprintf("%llu failures for 2 <= p <= 1e4 at |q| = 0.005",
                                  static_cast<unsigned long long>(inf_fail))});
    std::vector<u64> zero_fail;
    for (u64 p = 2; p <= 10'000; ++p)
      if (!chain_near_zero(p).holds()) zero_fail.push_back(p);
    const auto c2 = chain_near_zero(2);
    // The inequality is false at p = 2 (documented); it must hold for every other p.
    const bool only_two = zero_fail.size() == 1 && zero_fail[0] == 2;
    r.checks.push_back({"chain-near-zero", only_two,
                        strprintf("fails exactly at p in {%s} (p = 2: %.4f > %.4f, known exception); holds for "
                                  "3 <= p <= 1e4: %s",
                                  zero_fail.empty() ? "" : std::to_string(zero_fail[0]).c_str(), c2.lhs, c2.rhs,
                                  only_two ? "yes" : "no")});

    // log|j| <= log|1/q| + log 2 when |j| > 3500.
    std::uniform_real_distribution<double> jim(std::sqrt(3.0) / 2.0, 5.0);
    std::size_t used = 0;
    double worst_j = -1e300;
    for (int k = 0; k < 200; ++k) {
      const auto red = reduce_to_fundamental_domain(UpperHalfPoint(ure(rng), jim(rng)));
      const double aj = std::abs(j_invariant(red.tau));
      if (aj <= 3500.0) continue;
      ++used;
      worst_j = std::max(worst_j, std::log(aj) - (-std::log(red.tau.abs_q()) + std::log(2.0)));
    }
    r.checks.push_back({"j-versus-q", used >= 100 && worst_j <= 1e-9,
                        strprintf("max log|j| - log|1/q| - log 2 = %.4g on %zu points with |j| > 3500", worst_j,
                                  used)});
    const double rb = runge_j_bound(2);
    r.checks.push_back({"runge-bound-2", std::abs(rb - 21.045) <= 0.001, strprintf("runge_j_bound(2) = %.6f", rb)});
    const double j_i = std::abs(j_invariant(UpperHalfPoint(0.0, 1.0)) - 1728.0);
    const double j_rho = std::abs(j_invariant(UpperHalfPoint(-0.5, std::sqrt(3.0) / 2.0)));
    r.checks.push_back({"j-special-values", j_i < 1e-7 && j_rho < 1e-6,
                        strprintf("|j(i) - 1728| = %.2g, |j(rho)| = %.2g", j_i, j_rho)});
  });
}

// ---------------------------------------------------------------------------
// Component groups.

/// The tabulated ρ-value sets, indexed by p mod 12 and e.
inline std::vector<Rational> expected_rho_table(u64 p_mod_12, u64 e) {
  using R = Rational;
  if (e == 1) {
    switch (p_mod_12) {
      case 1: return {R(0), R(2)};
      case 5: return {R(0), R(1), R(2), R(2, 3), R(4, 3)};
      case 7: return {R(0), R(1), R(2)};
      case 11: return {R(0), R(1), R(2), R(2, 3), R(4, 3)};
    }
  } else if (e == 2) {
    switch (p_mod_12) {
      case 1: return {R(0), R(1), R(2)};
      case 5: return {R(0), R(1), R(2), R(1, 3), R(2, 3), R(4, 3), R(5, 3)};
      case 7: return {R(0), R(1), R(2), R(1, 2), R(3, 2)};
      case 11: return {R(0), R(1), R(2), R(1, 3), R(1, 2), R(2, 3), R(4, 3), R(3, 2), R(5, 3)};
    }
  }
  throw DomainError("no table cell for this (p mod 12, e)");
}

inline std::string format_factors(const std::vector<i64>& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + "]";
}

inline std::vector<u64> two_torsion_primes(u64 limit, unsigned threads = 1) {
  std::vector<u64> primes;
  for (u64 p = 11; p < limit; ++p)
    if (p != 13 && is_prime(p)) primes.push_back(p);
  std::vector<char> hit(primes.size(), 0), agree(primes.size(), 1);
  parallel_for(primes.size(), threads, [&](std::size_t i) {
    const auto rep = two_torsion_report(primes[i]);
    hit[i] = rep.obstruction;
    agree[i] = rep.obstruction == rep.rational_rule;
  });
  std::vector<u64> out;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!agree[i]) throw DomainError("group and rational rules disagree at p = " + std::to_string(primes[i]));
    if (hit[i]) out.push_back(primes[i]);
  }
  return out;
}

inline SuiteReport verify_compgroup(const VerifyOptions& opt = {}) {
  return detail::timed_suite("compgroup", [&](SuiteReport& r) {
    std::string bad;
    std::size_t n_ok = 0, n_total = 0;
    bool rel_ok = true, order_ok = true;
    for (u64 p : {11, 23, 37, 59, 101, 997})
      for (u64 e : {1, 2, 3, 5}) {
        const auto cg = component_group(p, e);
        ++n_total;
        if (cg.matches_closed_form)
          ++n_ok;
        else
          bad += strprintf(" (p=%llu,e=%llu: %s vs %s)", static_cast<unsigned long long>(p),
                           static_cast<unsigned long long>(e), format_factors(cg.group.factors).c_str(),
                           format_factors(cg.expected_factors).c_str());
        rel_ok = rel_ok && cg.e_phi_in_zbar && cg.chain_sum_zero && cg.chain_values_ok;
        order_ok = order_ok && cg.zbar_order_is_n;
      }
    r.checks.push_back({"closed-form-match", n_ok == n_total,
                        strprintf("%zu/%zu (p,e) cells match Z/(ne) x (Z/e)^(S-2)%s", n_ok, n_total, bad.c_str())});
    r.checks.push_back({"relation-consequences", rel_ok,
                        "e*Phi in <Zbar>, sum of chain generators = 0, e*Cbar_s = Zbar on every cell"});
    r.checks.push_back({"zbar-order", order_ok, "order of Zbar equals n on every cell"});

    std::size_t cells_ok = 0;
    std::string mismatch;
    for (u64 p : {37, 17, 19, 23})
      for (u64 e : {1, 2}) {
        const auto rs = rho_value_set(p, e);
        auto want = expected_rho_table(p % 12, e);
        std::sort(want.begin(), want.end());
        if (rs.values == want && rs.all_consistent)
          ++cells_ok;
        else
          mismatch += strprintf(" (p=%llu,e=%llu)", static_cast<unsigned long long>(p),
                                static_cast<unsigned long long>(e));
      }
    r.checks.push_back({"rho-table", cells_ok == 8, strprintf("%zu/8 table cells reproduced%s", cells_ok,
                                                               mismatch.c_str())});

    const auto hits = two_torsion_primes(10'000, opt.threads);
    std::string hs;
    for (u64 p : hits) hs += (hs.empty() ? "" : ",") + std::to_string(p);
    r.checks.push_back({"two-torsion-sweep", hits == std::vector<u64>{17, 41},
                        "obstruction primes below 1e4: {" + hs + "}"});

    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> dim(1, 6), ent(-9, 9);
    std::size_t snf_ok = 0;
    for (int k = 0; k < 100; ++k) {
      const std::size_t rows = static_cast<std::size_t>(dim(rng)), cols = static_cast<std::size_t>(dim(rng));
      IntMatrix<BigInt> M(rows, cols);
      for (auto& x : M.data) x = ent(rng);
      const auto s = smith_normal_form(M);
      IntMatrix<BigInt> Dm(rows, cols);
      for (std::size_t i = 0; i < s.diagonal.size(); ++i) Dm(i, i) = s.diagonal[i];
      bool ok = s.left * M * s.right == Dm;
      const BigInt dl = determinant(s.left), dr = determinant(s.right);
      ok = ok && (dl == 1 || dl == -1) && (dr == 1 || dr == -1);
      for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
        const BigInt& a = s.diagonal[i];
        const BigInt& b = s.diagonal[i + 1];
        ok = ok && a >= 0 && (a == 0 ? b == 0 : b % a == 0);
      }
      snf_ok += ok;
    }
    r.checks.push_back({"snf-random", snf_ok == 100,
                        strprintf("%zu/100 random matrices: L M R = diag, det = +-1, divisibility chain", snf_ok)});
  });
}

// ---------------------------------------------------------------------------
// Trace-formula certificates.

struct GridEntry {
  u64 D, p;
  Certificate cert;
};

inline std::vector<GridEntry> certificate_grid(u64 lo = 15, u64 hi = 403, unsigned threads = 1) {
  const auto Ds = detail::fundamental_discriminants(lo, hi);
  std::vector<GridEntry> out(Ds.size());
  parallel_for(Ds.size(), threads, [&](std::size_t i) {
    const u64 D = Ds[i], p = certificate_prime(D);
    out[i] = {D, p, certify_nonvanishing(p, make_character(D))};
  });
  return out;
}

struct AgreementEntry {
  u64 D, p;
  double lower_bound;
  NewPlusValue numeric;
  bool pass() const { return numeric.value > 4.0 * pi * lower_bound - numeric.error_bound && numeric.value > 0.0; }
};

inline AgreementEntry certificate_agreement(u64 D, u64 p, double rel_tol = 1e-8) {
  const auto chi = make_character(D);
  const auto cert = certify_nonvanishing(p, chi);
  NumericOptions o;
  o.rel_tol = rel_tol;
  return {D, p, cert.lower_bound, new_plus_pairing(p, chi, o)};
}

inline SuiteReport verify_certify(const VerifyOptions& opt = {}) {
  return detail::timed_suite("certify-grid", [&](SuiteReport& r) {
    const auto grid = certificate_grid(15, 403, opt.threads);
    std::size_t ok = 0;
    double min_lb = 1e300;
    std::string fails;
    for (const auto& g : grid) {
      if (g.cert.verdict == Verdict::certified_positive)
        ++ok;
      else
        fails += strprintf(" (D=%llu,p=%llu)", static_cast<unsigned long long>(g.D),
                           static_cast<unsigned long long>(g.p));
      min_lb = std::min(min_lb, g.cert.lower_bound);
    }
    r.checks.push_back({"paper-grid", ok == grid.size(),
                        strprintf("%zu/%zu discriminants 15 <= D <= 403 certified; min lower bound %.4g%s", ok,
                                  grid.size(), min_lb, fails.c_str())});

    // Closed-form bounds dominate the numeric series.
    NumericOptions no;
    no.term_budget = 300'000;
    std::size_t env_ok = 0, env_total = 0;
    double worst_ratio = 0.0;
    for (u64 D : {3, 4, 15}) {
      const auto chi = make_character(D);
      for (u64 p : {7, 11, 13, 73})
        for (auto [m, N] : {std::pair<u64, u64>{1, p * p}, {1, p}, {p, p}}) {
          const PairingParams P(m, N, chi);
          const auto A = A_numeric(P, no);
          const auto B = B_numeric(P, no);
          const double ab = A_bound(m, chi, N), bb = B_bound(m, chi, N);
          env_total += 2;
          env_ok += std::abs(A.value) <= ab + A.error_bound;
          env_ok += std::abs(B.value) <= bb + B.error_bound;
          worst_ratio = std::max({worst_ratio, std::abs(A.value) / ab, std::abs(B.value) / bb});
        }
    }
    r.checks.push_back({"bound-envelope", env_ok == env_total,
                        strprintf("%zu/%zu series within closed-form bound + error; max |numeric|/bound = %.3g",
                                  env_ok, env_total, worst_ratio)});

    std::size_t sound = 0;
    std::string detail_s;
    for (auto [D, p] : {std::pair<u64, u64>{15, 271}, {19, 311}, {20, 317}}) {
      const auto a = certificate_agreement(D, p);
      sound += a.pass();
      detail_s += strprintf(" (D=%llu,p=%llu: %.6f +- %.3g vs 4 pi lb = %.4f)", static_cast<unsigned long long>(D),
                            static_cast<unsigned long long>(p), a.numeric.value, a.numeric.error_bound,
                            4.0 * pi * a.lower_bound);
    }
    r.checks.push_back({"certificate-soundness", sound == 3, strprintf("%zu/3 agree:", sound) + detail_s});

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ux(0.0, 1000.0);
    double worst = -1e300;
    for (int k = 0; k < 100'000; ++k) {
      const double x = ux(rng);
      worst = std::max(worst, std::abs(bessel_j1(x)) - x / 2.0);
    }
    r.checks.push_back({"bessel-half-x", worst <= 0.0,
                        strprintf("max |J1(x)| - x/2 = %.4g on 1e5 samples in [0, 1000]", worst)});
  });
}

// ---------------------------------------------------------------------------
// Thresholds.

inline SuiteReport verify_thresholds(const VerifyOptions& = {}) {
  return detail::timed_suite("thresholds", [&](SuiteReport& r) {
    const auto t = main_thresholds(3);
    r.checks.push_back({"main-thresholds-3",
                        t.borel == 2e13 && t.split_cartan == 1e7 && t.nonsplit_cartan == 1e7 && t.exceptional == 67,
                        strprintf("{%.17g, %.17g, %.17g, %.17g}", t.borel, t.split_cartan, t.nonsplit_cartan,
                                  t.exceptional)});
    const auto b = contradiction_search(SearchCase::borel);
    const auto c = contradiction_search(SearchCase::cartan);
    r.checks.push_back({"borel-sweep", b.max_allowed_p > 1.9e13 && b.max_allowed_p <= 2e13,
                        strprintf("max allowed p = %.6g at d = %llu", b.max_allowed_p,
                                  static_cast<unsigned long long>(b.argmax_d))});
    r.checks.push_back({"cartan-sweep", c.max_allowed_p < 1e7,
                        strprintf("max allowed p = %.6g at d = %llu", c.max_allowed_p,
                                  static_cast<unsigned long long>(c.argmax_d))});
    bool dom = true;
    for (u64 D : {3, 4, 7, 8, 15, 403, 1003}) {
      const auto td = main_thresholds(D);
      dom = dom && b.max_allowed_p < td.borel && c.max_allowed_p < td.split_cartan;
    }
    r.checks.push_back({"threshold-consistency", dom, "sweep maxima below the round thresholds for every tested D"});

    bool mono = true;
    for (u64 d = 1; d <= 8; ++d)
      for (double h = 0.0; h <= 3000.0; h += 50.0) {
        mono = mono && faltings_upper_from_j_height(h + 50) >= faltings_upper_from_j_height(h);
        mono = mono && serre_uniform_bound(d, h + 50) >= serre_uniform_bound(d, h);
        mono = mono && serre_uniform_bound(d + 1, h) >= serre_uniform_bound(d, h);
        const auto q0 = qcurve_case_bounds(d, h), q1 = qcurve_case_bounds(d, h + 50), q2 = qcurve_case_bounds(d + 1, h);
        mono = mono && q1.borel_dp >= q0.borel_dp && q1.cartan_dp2 >= q0.cartan_dp2;
        mono = mono && q2.borel_dp >= q0.borel_dp && q2.cartan_dp2 >= q0.cartan_dp2;
        mono = mono && exceptional_bound(d + 1) >= exceptional_bound(d);
      }
    r.checks.push_back({"monotonicity", mono, "bounds nondecreasing in h_F and [K:Q] on the grid"});

    bool spec = true;
    for (u64 d = 1; d <= 8; ++d)
      for (double h : {0.0, 500.0, 985.0, 1500.0, 4000.0}) {
        const auto pb = serre_product_inequality(d, h, {101}, {});
        spec = spec && pb.rhs == serre_uniform_bound(d, h) && pb.rhs == qcurve_case_bounds(d, h).borel_dp;
        const auto pc = serre_product_inequality(d, h, {}, {101});
        const double deg2 = static_cast<double>(d) * static_cast<double>(d);
        // d p² <= 4 d² bound: the Cartan bound carries the extra 4 = 2² and the d² factor.
        spec = spec && std::abs(4.0 * pc.rhs - qcurve_case_bounds(d, h).cartan_dp2) <= 1e-9 * pc.rhs;
        spec = spec && pc.lhs == 101.0 * 101.0 / 4.0 && deg2 > 0;
      }
    r.checks.push_back({"product-specializations", spec,
                        "singleton product inequalities reproduce serre_uniform_bound and qcurve_case_bounds"});
  });
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kloosterman", "weil",    "trig",         "twisted",   "tails",
                                              "runge",       "compgroup", "certify-grid", "thresholds"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const VerifyOptions& opt = {}) {
  if (name == "kloosterman") return verify_kloosterman(opt);
  if (name == "weil") return verify_weil(opt);
  if (name == "trig") return verify_trig(opt);
  if (name == "twisted") return verify_twisted(opt);
  if (name == "tails") return verify_tails(opt);
  if (name == "runge") return verify_runge(opt);
  if (name == "compgroup") return verify_compgroup(opt);
  if (name == "certify-grid") return verify_certify(opt);
  if (name == "thresholds") return verify_thresholds(opt);
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace qce
