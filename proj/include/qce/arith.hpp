#pragma once

// Exact integer arithmetic, quadratic characters and Kloosterman sums.

#include <qce/errors.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace qce {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Least nonnegative residue of a modulo c (c >= 1).
inline constexpr u64 mod_reduce(i64 a, u64 c) {
  const i64 r = a % static_cast<i64>(c);
  return r < 0 ? static_cast<u64>(r + static_cast<i64>(c)) : static_cast<u64>(r);
}

inline constexpr u64 mulmod(u64 a, u64 b, u64 c) {
  return static_cast<u64>(static_cast<u128>(a) * b % c);
}

inline constexpr u64 powmod(u64 base, u64 exp, u64 c) {
  u64 result = 1 % c;
  base %= c;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, c);
    base = mulmod(base, base, c);
    exp >>= 1;
  }
  return result;
}

/// Inverse of v modulo c, in [0, c). The ring Z/1Z is trivial, so (v, 1) -> 0.
inline u64 mod_inverse(i64 v, i64 c) {
  if (c < 1) throw NotInvertible("modulus must be positive");
  i64 r0 = c, r1 = static_cast<i64>(mod_reduce(v, static_cast<u64>(c)));
  i64 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i64 q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    s0 -= q * s1;
    std::swap(s0, s1);
  }
  if (r0 != 1) {
    if (c == 1) return 0;
    throw NotInvertible(std::to_string(v) + " mod " + std::to_string(c));
  }
  return mod_reduce(s0, static_cast<u64>(c));
}

struct PrimePower {
  u64 p;
  int e;
  u64 q;  // p^e
};

/// Prime-power factorization by trial division (n < 2^40 throughout).
inline std::vector<PrimePower> factorize(u64 n) {
  std::vector<PrimePower> out;
  auto take = [&](u64 p) {
    int e = 0;
    u64 q = 1;
    while (n % p == 0) {
      n /= p;
      q *= p;
      ++e;
    }
    if (e) out.push_back({p, e, q});
  };
  take(2);
  take(3);
  for (u64 p = 5; p * p <= n; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

struct MultiplicativeValues {
  u64 tau;
  u64 phi;
  int mobius;
};

inline MultiplicativeValues multiplicative_functions(u64 n) {
  MultiplicativeValues v{1, 1, 1};
  for (const auto& f : factorize(n)) {
    v.tau *= static_cast<u64>(f.e + 1);
    v.phi *= f.q / f.p * (f.p - 1);
    v.mobius = f.e > 1 ? 0 : -v.mobius;
  }
  return v;
}

inline u64 divisor_count(u64 n) { return multiplicative_functions(n).tau; }
inline u64 euler_phi(u64 n) { return multiplicative_functions(n).phi; }

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline u64 next_prime_above(u64 n) {
  u64 p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

inline bool is_squarefree(u64 n) {
  for (const auto& f : factorize(n))
    if (f.e > 1) return false;
  return true;
}

/// Whether delta is a fundamental discriminant (delta = 1 excluded).
inline bool is_fundamental(i64 delta) {
  if (delta == 0 || delta == 1) return false;
  const u64 a = static_cast<u64>(delta < 0 ? -delta : delta);
  const u64 r = mod_reduce(delta, 4);
  if (r == 1) return is_squarefree(a);
  if (r == 0) {
    const u64 m4 = mod_reduce(delta / 4, 4);
    return (m4 == 2 || m4 == 3) && is_squarefree(a / 4);
  }
  return false;
}

/// Kronecker symbol (a | n) for arbitrary integers.
inline int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) sign = -1;
  }
  if ((a % 2 == 0) && (n % 2 == 0)) return 0;
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v % 2 == 1) {
    const u64 a8 = mod_reduce(a, 8);
    if (a8 == 3 || a8 == 5) sign = -sign;
  }
  // Jacobi symbol (a | n) with n odd positive.
  i64 b = static_cast<i64>(mod_reduce(a, static_cast<u64>(n)));
  i64 m = n;
  while (b != 0) {
    while (b % 2 == 0) {
      b /= 2;
      const i64 m8 = m % 8;
      if (m8 == 3 || m8 == 5) sign = -sign;
    }
    std::swap(b, m);
    if (b % 4 == 3 && m % 4 == 3) sign = -sign;
    b %= m;
  }
  return m == 1 ? sign : 0;
}

/// The odd quadratic character n -> (-D | n) of conductor D.
class QuadraticCharacter {
 public:
  QuadraticCharacter() = default;

  explicit QuadraticCharacter(u64 D) : D_(D), table_(D) {
    if (D < 3 || !is_fundamental(-static_cast<i64>(D)))
      throw NotFundamental("-" + std::to_string(D) + " is not a fundamental discriminant");
    for (u64 r = 0; r < D; ++r)
      table_[r] = static_cast<std::int8_t>(kronecker(-static_cast<i64>(D), static_cast<i64>(r)));
  }

  u64 conductor() const { return D_; }
  const std::vector<std::int8_t>& table() const { return table_; }

  int operator()(i64 n) const { return table_[mod_reduce(n, D_)]; }
  int at(u64 r) const { return table_[r]; }  // r already reduced

 private:
  u64 D_ = 0;
  std::vector<std::int8_t> table_;
};

inline QuadraticCharacter make_character(u64 D) { return QuadraticCharacter(D); }

/// sum_{n mod D} chi(n) e(n/D).
inline std::complex<double> gauss_sum(const QuadraticCharacter& chi) {
  const u64 D = chi.conductor();
  std::complex<double> s = 0;
  for (u64 n = 1; n < D; ++n)
    if (chi.at(n) != 0) s += static_cast<double>(chi.at(n)) * std::polar(1.0, two_pi * n / D);
  return s;
}

/// e(r/c) with r an exact residue in [0, c).
inline std::complex<double> unit_root(u64 r, u64 c) {
  return std::polar(1.0, two_pi * static_cast<double>(r) / static_cast<double>(c));
}

/// Complex-accumulated Kloosterman sum by direct enumeration of units mod c.
inline std::complex<double> kloosterman_complex(i64 m, i64 n, u64 c) {
  if (c == 1) return 1.0;
  const u64 mm = mod_reduce(m, c), nn = mod_reduce(n, c);
  std::complex<double> s = 0;
  for (u64 v = 1; v < c; ++v) {
    if (std::gcd(v, c) != 1) continue;
    const u64 vbar = mod_inverse(static_cast<i64>(v), static_cast<i64>(c));
    const u64 r = (mulmod(mm, v, c) + mulmod(nn, vbar, c)) % c;
    s += unit_root(r, c);
  }
  return s;
}

inline double kloosterman_direct(i64 m, i64 n, u64 c) { return kloosterman_complex(m, n, c).real(); }

/// Kloosterman sum through the CRT splitting
///   S(m, n; qr) = S(m rbar^2, n; q) S(m qbar^2, n; r),  gcd(q, r) = 1,
/// with direct enumeration on each prime-power factor.
inline double kloosterman_fast(i64 m, i64 n, u64 c) {
  if (c == 1) return 1.0;
  double value = 1.0;
  for (const auto& f : factorize(c)) {
    const u64 q = f.q, rest = c / q;
    const u64 rbar = mod_inverse(static_cast<i64>(rest % q), static_cast<i64>(q));
    const u64 mq = mulmod(mod_reduce(m, q), mulmod(rbar, rbar, q), q);
    value *= kloosterman_direct(static_cast<i64>(mq), static_cast<i64>(mod_reduce(n, q)), q);
  }
  return value;
}

}  // namespace qce
