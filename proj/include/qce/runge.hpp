#pragma once

// Modular-unit estimates for Runge's method on X_0(p): the discriminant, the
// unit g(τ) = Δ(τ)/Δ(pτ), j, reduction to the standard fundamental domain,
// cusp location and the explicit inequalities leading to the bound on log|j|.

#include <qce/arith.hpp>
#include <qce/errors.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace qce {

using cplx = std::complex<double>;

struct UpperHalfPoint {
  double re = 0.0;
  double im = 1.0;

  UpperHalfPoint() = default;
  UpperHalfPoint(double r, double i) : re(r), im(i) {
    if (!(i > 0.0)) throw DomainError("imaginary part must be positive, got " + std::to_string(i));
  }
  explicit UpperHalfPoint(cplx z) : UpperHalfPoint(z.real(), z.imag()) {}

  cplx tau() const { return {re, im}; }
  /// q = exp(2πiτ).
  cplx q() const { return std::polar(std::exp(-two_pi * im), two_pi * (re - std::floor(re))); }
  double abs_q() const { return std::exp(-two_pi * im); }
};

/// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
  i64 a = 1, b = 0, c = 0, d = 1;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
  i64 det() const { return a * d - b * c; }
  /// Inverse of a determinant-one matrix.
  Mat2 inverse() const { return {d, -b, -c, a}; }
  cplx act(cplx z) const {
    return (static_cast<double>(a) * z + static_cast<double>(b)) / (static_cast<double>(c) * z + static_cast<double>(d));
  }
};

namespace detail {

/// sum_{n >= 1, p ∤ n} log(1 - q^n) (p = 0: no restriction), truncated once
/// |q|^n / (1 - |q|) < 1e-17.
inline cplx log_eta_product(cplx q, u64 p = 0) {
  const double aq = std::abs(q);
  if (aq >= 1.0) throw DomainError("|q| must be < 1");
  cplx s = 0.0, qn = 1.0;
  double mag = 1.0;
  for (u64 n = 1;; ++n) {
    qn *= q;
    mag *= aq;
    if (p == 0 || n % p != 0) s += std::log(1.0 - qn);
    if (mag < 1e-17 * (1.0 - aq)) break;
    if (n > 10'000'000) throw NonConvergence("q-product did not converge");
  }
  return s;
}

}  // namespace detail

/// log Δ(τ) = 2πiτ + 24 sum log(1 - q^n) (branch immaterial: only exp and the real part are used).
inline cplx log_delta(const UpperHalfPoint& t) {
  return cplx(0.0, two_pi) * t.tau() + 24.0 * detail::log_eta_product(t.q());
}

inline cplx delta(const UpperHalfPoint& t) { return std::exp(log_delta(t)); }

/// log g(τ) = (1 - p) 2πiτ + 24 sum_{(n, p) = 1} log(1 - q^n).
inline cplx log_unit_g(const UpperHalfPoint& t, u64 p) {
  return static_cast<double>(1 - static_cast<i64>(p)) * cplx(0.0, two_pi) * t.tau() +
         24.0 * detail::log_eta_product(t.q(), p);
}

inline cplx unit_g(const UpperHalfPoint& t, u64 p) { return std::exp(log_unit_g(t, p)); }

/// g_0(τ) = g(-1/τ).
inline cplx unit_g0(const UpperHalfPoint& t, u64 p) { return unit_g(UpperHalfPoint(-1.0 / t.tau()), p); }
inline cplx log_unit_g0(const UpperHalfPoint& t, u64 p) { return log_unit_g(UpperHalfPoint(-1.0 / t.tau()), p); }

struct Reduction {
  UpperHalfPoint tau;  // reduced point
  Mat2 gamma;          // gamma · (input) = tau
  int iterations = 0;
};

inline constexpr double domain_slack = 1e-12;

/// Translate into |Re| <= 1/2 and invert while |τ| < 1.
inline Reduction reduce_to_fundamental_domain(const UpperHalfPoint& t0) {
  Reduction r;
  cplx z = t0.tau();
  for (int it = 0; it < 10'000; ++it) {
    const double n = std::round(z.real());
    if (n != 0.0) {
      z -= n;
      r.gamma = Mat2{1, -static_cast<i64>(n), 0, 1} * r.gamma;
    }
    if (std::norm(z) >= 1.0 - domain_slack) {
      r.tau = UpperHalfPoint(z);
      r.iterations = it + 1;
      return r;
    }
    z = -1.0 / z;
    r.gamma = Mat2{0, -1, 1, 0} * r.gamma;
  }
  throw NonConvergence("fundamental-domain reduction did not terminate");
}

/// E4(τ) = 1 + 240 sum σ3(n) q^n.
inline cplx eisenstein_e4(const UpperHalfPoint& t) {
  const cplx q = t.q();
  const double aq = std::abs(q);
  cplx s = 1.0, qn = 1.0;
  double mag = 1.0;
  for (u64 n = 1;; ++n) {
    qn *= q;
    mag *= aq;
    double sigma3 = 0.0;
    for (u64 d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      const double d1 = static_cast<double>(d), d2 = static_cast<double>(n / d);
      sigma3 += d1 * d1 * d1;
      if (d * d != n) sigma3 += d2 * d2 * d2;
    }
    s += 240.0 * sigma3 * qn;
    const double nn = static_cast<double>(n);
    if (mag * nn * nn * nn * nn < 1e-19) break;
    if (n > 10'000'000) throw NonConvergence("E4 series did not converge");
  }
  return s;
}

/// j = E4³/Δ, evaluated at the reduced representative.
inline cplx j_invariant(const UpperHalfPoint& t) {
  const auto r = reduce_to_fundamental_domain(t);
  const cplx e4 = eisenstein_e4(r.tau);
  return std::exp(3.0 * std::log(e4) - log_delta(r.tau));
}

enum class Cusp { c_infinity, c_zero };

inline const char* to_string(Cusp c) { return c == Cusp::c_infinity ? "c_infinity" : "c_zero"; }

struct CuspLocation {
  Cusp cusp = Cusp::c_infinity;
  UpperHalfPoint tau;  // representative in D + Z
  /// Element of Γ0(p) transporting the representative back to the input:
  /// gamma·tau = input (c_infinity) or gamma·(-1/tau) = input (c_zero).
  Mat2 gamma;
};

/// Decides whether the input is near c_∞ or c_0 on X_0(p).
inline CuspLocation locate_near_cusp(const UpperHalfPoint& t0, u64 p) {
  const auto red = reduce_to_fundamental_domain(t0);
  const Mat2& beta = red.gamma;
  CuspLocation loc;
  const i64 pp = static_cast<i64>(p);
  if (beta.c % pp == 0) {
    loc.cusp = Cusp::c_infinity;
    loc.tau = red.tau;
    loc.gamma = beta.inverse();
    return loc;
  }
  // W T^k beta lies in Γ0(p) iff a + k c ≡ 0 mod p, with W = [[0,-1],[1,0]].
  const i64 k = static_cast<i64>(
      mulmod(mod_reduce(beta.a, p), mod_inverse(-beta.c, pp), p));
  const Mat2 M = Mat2{0, -1, 1, 0} * Mat2{1, k, 0, 1} * beta;
  loc.cusp = Cusp::c_zero;
  loc.tau = UpperHalfPoint(red.tau.re + static_cast<double>(k), red.tau.im);
  loc.gamma = M.inverse();
  return loc;
}

struct ProductBounds {
  double small_q;  // (-log(1-r))/(r(1-r)) |q|
  double general;  // π²/(6 log|1/q|)
};

inline ProductBounds log_abs_product_bounds(cplx q, double r) {
  const double aq = std::abs(q);
  if (aq >= 1.0) throw DomainError("|q| must be < 1");
  if (!(r > 0.0 && r < 1.0) || aq > r) throw DomainError("need |q| <= r < 1");
  const double pi = std::numbers::pi;
  return {-std::log1p(-r) / (r * (1.0 - r)) * aq, pi * pi / (6.0 * -std::log(aq))};
}

/// sum_{n <= n_max} |log|1 - q^n||, the left side of the product bounds.
inline double log_abs_product_sum(cplx q, u64 n_max = 10'000) {
  double s = 0.0;
  cplx qn = 1.0;
  for (u64 n = 1; n <= n_max; ++n) {
    qn *= q;
    s += std::abs(std::log(std::abs(1.0 - qn)));
  }
  return s;
}

struct GDeviation {
  double near_inf_dev;
  double near_zero_dev;
  double near_inf_bound;   // 25 |q|
  double near_zero_bound;  // 4π² p / log|1/q| + 12 log p
};

inline GDeviation g_deviation(const UpperHalfPoint& t, u64 p) {
  const double pd = static_cast<double>(p);
  const double log_q = -two_pi * t.im;  // log|q|
  const double pi = std::numbers::pi;
  GDeviation g;
  g.near_inf_dev = std::abs(log_unit_g(t, p).real() + (pd - 1.0) * log_q);
  g.near_zero_dev = std::abs(log_unit_g0(t, p).real() - (pd - 1.0) / pd * log_q);
  g.near_inf_bound = 25.0 * t.abs_q();
  g.near_zero_bound = 4.0 * pi * pi * pd / -log_q + 12.0 * std::log(pd);
  return g;
}

/// 2π sqrt(p) + 6 log p + 8.
inline double runge_j_bound(u64 p) {
  const double pd = static_cast<double>(p);
  return two_pi * std::sqrt(pd) + 6.0 * std::log(pd) + 8.0;
}

struct ChainStep {
  double lhs;
  double rhs;
  bool holds() const { return lhs <= rhs; }
};

/// (25|q| + 12 log p)/(p - 1) <= 2π sqrt(p), the near-c_∞ step.
inline ChainStep chain_near_infinity(u64 p, double abs_q = 0.005) {
  const double pd = static_cast<double>(p);
  return {(25.0 * abs_q + 12.0 * std::log(pd)) / (pd - 1.0), two_pi * std::sqrt(pd)};
}

/// 2πp/sqrt(p-1) + 6 p log p/(p-1) <= 2π sqrt(p) + 6 log p + 7, the near-c_0 step.
inline ChainStep chain_near_zero(u64 p) {
  const double pd = static_cast<double>(p);
  return {two_pi * pd / std::sqrt(pd - 1.0) + 6.0 * pd * std::log(pd) / (pd - 1.0),
          two_pi * std::sqrt(pd) + 6.0 * std::log(pd) + 7.0};
}

/// Largest L = log|1/q| allowed by ((p-1)/p) L <= 4π² p / L + 12 log p, i.e.
/// the positive root of L² - B L - A with A = 4π²p²/(p-1), B = 12 p log p/(p-1).
inline double near_zero_exact_root(u64 p) {
  const double pd = static_cast<double>(p), pi = std::numbers::pi;
  const double A = 4.0 * pi * pi * pd * pd / (pd - 1.0);
  const double B = 12.0 * pd * std::log(pd) / (pd - 1.0);
  return 0.5 * (B + std::sqrt(B * B + 4.0 * A));
}

}  // namespace qce
