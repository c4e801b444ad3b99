#pragma once

// Bessel function of the first kind of order one.
// x <= 12: alternating power series.
// x > 12: Hankel asymptotic expansion with amplitude P and phase correction Q.

#include <qce/errors.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace qce {

inline constexpr double bessel_series_cutoff = 12.0;

inline double bessel_j1_series(double x) {
  // J1(x) = sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!)
  const double h = 0.5 * x, h2 = h * h;
  double term = h, sum = h;
  for (int k = 1; k < 80; ++k) {
    term *= -h2 / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

inline double bessel_j1_asymptotic(double x) {
  // J1(x) ~ sqrt(2/(πx)) (P cos χ - Q sin χ), χ = x - 3π/4, μ = 4.
  constexpr double mu = 4.0;
  const double z8 = 8.0 * x;
  double P = 1.0, Q = 0.0;
  double term = 1.0;  // a_k(1) / z8^k
  double prev = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double odd = static_cast<double>(2 * k - 1);
    term *= (mu - odd * odd) / (static_cast<double>(k) * z8);
    if (std::abs(term) > prev) break;  // asymptotic series started diverging
    prev = std::abs(term);
    // k odd -> Q, k even -> P, signs alternate in pairs.
    if (k % 2 == 1)
      Q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    else
      P += ((k / 2) % 2 == 1 ? -1.0 : 1.0) * term;
    if (prev < 1e-17) break;
  }
  const double chi = x - 0.75 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

inline double bessel_j1(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j1 requires x >= 0, got " + std::to_string(x));
  return x <= bessel_series_cutoff ? bessel_j1_series(x) : bessel_j1_asymptotic(x);
}

}  // namespace qce
