#pragma once

// Whole-row Kloosterman tables built with one FFT per (prime power, content).
//
// For q = p^a and g | q, T_{q,g}[r] = S(g, r; q) for every residue r. The row is
// the DFT of u -> e(g ubar / q) over the units u mod q. Any S(a, r; q) reduces to
// a table lookup: writing a = g w with g = gcd(a, q) and w a unit,
//   S(g w, r; q) = S(g, r w; q).

#include <qce/arith.hpp>

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace qce {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// S(g, r; q) for all r in [0, q), q a prime power (or 1), g | q.
inline std::vector<double> kloosterman_row(u64 q, u64 g) {
  if (q == 1) return {1.0};
  const int len = static_cast<int>(q);
  fftw_complex* buf = fftw_alloc_complex(q);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  const u64 gq = g % q;
  for (u64 u = 0; u < q; ++u) {
    buf[u][0] = 0.0;
    buf[u][1] = 0.0;
    if (std::gcd(u, q) != 1) continue;
    const u64 ubar = mod_inverse(static_cast<i64>(u), static_cast<i64>(q));
    const auto z = unit_root(mulmod(gq, ubar, q), q);
    buf[u][0] = z.real();
    buf[u][1] = z.imag();
  }
  fftw_execute(plan);
  std::vector<double> row(q);
  for (u64 r = 0; r < q; ++r) row[r] = buf[r][0];
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return row;
}

/// Cache of Kloosterman rows. Rows with q <= cache_limit are kept; larger rows
/// are rebuilt on demand (they are needed by few moduli). Not thread-safe:
/// give each worker its own cache.
class KloostermanTableCache {
 public:
  explicit KloostermanTableCache(u64 cache_limit = 20000) : cache_limit_(cache_limit) {}

  std::shared_ptr<const std::vector<double>> row(u64 q, u64 g) {
    if (q > cache_limit_) return std::make_shared<const std::vector<double>>(kloosterman_row(q, g));
    auto& slot = rows_[{q, g}];
    if (!slot) slot = std::make_shared<const std::vector<double>>(kloosterman_row(q, g));
    return slot;
  }

  void clear() { rows_.clear(); }

 private:
  u64 cache_limit_;
  std::map<std::pair<u64, u64>, std::shared_ptr<const std::vector<double>>> rows_;
};

/// Iterates n -> S(a, n; c) for n = n0, n0+1, ... using per-prime-power tables
/// and running indices; every step is ω(c) lookups and multiplications.
class KloostermanStream {
 public:
  KloostermanStream(KloostermanTableCache& cache, i64 a, u64 c, u64 n0 = 1) {
    for (const auto& f : factorize(c)) {
      const u64 q = f.q, rest = c / q;
      const u64 rbar = mod_inverse(static_cast<i64>(rest % q), static_cast<i64>(q));
      const u64 aq = mulmod(mod_reduce(a, q), mulmod(rbar, rbar, q), q);
      const u64 g = aq == 0 ? q : std::gcd(aq, q);
      const u64 w = aq == 0 ? 1 : (aq / g) % q;
      Factor fac;
      fac.table = cache.row(q, g);
      fac.q = q;
      fac.step = w % q;
      fac.idx = mulmod(n0 % q, fac.step, q);
      factors_.push_back(std::move(fac));
    }
  }

  /// S(a, n; c) at the current n.
  double value() const {
    double v = 1.0;
    for (const auto& f : factors_) v *= (*f.table)[f.idx];
    return v;
  }

  void advance() {
    for (auto& f : factors_) {
      f.idx += f.step;
      if (f.idx >= f.q) f.idx -= f.q;
    }
  }

 private:
  struct Factor {
    std::shared_ptr<const std::vector<double>> table;
    u64 q = 1, step = 0, idx = 0;
  };
  std::vector<Factor> factors_;
};

/// Kloosterman sum through cached FFT rows; agrees with kloosterman_direct.
inline double kloosterman_tabulated(KloostermanTableCache& cache, i64 m, i64 n, u64 c) {
  KloostermanStream s(cache, m, c, mod_reduce(n, c));
  return s.value();
}

}  // namespace qce
