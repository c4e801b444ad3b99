#pragma once

// Component group of the Néron model of J_0(p) over a base with ramification
// index e, from the dual-graph presentation, and the values of ρ on the
// candidate images g(P).
//
// Generators, in column order: Zbar, Cbar_s (s in S'), Ebar (if I = 1), Gbar (if R = 1).
// Relations (rows):
//   (Z)   -S Zbar + e I Ebar + 2e R Gbar
//   (Z')  I Ebar + R Gbar + sum_{s in S'} Cbar_s
//   (C_s) Zbar - e Cbar_s
//   (E)   Zbar - 2e Ebar
//   (G)   Zbar - 3e Gbar
// A chain component Cbar_{s,i} equals i Cbar_s, so only the first component of
// each chain is a generator.

#include <qce/arith.hpp>
#include <qce/smith.hpp>

#include <boost/rational.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qce {

struct SupersingularCounts {
  u64 p = 0;
  u64 S = 0;
  u64 S_prime = 0;
  int I = 0;  // j = 1728 supersingular (p ≡ 3 mod 4)
  int R = 0;  // j = 0 supersingular (p ≡ 2 mod 3)
};

inline void check_component_prime(u64 p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  if (p < 11 || p == 13) throw UnsupportedPrime("need p = 11 or p > 13, got " + std::to_string(p));
}

inline SupersingularCounts supersingular_counts(u64 p) {
  check_component_prime(p);
  SupersingularCounts c;
  c.p = p;
  c.I = p % 4 == 3 ? 1 : 0;
  c.R = p % 3 == 2 ? 1 : 0;
  // 12 S' + 6 I + 4 R = p - 1.
  const i64 twelve_s = static_cast<i64>(p) - 1 - 6 * c.I - 4 * c.R;
  if (twelve_s < 0 || twelve_s % 12 != 0) throw DomainError("mass formula has no integral solution");
  c.S_prime = static_cast<u64>(twelve_s / 12);
  c.S = c.S_prime + static_cast<u64>(c.I + c.R);
  return c;
}

/// Numerator of (p - 1)/12 in lowest terms.
inline u64 eisenstein_n(u64 p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  return (p - 1) / std::gcd(p - 1, u64{12});
}

struct GeneratorLayout {
  SupersingularCounts counts;
  std::size_t zbar = 0;
  std::size_t cbar_first = 1;  // Cbar_s for s = 0 .. S'-1
  std::optional<std::size_t> ebar, gbar;
  std::size_t size = 0;

  explicit GeneratorLayout(const SupersingularCounts& c) : counts(c) {
    std::size_t k = 1 + c.S_prime;
    if (c.I) ebar = k++;
    if (c.R) gbar = k++;
    size = k;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out{"Zbar"};
    for (u64 s = 0; s < counts.S_prime; ++s) out.push_back("Cbar_" + std::to_string(s + 1));
    if (ebar) out.push_back("Ebar");
    if (gbar) out.push_back("Gbar");
    return out;
  }
};

inline IntMatrix<CheckedInt64> relation_matrix_checked(const GeneratorLayout& L, u64 e) {
  const auto& c = L.counts;
  const std::size_t rows = 2 + c.S_prime + static_cast<std::size_t>(c.I + c.R);
  IntMatrix<CheckedInt64> M(rows, L.size);
  const i64 E = static_cast<i64>(e);
  std::size_t r = 0;
  // (Z)
  M(r, L.zbar) = -static_cast<i64>(c.S);
  if (L.ebar) M(r, *L.ebar) = E;
  if (L.gbar) M(r, *L.gbar) = 2 * E;
  ++r;
  // (Z')
  for (u64 s = 0; s < c.S_prime; ++s) M(r, L.cbar_first + s) = 1;
  if (L.ebar) M(r, *L.ebar) = 1;
  if (L.gbar) M(r, *L.gbar) = 1;
  ++r;
  for (u64 s = 0; s < c.S_prime; ++s, ++r) {
    M(r, L.zbar) = 1;
    M(r, L.cbar_first + s) = -E;
  }
  if (L.ebar) {
    M(r, L.zbar) = 1;
    M(r, *L.ebar) = -2 * E;
    ++r;
  }
  if (L.gbar) {
    M(r, L.zbar) = 1;
    M(r, *L.gbar) = -3 * E;
    ++r;
  }
  return M;
}

inline std::vector<std::vector<long long>> relation_matrix(u64 p, u64 e) {
  if (e < 1) throw DomainError("ramification index must be >= 1");
  const GeneratorLayout L(supersingular_counts(p));
  const auto M = relation_matrix_checked(L, e);
  std::vector<std::vector<long long>> out(M.rows, std::vector<long long>(M.cols));
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j) out[i][j] = M(i, j).get();
  return out;
}

/// An element of a finite abelian group in invariant-factor coordinates.
using GroupVector = std::vector<i64>;

/// Finite abelian group Z/d_1 x ... x Z/d_k, d_1 | ... | d_k, all d_i >= 2.
struct FiniteAbelianGroup {
  std::vector<i64> factors;

  GroupVector reduce(GroupVector v) const {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      v[i] %= factors[i];
      if (v[i] < 0) v[i] += factors[i];
    }
    return v;
  }
  GroupVector add(const GroupVector& a, const GroupVector& b) const {
    GroupVector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i] + b[i];
    return reduce(v);
  }
  GroupVector scale(i64 k, const GroupVector& a) const {
    GroupVector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      v[i] = static_cast<i64>(static_cast<i128>(k) * a[i] % factors[i]);
    return reduce(v);
  }
  GroupVector zero() const { return GroupVector(factors.size(), 0); }
  bool is_zero(const GroupVector& a) const {
    return std::all_of(a.begin(), a.end(), [](i64 x) { return x == 0; });
  }
  i64 order_of(const GroupVector& a) const {
    i64 ord = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const i64 d = factors[i];
      ord = std::lcm(ord, d / std::gcd(a[i], d));
    }
    return ord;
  }

  /// k in [0, ord(z)) with k z = x, if x lies in the cyclic subgroup <z>.
  std::optional<i64> discrete_log(const GroupVector& z, const GroupVector& x) const {
    // Solve k z_i = x_i mod d_i for each coordinate and merge by CRT.
    i64 k = 0, mod = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const i64 d = factors[i];
      const i64 g = std::gcd(z[i], d);
      if (x[i] % g != 0) return std::nullopt;
      const i64 m = d / g;
      const i64 r = m == 1 ? 0
                           : static_cast<i64>(static_cast<i128>(x[i] / g) *
                                              static_cast<i128>(mod_inverse(z[i] / g, m)) % m);
      // Merge k ≡ k (mod mod) with k ≡ r (mod m).
      const i64 g2 = std::gcd(mod, m);
      if ((r - k) % g2 != 0) return std::nullopt;
      const i64 l = mod / g2 * m;
      const i64 m2 = m / g2;
      const i64 t = m2 == 1 ? 0
                            : static_cast<i64>(static_cast<i128>(mod_reduce((r - k) / g2, static_cast<u64>(m2))) *
                                               static_cast<i128>(mod_inverse(mod / g2, m2)) % m2);
      k = static_cast<i64>(mod_reduce(static_cast<i64>(k + static_cast<i128>(mod) * t), static_cast<u64>(l)));
      mod = l;
    }
    return k;
  }
};

struct ComponentGroup {
  u64 p = 0, e = 1, n = 0;
  SupersingularCounts counts;
  FiniteAbelianGroup group;
  std::vector<std::string> generator_names;
  std::map<std::string, GroupVector> generator_images;
  std::vector<i64> expected_factors;  // invariant factors of Z/(ne) x (Z/e)^{S-2}
  bool matches_closed_form = false;
  bool zbar_order_is_n = false;
  bool e_phi_in_zbar = false;   // e * (every generator) lies in <Zbar>
  bool chain_sum_zero = false;  // sum over all supersingular chains of Cbar_s vanishes
  bool chain_values_ok = false; // e Cbar_s = Zbar, 2e Ebar = Zbar, 3e Gbar = Zbar
};

/// Invariant factors of Z/(ne) x (Z/e)^{S-2} with trivial factors dropped.
inline std::vector<i64> closed_form_factors(u64 n, u64 e, u64 S) {
  std::vector<i64> f;
  if (e > 1)
    for (u64 i = 0; i + 2 < S; ++i) f.push_back(static_cast<i64>(e));
  if (n * e > 1) f.push_back(static_cast<i64>(n * e));
  return f;
}

namespace detail {

struct GroupAndProbes {
  FiniteAbelianGroup group;
  std::vector<GroupVector> images;
};

inline GroupAndProbes presentation_cokernel(const IntMatrix<CheckedInt64>& M,
                                            const IntMatrix<CheckedInt64>& probes) {
  const Cokernel ck = cokernel(M, probes);
  GroupAndProbes out;
  for (const auto& d : ck.invariant_factors) {
    if (d == 0) throw DomainError("presentation has a free part");
    out.group.factors.push_back(static_cast<i64>(d));
  }
  for (const auto& v : ck.probe_images) {
    GroupVector g;
    for (const auto& x : v) g.push_back(static_cast<i64>(x));
    out.images.push_back(std::move(g));
  }
  return out;
}

}  // namespace detail

inline ComponentGroup component_group(u64 p, u64 e) {
  if (e < 1) throw DomainError("ramification index must be >= 1");
  const GeneratorLayout L(supersingular_counts(p));
  ComponentGroup cg;
  cg.p = p;
  cg.e = e;
  cg.n = eisenstein_n(p);
  cg.counts = L.counts;
  cg.generator_names = L.names();
  const auto M = relation_matrix_checked(L, e);
  const auto res = detail::presentation_cokernel(M, IntMatrix<CheckedInt64>::identity(L.size));
  cg.group = res.group;
  for (std::size_t j = 0; j < L.size; ++j) cg.generator_images[cg.generator_names[j]] = res.images[j];

  const auto& G = cg.group;
  cg.expected_factors = closed_form_factors(cg.n, e, L.counts.S);
  cg.matches_closed_form = G.factors == cg.expected_factors;
  const GroupVector& z = res.images[L.zbar];
  cg.zbar_order_is_n = G.order_of(z) == static_cast<i64>(cg.n);
  cg.e_phi_in_zbar = std::all_of(res.images.begin(), res.images.end(), [&](const GroupVector& v) {
    return G.discrete_log(z, G.scale(static_cast<i64>(e), v)).has_value();
  });
  GroupVector sum = G.zero();
  for (std::size_t j = 1; j < L.size; ++j) sum = G.add(sum, res.images[j]);
  cg.chain_sum_zero = G.is_zero(sum);
  bool ok = true;
  const i64 E = static_cast<i64>(e);
  for (u64 s = 0; s < L.counts.S_prime; ++s) ok = ok && G.scale(E, res.images[L.cbar_first + s]) == z;
  if (L.ebar) ok = ok && G.scale(2 * E, res.images[*L.ebar]) == z;
  if (L.gbar) ok = ok && G.scale(3 * E, res.images[*L.gbar]) == z;
  cg.chain_values_ok = ok;
  return cg;
}

using Rational = boost::rational<i64>;

struct RhoCandidate {
  std::string label;   // e.g. "2Gbar_1"
  Rational value;      // formal value relative to Zbar
  i64 log = 0;         // k with element = k Zbar in the computed group
  bool consistent = false;  // b k ≡ a (mod n) for value = a/b
};

struct RhoValueSet {
  u64 p = 0, e = 1, n = 0;
  u64 p_class = 0;  // p mod 12
  std::vector<Rational> values;  // sorted, distinct
  std::vector<RhoCandidate> candidates;
  bool all_consistent = true;
};

namespace detail {

/// Candidate images of g(P) and their ρ-values, computed inside the group.
inline RhoValueSet rho_candidates(u64 p, u64 e) {
  check_component_prime(p);
  if (e != 1 && e != 2) throw UnsupportedRamification("ρ-values are tabulated for e = 1, 2 only");
  const GeneratorLayout L(supersingular_counts(p));
  const auto M = relation_matrix_checked(L, e);
  // Probes: Zbar, Cbar_1 (if any), Ebar, Gbar.
  std::vector<std::size_t> cols{L.zbar};
  std::optional<std::size_t> pc, pe, pg;
  if (L.counts.S_prime > 0) pc = cols.size(), cols.push_back(L.cbar_first);
  if (L.ebar) pe = cols.size(), cols.push_back(*L.ebar);
  if (L.gbar) pg = cols.size(), cols.push_back(*L.gbar);
  IntMatrix<CheckedInt64> probes(cols.size(), L.size);
  for (std::size_t k = 0; k < cols.size(); ++k) probes(k, cols[k]) = 1;
  const auto res = presentation_cokernel(M, probes);
  const auto& G = res.group;
  const GroupVector& z = res.images[0];

  RhoValueSet out;
  out.p = p;
  out.e = e;
  out.n = eisenstein_n(p);
  out.p_class = p % 12;
  const i64 n = static_cast<i64>(out.n);
  auto add = [&](const std::string& label, const GroupVector& x, Rational v) {
    RhoCandidate c;
    c.label = label;
    c.value = v;
    const auto k = G.discrete_log(z, x);
    if (k) {
      c.log = *k;
      // value a/b: b k ≡ a (mod n).
      c.consistent = mod_reduce(static_cast<i64>(static_cast<i128>(v.denominator()) * *k - v.numerator()),
                                static_cast<u64>(n)) == 0;
    }
    out.all_consistent = out.all_consistent && c.consistent;
    out.candidates.push_back(c);
  };
  const i64 E = static_cast<i64>(e);
  add("2Zbar'", G.zero(), Rational(0));
  add("2Zbar", G.scale(2, z), Rational(2));
  if (e == 1) {
    if (pe) add("2Ebar", G.scale(2, res.images[*pe]), Rational(1));
    if (pg) {
      add("2Gbar", G.scale(2, res.images[*pg]), Rational(2, 3));
      add("4Gbar", G.scale(4, res.images[*pg]), Rational(4, 3));
      add("3Gbar", G.scale(3, res.images[*pg]), Rational(1));
    }
  } else {
    // Ebar_i = i Ebar, Gbar_i = i Gbar, Cbar_{s,i} = i Cbar_s; e Ebar_i = i/2, e Gbar_i = i/3.
    if (pe) {
      for (i64 i = 1; i <= 3; ++i)
        add("2Ebar_" + std::to_string(i), G.scale(2 * i, res.images[*pe]), Rational(2 * i, 2 * E));
      add("Ebar_1+Ebar_3", G.scale(4, res.images[*pe]), Rational(4, 2 * E));
    }
    if (pg)
      for (i64 i = 1; i <= 5; ++i)
        add("2Gbar_" + std::to_string(i), G.scale(2 * i, res.images[*pg]), Rational(2 * i, 3 * E));
    if (pc) add("2Cbar_s,1", G.scale(2, res.images[*pc]), Rational(2, E));
  }
  std::set<Rational> vals;
  for (const auto& c : out.candidates) vals.insert(c.value);
  out.values.assign(vals.begin(), vals.end());
  return out;
}

}  // namespace detail

inline RhoValueSet rho_value_set(u64 p, u64 e) { return detail::rho_candidates(p, e); }

struct TwoTorsionReport {
  bool obstruction = false;      // n even and n/2 attained for e = 1 or 2 (group computation)
  bool rational_rule = false;    // same decision from the rational values alone
  std::vector<std::string> hits; // candidates equal to (n/2) Zbar
};

/// Whether some candidate ρ-value equals the 2-torsion point n/2 of Z/n.
inline TwoTorsionReport two_torsion_report(u64 p) {
  check_component_prime(p);
  TwoTorsionReport rep;
  const u64 n = eisenstein_n(p);
  if (n % 2 != 0) return rep;
  const i64 half = static_cast<i64>(n / 2);
  for (u64 e : {1u, 2u}) {
    const auto rs = detail::rho_candidates(p, e);
    for (const auto& c : rs.candidates) {
      if (c.log == half) {
        rep.obstruction = true;
        rep.hits.push_back(c.label + " (e=" + std::to_string(e) + ")");
      }
      // a/b ≡ n/2 (mod n) with b invertible mod n.
      const i64 a = c.value.numerator(), b = c.value.denominator();
      if (std::gcd(b, static_cast<i64>(n)) == 1) {
        const u64 v = mulmod(mod_reduce(a, n), mod_inverse(b, static_cast<i64>(n)), n);
        if (v == static_cast<u64>(half)) rep.rational_rule = true;
      }
    }
  }
  return rep;
}

inline bool two_torsion_obstruction(u64 p) { return two_torsion_report(p).obstruction; }

}  // namespace qce
