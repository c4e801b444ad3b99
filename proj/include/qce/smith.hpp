#pragma once

// Smith normal form over Z, generic in the integer type.
//
// The elimination keeps M dense but only touches the nonzero pattern of the
// pivot row and column, and picks pivots in the sparsest remaining row, which
// keeps fill-in small on graph-Laplacian-like presentations. Column operations
// can be replayed on a set of probe row vectors v (giving v·R) instead of the
// full right transform.
//
// Int = CheckedInt64 raises on overflow; smith_normal_form / cokernel retry with
// boost::multiprecision::cpp_int in that case, so results are always exact.

#include <qce/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <type_traits>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qce {

using BigInt = boost::multiprecision::cpp_int;

class IntegerOverflow : public std::overflow_error {
 public:
  IntegerOverflow() : std::overflow_error("int64 overflow in exact arithmetic") {}
};

/// int64 that throws IntegerOverflow instead of wrapping.
class CheckedInt64 {
 public:
  constexpr CheckedInt64(std::int64_t v = 0) : v_(v) {}
  constexpr std::int64_t get() const { return v_; }

  friend CheckedInt64 operator+(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw IntegerOverflow();
    return r;
  }
  friend CheckedInt64 operator-(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw IntegerOverflow();
    return r;
  }
  friend CheckedInt64 operator*(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw IntegerOverflow();
    return r;
  }
  friend CheckedInt64 operator/(CheckedInt64 a, CheckedInt64 b) {
    if (a.v_ == std::numeric_limits<std::int64_t>::min() && b.v_ == -1) throw IntegerOverflow();
    return a.v_ / b.v_;
  }
  friend CheckedInt64 operator%(CheckedInt64 a, CheckedInt64 b) {
    if (b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  CheckedInt64 operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) throw IntegerOverflow();
    return -v_;
  }
  CheckedInt64& operator+=(CheckedInt64 b) { return *this = *this + b; }
  CheckedInt64& operator-=(CheckedInt64 b) { return *this = *this - b; }
  CheckedInt64& operator*=(CheckedInt64 b) { return *this = *this * b; }
  friend auto operator<=>(CheckedInt64, CheckedInt64) = default;
  friend bool operator==(CheckedInt64, CheckedInt64) = default;

 private:
  std::int64_t v_;
};

inline CheckedInt64 int_abs(CheckedInt64 a) { return a < 0 ? -a : a; }
inline BigInt int_abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }
inline BigInt to_big(CheckedInt64 a) { return BigInt(a.get()); }
inline BigInt to_big(const BigInt& a) { return a; }

/// Extended gcd: s a + t b = g >= 0.
template <class Int>
Int ext_gcd(Int a, Int b, Int& s, Int& t) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    const Int q = a / b;
    Int r = a - q * b;
    a = b;
    b = r;
    Int ns = s0 - q * s1;
    s0 = s1;
    s1 = ns;
    Int nt = t0 - q * t1;
    t0 = t1;
    t1 = nt;
  }
  if (a < 0) {
    a = -a;
    s0 = -s0;
    t0 = -t0;
  }
  s = s0;
  t = t0;
  return a;
}

/// Dense row-major integer matrix.
template <class Int>
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Int(0)) {}

  Int& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

template <class To, class From>
IntMatrix<To> convert_matrix(const IntMatrix<From>& m) {
  IntMatrix<To> out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    if constexpr (std::is_same_v<From, CheckedInt64>)
      out.data[i] = To(m.data[i].get());
    else if constexpr (std::is_same_v<To, CheckedInt64>) {
      if (m.data[i] > std::numeric_limits<std::int64_t>::max() || m.data[i] < std::numeric_limits<std::int64_t>::min())
        throw IntegerOverflow();
      out.data[i] = To(static_cast<std::int64_t>(m.data[i]));
    }
    else
      out.data[i] = To(m.data[i]);
  }
  return out;
}

template <class Int>
struct SmithResult {
  std::vector<Int> diagonal;  // min(rows, cols) entries, d1 | d2 | ..., zeros last
  IntMatrix<Int> left;        // rows x rows, unimodular (empty unless requested)
  IntMatrix<Int> right;       // cols x cols, unimodular (empty unless requested)
};

template <class Int>
class SmithEngine {
 public:
  /// probes: k x cols matrix whose rows are carried along as v -> v·R.
  SmithEngine(IntMatrix<Int> M, bool track_left, IntMatrix<Int> probes)
      : M_(std::move(M)), P_(std::move(probes)), track_left_(track_left) {
    if (track_left_) L_ = IntMatrix<Int>::identity(M_.rows);
    row_nnz_.assign(M_.rows, 0);
    col_nnz_.assign(M_.cols, 0);
    for (std::size_t i = 0; i < M_.rows; ++i)
      for (std::size_t j = 0; j < M_.cols; ++j)
        if (M_(i, j) != 0) ++row_nnz_[i], ++col_nnz_[j];
    row_active_.assign(M_.rows, true);
    col_active_.assign(M_.cols, true);
  }

  void run() {
    for (;;) {
      std::size_t pr, pc;
      if (!choose_pivot(pr, pc)) break;
      eliminate(pr, pc);
    }
    fix_divisibility();
  }

  /// Pivot positions in final order (ascending divisibility).
  struct Pivot {
    std::size_t row, col;
    Int value;
  };
  const std::vector<Pivot>& pivots() const { return pivots_; }
  const IntMatrix<Int>& probes() const { return P_; }
  const IntMatrix<Int>& left() const { return L_; }
  const std::vector<bool>& col_active() const { return col_active_; }
  const std::vector<bool>& row_active() const { return row_active_; }

 private:
  void set(std::size_t i, std::size_t j, const Int& v) {
    Int& cell = M_(i, j);
    const bool was = cell != 0, now = v != 0;
    cell = v;
    if (was != now) {
      const int d = now ? 1 : -1;
      row_nnz_[i] += d;
      col_nnz_[j] += d;
    }
  }

  bool choose_pivot(std::size_t& pr, std::size_t& pc) {
    std::size_t best_row = M_.rows;
    std::size_t best_nnz = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < M_.rows; ++i)
      if (row_active_[i] && row_nnz_[i] > 0 && row_nnz_[i] < best_nnz) {
        best_nnz = row_nnz_[i];
        best_row = i;
      }
    if (best_row == M_.rows) return false;
    pr = best_row;
    pc = M_.cols;
    Int best_abs = 0;
    std::size_t best_col_nnz = 0;
    for (std::size_t j = 0; j < M_.cols; ++j) {
      if (!col_active_[j] || M_(pr, j) == 0) continue;
      const Int a = int_abs(M_(pr, j));
      if (pc == M_.cols || a < best_abs || (a == best_abs && col_nnz_[j] < best_col_nnz)) {
        pc = j;
        best_abs = a;
        best_col_nnz = col_nnz_[j];
      }
    }
    return true;
  }

  void row_op(std::size_t target, std::size_t src, const Int& q, const std::vector<std::size_t>& src_cols) {
    // row_target -= q * row_src
    for (std::size_t j : src_cols) set(target, j, M_(target, j) - q * M_(src, j));
    if (track_left_)
      for (std::size_t j = 0; j < L_.cols; ++j)
        if (L_(src, j) != 0) L_(target, j) -= q * L_(src, j);
  }

  void col_op(std::size_t target, std::size_t src, const Int& q, const std::vector<std::size_t>& src_rows) {
    // col_target -= q * col_src
    for (std::size_t i : src_rows) set(i, target, M_(i, target) - q * M_(i, src));
    for (std::size_t k = 0; k < P_.rows; ++k)
      if (P_(k, src) != 0) P_(k, target) -= q * P_(k, src);
  }

  std::vector<std::size_t> row_support(std::size_t r) const {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < M_.cols; ++j)
      if (col_active_[j] && M_(r, j) != 0) s.push_back(j);
    return s;
  }

  std::vector<std::size_t> col_support(std::size_t c) const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < M_.rows; ++i)
      if (row_active_[i] && M_(i, c) != 0) s.push_back(i);
    return s;
  }

  void eliminate(std::size_t pr, std::size_t pc) {
    for (;;) {
      bool changed = false;
      // Clear the pivot column with row operations.
      {
        const auto rows = col_support(pc);
        const auto src_cols = row_support(pr);
        for (std::size_t i : rows) {
          if (i == pr) continue;
          const Int q = M_(i, pc) / M_(pr, pc);
          if (q != 0) row_op(i, pr, q, src_cols);
        }
      }
      // Clear the pivot row with column operations.
      {
        const auto cols = row_support(pr);
        const auto src_rows = col_support(pc);
        for (std::size_t j : cols) {
          if (j == pc) continue;
          const Int q = M_(pr, j) / M_(pr, pc);
          if (q != 0) col_op(j, pc, q, src_rows);
        }
      }
      // Any remainder left smaller than the pivot becomes the new pivot.
      std::size_t nr = pr, nc = pc;
      Int best = int_abs(M_(pr, pc));
      for (std::size_t i : col_support(pc))
        if (i != pr && int_abs(M_(i, pc)) < best) best = int_abs(M_(i, pc)), nr = i, nc = pc;
      for (std::size_t j : row_support(pr))
        if (j != pc && int_abs(M_(pr, j)) < best) best = int_abs(M_(pr, j)), nr = pr, nc = j;
      if (nr != pr || nc != pc) {
        pr = nr;
        pc = nc;
        changed = true;
      }
      if (!changed) {
        bool clean = true;
        for (std::size_t i : col_support(pc))
          if (i != pr) clean = false;
        for (std::size_t j : row_support(pr))
          if (j != pc) clean = false;
        if (clean) break;
      }
    }
    pivots_.push_back({pr, pc, M_(pr, pc)});
    row_active_[pr] = false;
    col_active_[pc] = false;
  }

  void fix_divisibility() {
    std::stable_sort(pivots_.begin(), pivots_.end(),
                     [](const Pivot& a, const Pivot& b) { return int_abs(a.value) < int_abs(b.value); });
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      for (std::size_t j = i + 1; j < pivots_.size(); ++j) {
        Pivot& A = pivots_[i];
        Pivot& B = pivots_[j];
        if (B.value % A.value == 0) continue;
        const Int a = A.value, b = B.value;
        Int s, t;
        const Int g = ext_gcd(a, b, s, t);
        // Right transform on columns (A.col, B.col): [[1, -t b/g], [1, s a/g]].
        const Int bg = b / g, ag = a / g;
        for (std::size_t k = 0; k < P_.rows; ++k) {
          const Int x = P_(k, A.col), y = P_(k, B.col);
          P_(k, A.col) = x + y;
          P_(k, B.col) = -(t * bg) * x + (s * ag) * y;
        }
        if (track_left_)
          for (std::size_t k = 0; k < L_.cols; ++k) {
            const Int x = L_(A.row, k), y = L_(B.row, k);
            L_(A.row, k) = s * x + t * y;
            L_(B.row, k) = -bg * x + ag * y;
          }
        A.value = g;
        B.value = ag * b;
      }
    }
    // Nonnegative diagonal: flip the pivot column sign where needed.
    for (auto& pv : pivots_)
      if (pv.value < 0) {
        pv.value = -pv.value;
        for (std::size_t k = 0; k < P_.rows; ++k) P_(k, pv.col) = -P_(k, pv.col);
      }
  }

  IntMatrix<Int> M_, P_, L_;
  bool track_left_;
  std::vector<std::size_t> row_nnz_, col_nnz_;
  std::vector<bool> row_active_, col_active_;
  std::vector<Pivot> pivots_;
};

namespace detail {

template <class Int>
SmithResult<Int> smith_impl(const IntMatrix<Int>& M) {
  SmithEngine<Int> eng(M, true, IntMatrix<Int>::identity(M.cols));
  eng.run();
  const auto& piv = eng.pivots();
  // Row order: pivot rows in diagonal order, then the rest; same for columns.
  std::vector<std::size_t> row_order, col_order;
  for (const auto& p : piv) row_order.push_back(p.row), col_order.push_back(p.col);
  for (std::size_t i = 0; i < M.rows; ++i)
    if (eng.row_active()[i]) row_order.push_back(i);
  for (std::size_t j = 0; j < M.cols; ++j)
    if (eng.col_active()[j]) col_order.push_back(j);
  SmithResult<Int> res;
  res.left = IntMatrix<Int>(M.rows, M.rows);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t k = 0; k < M.rows; ++k) res.left(i, k) = eng.left()(row_order[i], k);
  res.right = IntMatrix<Int>(M.cols, M.cols);
  for (std::size_t k = 0; k < M.cols; ++k)
    for (std::size_t j = 0; j < M.cols; ++j) res.right(k, j) = eng.probes()(k, col_order[j]);
  const std::size_t n = std::min(M.rows, M.cols);
  res.diagonal.assign(n, Int(0));
  for (std::size_t i = 0; i < piv.size(); ++i) res.diagonal[i] = piv[i].value;
  return res;
}

}  // namespace detail

/// Smith normal form with both transforms: left · M · right = diag(d).
inline SmithResult<BigInt> smith_normal_form(const IntMatrix<BigInt>& M) {
  try {
    const auto r = detail::smith_impl(convert_matrix<CheckedInt64>(M));
    SmithResult<BigInt> out;
    for (const auto& d : r.diagonal) out.diagonal.push_back(to_big(d));
    out.left = convert_matrix<BigInt>(r.left);
    out.right = convert_matrix<BigInt>(r.right);
    return out;
  } catch (const IntegerOverflow&) {
    return detail::smith_impl(M);
  }
}

inline SmithResult<BigInt> smith_normal_form(const std::vector<std::vector<long long>>& rows) {
  const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
  IntMatrix<BigInt> M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = rows[i][j];
  return smith_normal_form(M);
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
inline BigInt determinant(IntMatrix<BigInt> A) {
  const std::size_t n = A.rows;
  if (A.cols != n) throw DomainError("determinant of a non-square matrix");
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && A(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / prev;
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

/// Finite abelian group Z^g / rowspace(M) with coordinates of probe vectors.
struct Cokernel {
  std::vector<BigInt> invariant_factors;           // nontrivial, d1 | d2 | ...; 0 = free factor
  std::vector<std::vector<BigInt>> probe_images;   // one coordinate vector per probe
};

namespace detail {

template <class Int>
Cokernel cokernel_impl(const IntMatrix<Int>& M, const IntMatrix<Int>& probes) {
  SmithEngine<Int> eng(M, false, probes);
  eng.run();
  std::vector<std::size_t> coords;
  Cokernel out;
  for (const auto& p : eng.pivots())
    if (int_abs(p.value) != 1) {
      coords.push_back(p.col);
      out.invariant_factors.push_back(to_big(p.value));
    }
  for (std::size_t j = 0; j < M.cols; ++j)
    if (eng.col_active()[j]) {
      coords.push_back(j);
      out.invariant_factors.push_back(0);
    }
  for (std::size_t k = 0; k < probes.rows; ++k) {
    std::vector<BigInt> v;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      BigInt x = to_big(eng.probes()(k, coords[i]));
      const BigInt& d = out.invariant_factors[i];
      if (d != 0) {
        x %= d;
        if (x < 0) x += d;
      }
      v.push_back(x);
    }
    out.probe_images.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

inline Cokernel cokernel(const IntMatrix<CheckedInt64>& M, const IntMatrix<CheckedInt64>& probes) {
  try {
    return detail::cokernel_impl(M, probes);
  } catch (const IntegerOverflow&) {
    return detail::cokernel_impl(convert_matrix<BigInt>(M), convert_matrix<BigInt>(probes));
  }
}

}  // namespace qce
