#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "robust/types.hpp"

namespace robust {

// int64 with overflow-checked ring operations. Kernels run on this scalar
// first; an Int64Overflow throw makes the caller rerun on Bigint.
struct CheckedI64 {
  std::int64_t v = 0;

  CheckedI64() = default;
  CheckedI64(long long x) : v(x) {}
  CheckedI64(long x) : v(x) {}
  CheckedI64(int x) : v(x) {}

  friend CheckedI64 operator+(CheckedI64 a, CheckedI64 b) {
    long long r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw Int64Overflow{};
    return r;
  }
  friend CheckedI64 operator-(CheckedI64 a, CheckedI64 b) {
    long long r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw Int64Overflow{};
    return r;
  }
  friend CheckedI64 operator*(CheckedI64 a, CheckedI64 b) {
    long long r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw Int64Overflow{};
    return r;
  }
  friend CheckedI64 operator/(CheckedI64 a, CheckedI64 b) {
    if (b.v == -1) return CheckedI64(0) - a;  // INT64_MIN / -1 trap
    return a.v / b.v;
  }
  CheckedI64 operator-() const { return CheckedI64(0) - *this; }
  CheckedI64& operator+=(CheckedI64 o) { return *this = *this + o; }
  CheckedI64& operator-=(CheckedI64 o) { return *this = *this - o; }
  CheckedI64& operator*=(CheckedI64 o) { return *this = *this * o; }

  friend bool operator==(CheckedI64 a, CheckedI64 b) { return a.v == b.v; }
  friend bool operator!=(CheckedI64 a, CheckedI64 b) { return a.v != b.v; }
  friend bool operator<(CheckedI64 a, CheckedI64 b) { return a.v < b.v; }
  friend bool operator>(CheckedI64 a, CheckedI64 b) { return a.v > b.v; }

  friend CheckedI64 gcd_of(CheckedI64 a, CheckedI64 b) {
    return std::gcd(a.v, b.v);
  }
};

inline Bigint gcd_of(const Bigint& a, const Bigint& b) { return gcd(a, b); }

// __int128 tier: same contract as CheckedI64, one escalation step below Bigint.
struct Checked128 {
  __int128 v = 0;

  Checked128() = default;
  Checked128(long long x) : v(x) {}
  Checked128(long x) : v(x) {}
  Checked128(int x) : v(x) {}
  explicit Checked128(__int128 x) : v(x) {}

  friend Checked128 operator+(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw Int64Overflow{};
    return Checked128(r);
  }
  friend Checked128 operator-(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw Int64Overflow{};
    return Checked128(r);
  }
  friend Checked128 operator*(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw Int64Overflow{};
    return Checked128(r);
  }
  friend Checked128 operator/(Checked128 a, Checked128 b) { return Checked128(a.v / b.v); }
  Checked128 operator-() const { return Checked128(-v); }
  Checked128& operator+=(const Checked128& o) { return *this = *this + o; }
  Checked128& operator-=(const Checked128& o) { return *this = *this - o; }
  Checked128& operator*=(const Checked128& o) { return *this = *this * o; }

  friend bool operator==(Checked128 a, Checked128 b) { return a.v == b.v; }
  friend bool operator!=(Checked128 a, Checked128 b) { return a.v != b.v; }
  friend bool operator<(Checked128 a, Checked128 b) { return a.v < b.v; }
  friend bool operator>(Checked128 a, Checked128 b) { return a.v > b.v; }

  friend Checked128 gcd_of(Checked128 a, Checked128 b) {
    __int128 x = a.v < 0 ? -a.v : a.v;
    __int128 y = b.v < 0 ? -b.v : b.v;
    while (y != 0) {
      const __int128 t = x % y;
      x = y;
      y = t;
    }
    return Checked128(x);
  }
};

inline Bigint to_big_scalar(CheckedI64 x) { return Bigint(x.v); }
inline Bigint to_big_scalar(const Checked128& x) {
  return Bigint(bmp::cpp_int(x.v));
}
inline Bigint to_big_scalar(const Bigint& x) { return x; }

// Flat row-major working matrix for the elimination kernels.
template <class S>
struct FlatMat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  FlatMat() = default;
  FlatMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, S(0)) {}

  S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

inline FlatMat<CheckedI64> flat_i64(const MatZ& m) {
  FlatMat<CheckedI64> f(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < f.rows; ++i)
    for (int j = 0; j < f.cols; ++j) {
      if (!m(i, j).fits_int64()) throw Int64Overflow{};
      f(i, j) = m(i, j).to_int64();
    }
  return f;
}

inline FlatMat<Bigint> flat_big(const MatZ& m) {
  FlatMat<Bigint> f(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < f.rows; ++i)
    for (int j = 0; j < f.cols; ++j) f(i, j) = m(i, j);
  return f;
}

template <class S>
FlatMat<S> flat_as(const MatZ& m) {
  if constexpr (std::is_same_v<S, Bigint>) {
    return flat_big(m);
  } else {
    FlatMat<S> f(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < f.rows; ++i)
      for (int j = 0; j < f.cols; ++j) {
        if (!m(i, j).fits_int64()) throw Int64Overflow{};
        f(i, j) = S(m(i, j).to_int64());
      }
    return f;
  }
}

template <class S>
struct EchelonResult {
  int rank = 0;
  int sign = 1;                 // parity of row swaps
  std::vector<int> pivot_cols;  // increasing
  S last_pivot = S(1);          // k-th pivot = k-th leading minor (pivot rows/cols)
};

// Fraction-free (Bareiss) row echelon, in place. Columns are processed left to
// right; zero-pivot columns are skipped, so rank-deficient input is fine and
// every intermediate entry stays a minor of the original matrix.
template <class S>
EchelonResult<S> bareiss_echelon(FlatMat<S>& m) {
  EchelonResult<S> res;
  S prev = S(1);
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int pr = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c) != S(0)) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(pr, j), m(r, j));
      res.sign = -res.sign;
    }
    const S pivot = m(r, c);
    for (int i = r + 1; i < m.rows; ++i) {
      const S factor = m(i, c);
      for (int j = c + 1; j < m.cols; ++j)
        m(i, j) = (pivot * m(i, j) - factor * m(r, j)) / prev;
      m(i, c) = S(0);
    }
    prev = pivot;
    res.pivot_cols.push_back(c);
    res.last_pivot = pivot;
    ++r;
  }
  res.rank = r;
  return res;
}

template <class S>
int rank_flat(FlatMat<S> m) {
  return bareiss_echelon(m).rank;
}

// Determinant of a square matrix: sign * last Bareiss pivot, 0 if singular.
template <class S>
S det_flat(FlatMat<S> m) {
  const EchelonResult<S> e = bareiss_echelon(m);
  if (e.rank < m.rows) return S(0);
  return e.sign > 0 ? e.last_pivot : -e.last_pivot;
}

// Determinant of the square submatrix picked by `rows` x `cols`.
template <class S>
S minor_det(const FlatMat<S>& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  FlatMat<S> sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
  return det_flat(std::move(sub));
}

// Lexicographic k-combination iterator over {0..n-1}; c must start as
// {0,1,..,k-1}. Returns false once the last combination has been consumed.
inline bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Binomial coefficient as double, for budget prediction; saturates to inf.
inline double binom_approx(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::int64_t binom_i64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  CheckedI64 r(1);
  for (int i = 1; i <= k; ++i) r = r * CheckedI64(n - k + i) / CheckedI64(i);
  return r.v;
}

inline Bigint binom_big(int n, int k) {
  if (k < 0 || k > n) return Bigint(0);
  k = std::min(k, n - k);
  Bigint r(1);
  for (int i = 1; i <= k; ++i) r = r * Bigint(n - k + i) / Bigint(i);
  return r;
}

// Divide by the gcd of the entries and make the first nonzero entry positive.
template <class S>
void make_primitive_canonical(std::vector<S>& v) {
  S g(0);
  for (const S& x : v)
    if (x != S(0)) g = gcd_of(g, x);
  if (g == S(0)) return;
  int first = -1;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != S(0)) {
      first = static_cast<int>(i);
      break;
    }
  const bool flip = v[static_cast<std::size_t>(first)] < S(0);
  for (S& x : v) {
    x = x / g;
    if (flip) x = -x;
  }
}

// Primitive canonically-signed kernel vector of a matrix with corank exactly
// one (any row count, cols = rank + 1). Echelon, then an integer
// back-substitution that carries a shared denominator; the final vector is
// divided down to primitive form.
template <class S>
std::vector<S> kernel_vector_corank1(FlatMat<S> m) {
  const int t = m.cols;
  const EchelonResult<S> e = bareiss_echelon(m);
  if (e.rank != t - 1)
    throw std::logic_error("kernel_vector_corank1: corank is not 1");
  std::vector<char> is_pivot(static_cast<std::size_t>(t), 0);
  for (int c : e.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = 1;
  int free_col = -1;
  for (int c = 0; c < t; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_col = c;

  std::vector<S> x(static_cast<std::size_t>(t), S(0));
  x[static_cast<std::size_t>(free_col)] = S(1);
  for (int k = e.rank - 1; k >= 0; --k) {
    const int pc = e.pivot_cols[static_cast<std::size_t>(k)];
    S acc(0);
    for (int j = pc + 1; j < t; ++j)
      if (x[static_cast<std::size_t>(j)] != S(0)) acc += m(k, j) * x[static_cast<std::size_t>(j)];
    const S piv = m(k, pc);
    for (int j = 0; j < t; ++j)
      if (j != pc) x[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] * piv;
    x[static_cast<std::size_t>(pc)] = -acc;
  }
  make_primitive_canonical(x);
  return x;
}

}  // namespace robust
