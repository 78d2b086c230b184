#include "robust/exact_linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>

#include "robust/elim.hpp"
#include "robust/parallel.hpp"

namespace robust {

int rank_of(const MatZ& m) {
  if (m.size() == 0) return 0;
  try {
    return rank_flat(flat_i64(m));
  } catch (const Int64Overflow&) {
    return rank_flat(flat_big(m));
  }
}

Bigint det_of(const MatZ& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det_of: matrix not square");
  if (m.rows() == 0) return Bigint(1);
  try {
    return Bigint(det_flat(flat_i64(m)).v);
  } catch (const Int64Overflow&) {
    return det_flat(flat_big(m));
  }
}

std::vector<VecZ> kernel_basis_of(const MatZ& m) {
  using Rat = bmp::cpp_rational;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());

  // Gauss-Jordan over the rationals; kernel_basis sits off the hot paths.
  std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = Rat(m(i, j).raw());

  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot_col(cols, false);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(a[pr], a[r]);
    const Rat piv = a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rat f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col_of_row.push_back(c);
    is_pivot_col[c] = true;
    ++r;
  }

  std::vector<VecZ> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot_col[f]) continue;
    // x[f] = 1, pivot variables read off the reduced rows, then scale to
    // a primitive integer vector.
    std::vector<Rat> x(cols, Rat(0));
    x[f] = 1;
    for (int k = 0; k < r; ++k) x[pivot_col_of_row[k]] = -a[k][f];
    bmp::cpp_int lcm_den = 1;
    for (const Rat& q : x) lcm_den = bmp::lcm(lcm_den, bmp::denominator(q));
    std::vector<Bigint> v(cols);
    for (int j = 0; j < cols; ++j)
      v[j] = Bigint(bmp::cpp_int(bmp::numerator(x[j]) * (lcm_den / bmp::denominator(x[j]))));
    make_primitive_canonical(v);
    VecZ out(cols);
    for (int j = 0; j < cols; ++j) out(j) = v[j];
    basis.push_back(std::move(out));
  }
  return basis;
}

VecZ nullvector_1d(const MatZ& m) {
  std::vector<VecZ> basis = kernel_basis_of(m);
  if (basis.size() != 1)
    throw std::invalid_argument("nullvector_1d: kernel dimension is " +
                                std::to_string(basis.size()) + ", expected 1");
  return basis[0];
}

bool is_totally_unimodular(const MatZ& m, int max_order, int jobs) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (abs(m(i, j)) > Bigint(1)) return false;

  FlatMat<CheckedI64> f(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) f(i, j) = m(i, j).to_int64();

  int top = std::min(rows, cols);
  if (max_order > 0) top = std::min(top, max_order);
  for (int k = 2; k <= top; ++k) {
    // Row subsets are split across workers; each worker sweeps all column
    // subsets. Conjunction is order-independent.
    std::vector<std::vector<int>> row_sets;
    {
      std::vector<int> rsel(k);
      for (int i = 0; i < k; ++i) rsel[i] = i;
      do {
        row_sets.push_back(rsel);
      } while (next_combination(rsel, rows));
    }
    const bool ok = parallel_chunks<bool>(
        static_cast<std::int64_t>(row_sets.size()), jobs, true,
        [&](std::int64_t lo, std::int64_t hi) {
          std::vector<int> csel(k);
          for (std::int64_t s = lo; s < hi; ++s) {
            for (int j = 0; j < k; ++j) csel[j] = j;
            do {
              const CheckedI64 d = minor_det(f, row_sets[s], csel);
              if (d.v < -1 || d.v > 1) return false;
            } while (next_combination(csel, cols));
          }
          return true;
        },
        [](bool& acc, bool part) { acc = acc && part; });
    if (!ok) return false;
  }
  return true;
}

MatZ gram(const MatZ& m) { return m.transpose() * m; }

Bigint cauchy_binet_sum(const MatZ& m) {
  if (m.rows() < m.cols())
    throw std::invalid_argument("cauchy_binet_sum: requires rows >= cols");
  return det_of(gram(m));
}

CauchyBinetReport cauchy_binet_verify(const MatZ& m, double budget) {
  CauchyBinetReport rep;
  rep.direct = cauchy_binet_sum(m);
  const int n = static_cast<int>(m.rows());
  const int p = static_cast<int>(m.cols());
  const double total = binom_approx(n, p);
  if (total > budget)
    throw CapacityError("cauchy_binet_verify: C(rows, cols) exceeds budget", total, budget);

  Bigint sum(0);
  std::vector<int> sel(p);
  for (int i = 0; i < p; ++i) sel[i] = i;
  MatZ sub(p, p);
  do {
    for (int i = 0; i < p; ++i) sub.row(i) = m.row(sel[i]);
    const Bigint d = det_of(sub);
    sum += d * d;
  } while (next_combination(sel, n));
  rep.enumerated = sum;
  rep.equal = (rep.direct == rep.enumerated);
  return rep;
}

VecZ canonical_primitive(VecZ v) {
  std::vector<Bigint> tmp(v.data(), v.data() + v.size());
  make_primitive_canonical(tmp);
  for (Index i = 0; i < v.size(); ++i) v(i) = tmp[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace robust
