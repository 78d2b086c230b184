#pragma once

#include <vector>

#include "robust/types.hpp"

namespace robust {

// Exact rank via fraction-free elimination. No floating point anywhere here.
int rank_of(const MatZ& m);

// Exact determinant (Bareiss). Throws std::invalid_argument on non-square input.
Bigint det_of(const MatZ& m);

// Integer basis of the rational kernel of m; each vector primitive with the
// first nonzero entry positive. Size = cols - rank.
std::vector<VecZ> kernel_basis_of(const MatZ& m);

// The primitive canonically-signed generator of a one-dimensional kernel.
// Throws std::invalid_argument when cols - rank != 1.
VecZ nullvector_1d(const MatZ& m);

// Exhaustive total-unimodularity check over all square submatrices of order
// <= max_order (<= 0 means up to min(rows, cols)). Entries outside {-1,0,1}
// are themselves 1x1 violations, so the answer is false immediately.
bool is_totally_unimodular(const MatZ& m, int max_order = 0, int jobs = 1);

// det(m^t m), computed directly. Requires rows >= cols.
Bigint cauchy_binet_sum(const MatZ& m);

struct CauchyBinetReport {
  Bigint direct;
  Bigint enumerated;  // sum of squared p x p minors over all row subsets
  bool equal = false;
};

// Verification mode: also enumerates all C(rows, cols) row subsets and sums
// the squared minors. Throws CapacityError above `budget` subsets.
CauchyBinetReport cauchy_binet_verify(const MatZ& m, double budget = 1e7);

MatZ gram(const MatZ& m);  // m^t m

VecZ canonical_primitive(VecZ v);

}  // namespace robust
