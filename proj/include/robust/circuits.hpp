#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robust/bitset128.hpp"
#include "robust/design.hpp"
#include "robust/model.hpp"
#include "robust/types.hpp"

namespace robust {

// A primitive integer vector in ker(A) with inclusion-minimal support,
// canonically signed (first nonzero entry positive). Stored sparsely.
struct Circuit {
  std::vector<int> support;   // sorted point indices
  std::vector<Bigint> values; // aligned with support
  Bitset128 mask;

  int support_size() const { return static_cast<int>(support.size()); }
  VecZ dense(int K) const;
};

bool operator==(const Circuit& a, const Circuit& b);
bool circuit_less(const Circuit& a, const Circuit& b);  // canonical basis order

enum class Strategy { primal, dual, restriction, bounded };
std::string strategy_name(Strategy s);

// The set of all circuits of a matrix A (columns = design points), complete
// up to the support bound; exhaustive when every circuit is present.
struct CircuitBasis {
  std::vector<Circuit> circuits;  // sorted by (support size, support, values)
  std::uint64_t matrix_fingerprint = 0;
  int K = 0;
  int rank = -1;          // rank of the source matrix; -1 after restriction
  int support_bound = 0;  // meaningful when !exhaustive
  bool exhaustive = false;
  Strategy strategy = Strategy::primal;

  int count() const { return static_cast<int>(circuits.size()); }
  std::map<int, int> support_histogram() const;
  // True when the basis is guaranteed to contain every circuit with support
  // size <= bound.
  bool complete_up_to(int bound) const {
    return exhaustive || support_bound >= bound;
  }
};

struct CircuitOptions {
  std::optional<int> support_bound;
  enum class Pick { automatic, primal, dual } pick = Pick::automatic;
  // Budget on the predicted subset count of the chosen enumeration; the
  // ROBUST_BUDGET environment variable overrides the default.
  double budget = 0;  // 0: use default_enumeration_budget()
  int jobs = 1;
};

double default_enumeration_budget();  // 5e7, or $ROBUST_BUDGET

// All circuits of A with support size <= min(bound, rank+1). A is the
// transposed model matrix (rows = parameters, columns = design points).
// Rank-deficient A is handled via its actual rank.
CircuitBasis compute_circuits(const MatZ& A, const CircuitOptions& opts = {});

// Convenience: circuits of a design-model pair (A = X^t).
CircuitBasis circuits_of_model(const ModelMatrix& mm, const CircuitOptions& opts = {});

// Circuits of the sub-fraction's matrix by restriction (no recomputation):
// every basis circuit whose support lies inside the fraction, reindexed to
// fraction positions. Requires a replicate-free fraction. Restriction of a
// bounded basis is only bounded-complete; the returned flags say so.
CircuitBasis restrict_circuits(const CircuitBasis& basis, const Fraction& frac);

struct ColumnDeletionEntry {
  int column = 0;
  std::string column_label;
  Circuit circuit;  // the unique circuit of X with that column removed
  int zero_count = 0;
};

// For a saturated (p x p nonsingular) model matrix, the p one-column-deletion
// circuits; zero counts index the robustness of (p-1)-point sub-fractions.
std::vector<ColumnDeletionEntry> column_deletion_circuits(const ModelMatrix& X);

struct NestedModelReport {
  // classification of each circuit of X2
  int equal_count = 0;             // also a circuit of X1
  int contains_smaller_count = 0;  // strictly contains an X1-circuit support
  int violation_count = 0;
  // direction 1: X1-circuits lying in ker(X2^t) that are not X2-circuits
  int forward_violations = 0;
  bool ok() const { return violation_count == 0 && forward_violations == 0; }
};

// Verifies both directions of the nested-model circuit relations between X2
// and X1 = X2 with `dropped_cols` removed. Computes both exhaustive bases.
NestedModelReport nested_model_check(const ModelMatrix& X2, const std::vector<int>& dropped_cols,
                                     const CircuitOptions& opts = {});

// Point-index permutations induced by level permutations within a factor and
// by swaps of equal-level factors; only self-maps of the candidate set.
struct SymmetryGroup {
  std::vector<std::vector<int>> generators;
};

SymmetryGroup symmetry_group(const CandidateSet& cs);

struct OrbitSummary {
  int size = 0;
  int support_size = 0;
  Circuit representative;  // canonically smallest member
};

// Orbits of the basis under the group action on point indices (vectors
// compared up to canonical sign). Throws if a generator is not a permutation
// that stabilizes the basis.
std::vector<OrbitSummary> classify_circuits(const CircuitBasis& basis, const SymmetryGroup& group);

struct CircuitClassSummary {
  int size = 0;          // circuits in the class
  int support_size = 0;
  std::vector<Bigint> pattern;  // sorted value multiset, canonical global sign
  Circuit representative;
};

// Classes by value pattern: sorted value multiset up to a global sign flip.
// Entry permutations preserve the pattern, so symmetry orbits refine these
// classes; the published per-design class counts are pattern classes.
std::vector<CircuitClassSummary> pattern_classes(const CircuitBasis& basis);

// Circuits whose support size is the minimum over the basis (C^min).
CircuitBasis minimal_support_subset(const CircuitBasis& basis);

// 4ti2-compatible circuit file ("count K" header, one dense vector per line)
// plus a JSON sidecar with fingerprint/strategy/bound metadata.
void write_circuit_file(const CircuitBasis& basis, const std::string& path);
CircuitBasis read_circuit_file(const std::string& path);  // canonicalizes vectors

}  // namespace robust
