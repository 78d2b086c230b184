#pragma once

#include <string>
#include <vector>

#include "robust/circuits.hpp"
#include "robust/design.hpp"
#include "robust/model.hpp"
#include "robust/types.hpp"

namespace robust {

enum class RobustnessMethod { automatic, rank_enumeration, circuit_check, both };

struct RobustnessReport {
  int n = 0, p = 0;
  long long saturated_count = 0;
  long long total_count = 0;  // C(n, p); enumeration budget keeps this in range
  Rational robustness;        // exact saturated_count / C(n, p)
  RobustnessMethod method = RobustnessMethod::rank_enumeration;
  bool methods_agree = true;  // meaningful when method == both

  std::string to_json() const;
  std::string summary_line() const;  // machine-parsable key=value
};

struct EfficiencyReport {
  double d_efficiency = 0.0;
  Bigint det_xtx;
  int n = 0, p = 0;

  std::string to_json() const;
};

double default_subset_budget();  // 1e7, or $ROBUST_BUDGET

// True iff the p x p matrix is nonsingular. Throws on non-square input.
bool is_saturated(const ModelMatrix& X);

// Combinatorial saturation test: a p-point fraction is saturated iff it
// contains no circuit support. Requires |frac| = basis.rank and a basis
// complete up to p.
bool is_saturated_via_circuits(const Fraction& frac, const CircuitBasis& basis);

// Exact robustness of a fraction with model matrix X_F: the share of
// saturated p-subsets among all C(n, p). The circuit_check method needs a
// basis complete up to p over the parent candidate set (row_labels select the
// fraction) and refuses replicate fractions; rank_enumeration handles
// replicates. `both` runs the two and records agreement.
RobustnessReport robustness(const ModelMatrix& X_F, const CircuitBasis* basis = nullptr,
                            RobustnessMethod method = RobustnessMethod::automatic,
                            double budget = 0, int jobs = 1);

// True iff some p-subset of the fraction is free of circuit supports
// (equivalently rank(X_frac) = p). Needs a basis complete up to p.
bool is_estimable(const Fraction& frac, const CircuitBasis& basis, double budget = 0);

// Every circuit support of size rank+1, as a fraction; each has robustness 1.
std::vector<Fraction> fully_robust_supports(const CircuitBasis& basis);

// D(X_F) = 100 (det(X_F^t X_F)^{1/p} / n). Determinant exact; the p-th root
// is taken in 50-digit floating point at the boundary of the exact core.
EfficiencyReport d_efficiency(const ModelMatrix& X_F);

struct TuEquivalenceReport {
  int n = 0, p = 0;
  Bigint det_xtx;
  long long saturated_count = 0;
  long long total_count = 0;
  bool identity_holds = false;  // det(X^t X) == saturated count, exactly
  Rational robustness;
  double d_eff = 0.0;
};

// Verifies the robustness / D-efficiency equivalence on a totally unimodular
// model matrix: det(X_F^t X_F) equals the saturated-subset count exactly.
// Throws std::invalid_argument when the input is not TU.
TuEquivalenceReport tu_equivalence_check(const ModelMatrix& X_F, double budget = 0, int jobs = 1);

}  // namespace robust
