#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robust/circuits.hpp"
#include "robust/design.hpp"
#include "robust/types.hpp"

namespace robust {

struct ExchangeConfig {
  int max_iter = 20;
  enum class Variant { full, reduced } variant = Variant::full;
  std::uint64_t seed = 0;
  enum class TieRule { lexicographic, seeded_random } tie_rule = TieRule::lexicographic;
  // Exchange objective, each requiring a strict decrease per step:
  //   circuit_count   raw count of contained working-set circuits; weighted
  //                   loss only breaks ties among equal counts
  //   weighted_loss   sum of C(n-|supp|, p-|supp|) over contained circuits;
  //                   raw count breaks ties
  //   count_then_weight  lexicographic (count, weighted): an exchange that
  //                   keeps the count but lowers the weighted loss still runs
  enum class Objective {
    circuit_count,
    weighted_loss,
    count_then_weight
  } objective = Objective::circuit_count;
  // Exchange neighborhood: pair all maximum-loss points with outside points,
  // only the first maximum-loss point, or every fraction point.
  enum class Neighborhood {
    worst_points,
    single_worst,
    all_points
  } neighborhood = Neighborhood::worst_points;
  // Accept the first strictly-improving pair in scan order (points in
  // fraction order, candidates in point order), or evaluate every pair and
  // take the best. first_improvement reproduces the published simulation
  // tables; best_improvement is the textbook steepest-descent variant.
  enum class Acceptance {
    first_improvement,
    best_improvement
  } acceptance = Acceptance::first_improvement;
};

// Per-point loss values for the current fraction plus the active circuits
// (working-set circuits contained in the fraction).
struct LossTable {
  std::vector<std::pair<int, Bigint>> losses;  // (point index, L(point))
  std::vector<int> active;                     // indices into the working set
};

struct ExchangeStepRecord {
  int iteration = 0;
  int removed = -1;
  int added = -1;
  int active_before = 0;
  int active_after = 0;
  std::vector<std::pair<int, Bigint>> loss_snapshot;  // before the exchange
};

struct ExchangeTrace {
  std::vector<ExchangeStepRecord> steps;
  enum class Termination { no_reduction, max_iter } termination = Termination::no_reduction;

  std::string to_jsonl() const;  // one record per line
};

// The algorithm's working set: circuits with support on p points or less
// (full variant), or the minimal-support circuits C^min intersected with the
// same support-p filter (reduced variant).
CircuitBasis working_set(const CircuitBasis& basis, ExchangeConfig::Variant variant);

// L(R): over working-set circuits contained in the fraction, with support on
// p points or less, that contain R, the sum of C(n - |supp|, p - |supp|).
Bigint loss(const Fraction& frac, const CircuitBasis& working, int point);

LossTable loss_table(const Fraction& frac, const CircuitBasis& working);

struct ExchangeOutcome {
  Fraction fraction;
  ExchangeStepRecord record;
};

// One greedy exchange: every (max-loss point, outside point) pair is scored
// by the number of working-set circuits contained in the candidate fraction;
// the pair with the largest strict reduction wins. Ties break first on the
// weighted loss of the surviving circuits, then on the configured tie rule.
// Empty result means no pair strictly reduces the count.
std::optional<ExchangeOutcome> exchange_step(const Fraction& frac, const CandidateSet& cs,
                                             const CircuitBasis& working,
                                             const ExchangeConfig& cfg, int iteration = 0);

// Repeats exchange_step until no reduction is possible or max_iter is hit.
// The active-circuit count strictly decreases along the trace.
std::pair<Fraction, ExchangeTrace> optimize(const Fraction& start, const CandidateSet& cs,
                                            const CircuitBasis& basis,
                                            const ExchangeConfig& cfg);

}  // namespace robust
