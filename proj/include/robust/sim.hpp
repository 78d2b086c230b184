#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robust/circuits.hpp"
#include "robust/design.hpp"
#include "robust/model.hpp"
#include "robust/optimizer.hpp"
#include "robust/rng.hpp"

namespace robust {

struct SimConfig {
  std::string design_id;  // "full:s1,s2,..." or "catalog:name"
  std::string model_id;   // model shortcut, e.g. "main" or "main+int:2x3"
  int n = 0;
  int replicates = 1000;
  std::uint64_t seed = 0;
  ExchangeConfig::Variant variant = ExchangeConfig::Variant::full;
  ExchangeConfig::Objective objective = ExchangeConfig::Objective::circuit_count;
  ExchangeConfig::TieRule tie_rule = ExchangeConfig::TieRule::lexicographic;
  ExchangeConfig::Neighborhood neighborhood = ExchangeConfig::Neighborhood::worst_points;
  ExchangeConfig::Acceptance acceptance = ExchangeConfig::Acceptance::first_improvement;
  int max_iter = 20;
  int jobs = 1;
  std::string data_dir;
};

struct SimSummary {
  double mean_rB = 0, median_rB = 0;
  double mean_delta = 0, median_delta = 0;
  double delta_p05 = 0, delta_p20 = 0;

  std::string csv_row(int n) const;
  static std::string csv_header();
};

struct ScatterRecord {
  int replicate = 0;
  double r_before = 0, r_after = 0;
};

// Uniform n-subset without replicates (partial Fisher-Yates over the point
// indices), deterministic in the rng state.
Fraction sample_fraction(const CandidateSet& cs, int n, SplitMix64& rng);

// Percentile by linear interpolation between closest ranks (the declared
// rule; the sources never state theirs).
double percentile(std::vector<double> sorted_ascending_ok, double q);

SimSummary summarize(const std::vector<double>& deltas, const std::vector<double>& r_starts);

struct SimResult {
  SimSummary summary;
  std::vector<ScatterRecord> scatter;
};

// Per replicate: sample a start, score it, optimize, score the final
// fraction. Replicate i draws from a stream derived from the master seed, so
// results are independent of the worker count.
SimResult run_simulation(const SimConfig& cfg, const CandidateSet& cs, const ModelMatrix& mm,
                         const CircuitBasis& basis);

// Convenience: resolves the design/model/basis from the config ids.
SimResult run_simulation(const SimConfig& cfg);

CandidateSet resolve_design(const std::string& design_id, const std::string& data_dir = "");

struct DoptRecord {
  bool is_d_optimal = false;
  double d_eff = 0;
  double robustness = 0;
};

// Scores a random sample of n-fractions plus the exhaustively-found D-optimal
// one (refused above `exhaustive_budget` subsets unless sample_only).
std::vector<DoptRecord> dopt_scatter(const CandidateSet& cs, const ModelSpec& spec, int n,
                                     int sample_size, std::uint64_t seed,
                                     bool sample_only = false, double exhaustive_budget = 1e5,
                                     int jobs = 1);

void write_scatter_csv(const std::vector<ScatterRecord>& records, const std::string& path);
void write_dopt_csv(const std::vector<DoptRecord>& records, const std::string& path);

}  // namespace robust
