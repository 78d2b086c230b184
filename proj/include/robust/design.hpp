#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robust/types.hpp"

namespace robust {

// Levels per factor, each >= 2.
struct FactorSpec {
  std::vector<int> levels;

  int factor_count() const { return static_cast<int>(levels.size()); }
  void validate() const;
};

// An ordered list of distinct design points (factor-level tuples). Order is
// lexicographic for full factorials and catalog order for named arrays; row
// indices everywhere in this library refer to this order.
class CandidateSet {
 public:
  CandidateSet(FactorSpec factors, MatInt points, std::string name = "");

  const FactorSpec& factors() const { return factors_; }
  const MatInt& points() const { return points_; }
  const std::string& name() const { return name_; }

  int size() const { return static_cast<int>(points_.rows()); }  // K
  int factor_count() const { return factors_.factor_count(); }
  int level(int point, int factor) const { return points_(point, factor); }

  // Index of the point equal to `tuple`, or -1. Used by symmetry self-map
  // checks; the lookup table is built on first use.
  int find_point(const std::vector<int>& tuple) const;

 private:
  FactorSpec factors_;
  MatInt points_;
  std::string name_;
  mutable std::vector<std::pair<std::vector<int>, int>> lookup_;  // sorted
};

// Multiset of row indices into a candidate set. Kept sorted; duplicates are
// replicates.
struct Fraction {
  int parent_size = 0;
  std::vector<int> rows;

  static Fraction of(const CandidateSet& cs, std::vector<int> rows);
  int size() const { return static_cast<int>(rows.size()); }
  bool has_replicates() const;
};

inline constexpr long long kFullFactorialCap = 1'000'000;

// All prod(s_i) points in lexicographic order. Throws CapacityError above the
// point cap.
CandidateSet build_full_factorial(const FactorSpec& factors);

// Named designs: bibd_4x6, oa18_2x3x3x3, pb8_2pow7 are transcribed in code;
// oa40_2pow20 and oa27_3pow4 load from the data directory (checked-in CSVs).
CandidateSet catalog(const std::string& name, const std::string& data_dir = "");

std::vector<std::string> catalog_names();

// Directory holding the catalog CSV data files: explicit argument if
// non-empty, else $ROBUST_DATA_DIR, else the compiled-in source path.
std::string resolve_data_dir(const std::string& explicit_dir);

// CSV I/O, header "f1,...,fm", one point per row (integer level indices).
CandidateSet read_candidate_csv(const std::string& path, std::string name = "");
void write_candidate_csv(const CandidateSet& cs, const std::string& path);

// Fraction file: one 0-based row index per line; '#' starts a comment;
// repeated indices mean replicates.
Fraction read_fraction_file(const CandidateSet& cs, const std::string& path);
void write_fraction_file(const Fraction& frac, const std::string& path);

}  // namespace robust
