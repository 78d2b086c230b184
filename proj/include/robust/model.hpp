#pragma once

#include <string>
#include <vector>

#include "robust/design.hpp"
#include "robust/types.hpp"

namespace robust {

enum class Coding { indicator01, plus_minus_one, monomial };

std::string coding_name(Coding c);
Coding coding_from_name(const std::string& name);

// A primitive is an indicator [level_f == l] or a power x_f^a of a factor's
// numeric level; a model term is the intercept, a single primitive, or an
// entrywise product of primitives.
struct TermPrimitive {
  enum class Kind { indicator, power };
  Kind kind;
  int factor = 0;
  int level = 0;     // indicator
  int exponent = 0;  // power
};

struct ModelTerm {
  enum class Kind { intercept, primitive, product };
  Kind kind = Kind::intercept;
  std::vector<TermPrimitive> parts;  // 1 for primitive, >= 2 for product

  std::string label() const;
};

// Ordered list of model terms; column order of the model matrix.
struct ModelSpec {
  Coding coding = Coding::indicator01;
  std::vector<ModelTerm> terms;
  // Per-factor numeric level values (monomial evaluation); must be supplied
  // explicitly whenever a power primitive appears.
  std::vector<std::vector<long long>> numeric_levels;

  int term_count() const { return static_cast<int>(terms.size()); }
  void validate(const FactorSpec& factors) const;
};

// Integer K x p model matrix with point and term labels. `rank` is computed
// exactly at construction; rank deficiency is reported here, never an error.
struct ModelMatrix {
  MatZ entries;
  std::vector<int> row_labels;         // candidate-set point indices
  std::vector<std::string> col_labels; // term labels
  int rank = 0;

  int n() const { return static_cast<int>(entries.rows()); }
  int p() const { return static_cast<int>(entries.cols()); }
};

ModelMatrix model_matrix(const CandidateSet& cs, const ModelSpec& spec);

// Row selection with multiplicity; row_labels preserved.
ModelMatrix submatrix(const ModelMatrix& mm, const Fraction& frac);

// Shortcut model languages used by the CLI and the simulation harness:
//   main            intercept + all retained indicator columns
//   main+2way       ... + products over all factor pairs
//   main+3way       ... + products over all factor pairs and triples
//   main+int:AxB    main + the single interaction of factors A and B (1-based)
//   poly:D          univariate monomials 1, x, ..., x^D (needs numeric levels)
ModelSpec make_model(const FactorSpec& factors, const std::string& shortcut,
                     Coding coding = Coding::indicator01,
                     std::vector<std::vector<long long>> numeric_levels = {});

// JSON schema: {"coding": ..., "terms": [...], "numeric_levels": [[...]]}.
ModelSpec read_model_json(const std::string& path);
void write_model_json(const ModelSpec& spec, const std::string& path);
ModelSpec model_from_json_text(const std::string& text);
std::string model_to_json_text(const ModelSpec& spec);

}  // namespace robust
