#include "robust/robustness.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "robust/elim.hpp"
#include "robust/exact_linalg.hpp"
#include "robust/parallel.hpp"

namespace robust {

using nlohmann::json;

double default_subset_budget() {
  if (const char* env = std::getenv("ROBUST_BUDGET"); env && *env) {
    const double b = std::atof(env);
    if (b > 0) return b;
  }
  return 1e7;
}

std::string RobustnessReport::to_json() const {
  json j;
  j["n"] = n;
  j["p"] = p;
  j["saturated_count"] = saturated_count;
  j["total_count"] = total_count;
  j["robustness"] = decimal_string(robustness, 4);
  j["robustness_exact"] = std::to_string(saturated_count) + "/" + std::to_string(total_count);
  j["method"] = method == RobustnessMethod::rank_enumeration ? "rank_enumeration"
                : method == RobustnessMethod::circuit_check  ? "circuit_check"
                                                             : "both";
  if (method == RobustnessMethod::both) j["methods_agree"] = methods_agree;
  return j.dump();
}

std::string RobustnessReport::summary_line() const {
  const Rational reduced = robustness;
  std::ostringstream os;
  os << "r=" << bmp::numerator(reduced) << "/" << bmp::denominator(reduced) << " ("
     << decimal_string(robustness, 4) << ") saturated=" << saturated_count
     << " total=" << total_count << " n=" << n << " p=" << p << " method="
     << (method == RobustnessMethod::rank_enumeration ? "rank_enumeration"
         : method == RobustnessMethod::circuit_check  ? "circuit_check"
                                                      : "both");
  if (method == RobustnessMethod::both)
    os << " methods_agree=" << (methods_agree ? "true" : "false");
  return os.str();
}

std::string EfficiencyReport::to_json() const {
  json j;
  j["d_efficiency"] = d_efficiency;
  j["det_xtx"] = det_xtx.str();
  j["n"] = n;
  j["p"] = p;
  return j.dump();
}

bool is_saturated(const ModelMatrix& X) {
  if (X.n() != X.p()) throw std::invalid_argument("is_saturated: matrix not square");
  return X.rank == X.p();
}

bool is_saturated_via_circuits(const Fraction& frac, const CircuitBasis& basis) {
  if (basis.rank < 0)
    throw std::invalid_argument("is_saturated_via_circuits: basis rank unknown");
  const int p = basis.rank;
  if (frac.size() != p)
    throw std::invalid_argument("is_saturated_via_circuits: fraction size must equal p");
  if (!basis.complete_up_to(p))
    throw std::invalid_argument("is_saturated_via_circuits: basis not complete up to p");
  Bitset128 fmask;
  for (int r : frac.rows) fmask.set(r);
  for (const Circuit& c : basis.circuits)
    if (c.support_size() <= p && c.mask.subset_of(fmask)) return false;
  return true;
}

namespace {

// Saturated p-subset count by exact rank over row instances. Parallel over
// the first selected row; counts are summed in index order.
template <class S>
long long count_saturated_rank(const FlatMat<S>& rows, int p, int jobs) {
  const int n = rows.rows;
  auto dets_from_first = [&](std::int64_t lo, std::int64_t hi) {
    long long count = 0;
    std::vector<int> sel(static_cast<std::size_t>(p));
    FlatMat<S> sub(p, p);
    for (int first = static_cast<int>(lo); first < static_cast<int>(hi); ++first) {
      if (n - first < p) continue;
      for (int i = 0; i < p; ++i) sel[static_cast<std::size_t>(i)] = first + i;
      while (true) {
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j) sub(i, j) = rows(sel[static_cast<std::size_t>(i)], j);
        if (det_flat(sub) != S(0)) ++count;
        // advance combination, keeping the first element fixed
        int i = p - 1;
        while (i >= 1 && sel[static_cast<std::size_t>(i)] == n - p + i) --i;
        if (i < 1) break;
        ++sel[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < p; ++j)
          sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return count;
  };
  return parallel_chunks<long long>(
      n - p + 1, jobs, 0, dets_from_first,
      [](long long& acc, long long part) { acc += part; });
}

long long count_saturated_rank_dispatch(const MatZ& m, int p, int jobs) {
  try {
    return count_saturated_rank(flat_as<CheckedI64>(m), p, jobs);
  } catch (const Int64Overflow&) {
  }
  try {
    return count_saturated_rank(flat_as<Checked128>(m), p, jobs);
  } catch (const Int64Overflow&) {
  }
  return count_saturated_rank(flat_big(m), p, jobs);
}

// Restricted circuit supports as position masks over the fraction.
std::vector<Bitset128> restricted_masks(const std::vector<int>& row_labels,
                                        const CircuitBasis& basis, int p) {
  Bitset128 fmask;
  std::vector<int> position(static_cast<std::size_t>(basis.K), -1);
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    fmask.set(row_labels[i]);
    position[static_cast<std::size_t>(row_labels[i])] = static_cast<int>(i);
  }
  std::vector<Bitset128> masks;
  for (const Circuit& c : basis.circuits) {
    if (c.support_size() > p) continue;
    if (!c.mask.subset_of(fmask)) continue;
    Bitset128 m;
    for (int idx : c.support) m.set(position[static_cast<std::size_t>(idx)]);
    masks.push_back(m);
  }
  return masks;
}

long long count_saturated_circuits(int n, int p, const std::vector<Bitset128>& masks, int jobs) {
  auto from_first = [&](std::int64_t lo, std::int64_t hi) {
    long long count = 0;
    std::vector<int> sel(static_cast<std::size_t>(p));
    for (int first = static_cast<int>(lo); first < static_cast<int>(hi); ++first) {
      if (n - first < p) continue;
      for (int i = 0; i < p; ++i) sel[static_cast<std::size_t>(i)] = first + i;
      while (true) {
        Bitset128 smask;
        for (int i = 0; i < p; ++i) smask.set(sel[static_cast<std::size_t>(i)]);
        bool saturated = true;
        for (const Bitset128& cm : masks)
          if (cm.subset_of(smask)) {
            saturated = false;
            break;
          }
        if (saturated) ++count;
        int i = p - 1;
        while (i >= 1 && sel[static_cast<std::size_t>(i)] == n - p + i) --i;
        if (i < 1) break;
        ++sel[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < p; ++j)
          sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return count;
  };
  return parallel_chunks<long long>(
      n - p + 1, jobs, 0, from_first,
      [](long long& acc, long long part) { acc += part; });
}

bool has_duplicate_labels(const std::vector<int>& labels) {
  std::unordered_set<int> seen(labels.begin(), labels.end());
  return seen.size() != labels.size();
}

}  // namespace

RobustnessReport robustness(const ModelMatrix& X_F, const CircuitBasis* basis,
                            RobustnessMethod method, double budget, int jobs) {
  const int n = X_F.n();
  const int p = X_F.p();
  if (n < p) throw std::invalid_argument("robustness: fraction smaller than p");
  if (budget <= 0) budget = default_subset_budget();
  const double total_d = binom_approx(n, p);
  if (total_d > budget)
    throw CapacityError("robustness: C(n,p) exceeds the enumeration budget", total_d, budget);
  const long long total = binom_i64(n, p);

  const bool replicated = has_duplicate_labels(X_F.row_labels);
  bool can_circuits = basis != nullptr && !replicated && basis->complete_up_to(p);
  if (can_circuits)
    for (int r : X_F.row_labels)
      if (r < 0 || r >= basis->K) can_circuits = false;

  RobustnessMethod chosen = method;
  if (method == RobustnessMethod::automatic)
    chosen = can_circuits ? RobustnessMethod::circuit_check : RobustnessMethod::rank_enumeration;
  if ((chosen == RobustnessMethod::circuit_check || chosen == RobustnessMethod::both) &&
      !can_circuits)
    throw std::invalid_argument(
        "robustness: circuit_check needs a replicate-free fraction and a basis complete up to p");

  RobustnessReport rep;
  rep.n = n;
  rep.p = p;
  rep.total_count = total;
  rep.method = chosen;

  long long rank_count = -1, circuit_count = -1;
  if (chosen == RobustnessMethod::rank_enumeration || chosen == RobustnessMethod::both)
    rank_count = count_saturated_rank_dispatch(X_F.entries, p, jobs);
  if (chosen == RobustnessMethod::circuit_check || chosen == RobustnessMethod::both) {
    const std::vector<Bitset128> masks = restricted_masks(X_F.row_labels, *basis, p);
    circuit_count = count_saturated_circuits(n, p, masks, jobs);
  }

  if (chosen == RobustnessMethod::both) {
    rep.methods_agree = (rank_count == circuit_count);
    if (!rep.methods_agree)
      throw std::logic_error("robustness: rank_enumeration and circuit_check disagree");
    rep.saturated_count = rank_count;
  } else {
    rep.saturated_count = std::max(rank_count, circuit_count);
  }
  rep.robustness = Rational(rep.saturated_count, total);
  return rep;
}

bool is_estimable(const Fraction& frac, const CircuitBasis& basis, double budget) {
  if (basis.rank < 0) throw std::invalid_argument("is_estimable: basis rank unknown");
  const int p = basis.rank;
  const int n = frac.size();
  if (n < p) return false;
  if (!basis.complete_up_to(p))
    throw std::invalid_argument("is_estimable: basis not complete up to p");
  if (frac.has_replicates())
    throw std::invalid_argument("is_estimable: fraction has replicates");
  if (budget <= 0) budget = default_subset_budget();
  if (binom_approx(n, p) > budget)
    throw CapacityError("is_estimable: C(n,p) exceeds the enumeration budget",
                        binom_approx(n, p), budget);

  const std::vector<Bitset128> masks = restricted_masks(frac.rows, basis, p);
  std::vector<int> sel(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) sel[static_cast<std::size_t>(i)] = i;
  do {
    Bitset128 smask;
    for (int i = 0; i < p; ++i) smask.set(sel[static_cast<std::size_t>(i)]);
    bool free_of_circuits = true;
    for (const Bitset128& cm : masks)
      if (cm.subset_of(smask)) {
        free_of_circuits = false;
        break;
      }
    if (free_of_circuits) return true;
  } while (next_combination(sel, n));
  return false;
}

std::vector<Fraction> fully_robust_supports(const CircuitBasis& basis) {
  if (basis.rank < 0)
    throw std::invalid_argument("fully_robust_supports: basis rank unknown");
  if (!basis.exhaustive)
    throw std::invalid_argument("fully_robust_supports: basis must be exhaustive");
  std::vector<Fraction> out;
  for (const Circuit& c : basis.circuits)
    if (c.support_size() == basis.rank + 1)
      out.push_back(Fraction{basis.K, c.support});
  return out;
}

EfficiencyReport d_efficiency(const ModelMatrix& X_F) {
  const int n = X_F.n();
  const int p = X_F.p();
  if (n < p) throw std::invalid_argument("d_efficiency: fraction smaller than p");
  EfficiencyReport rep;
  rep.n = n;
  rep.p = p;
  rep.det_xtx = det_of(gram(X_F.entries));
  if (rep.det_xtx.is_zero() || rep.det_xtx.sign() < 0) {
    // det(X^t X) >= 0 always; 0 means rank deficiency
    rep.d_efficiency = 0.0;
    return rep;
  }
  using BF = bmp::cpp_bin_float_50;
  const BF det(rep.det_xtx.raw());
  const BF root = bmp::exp(bmp::log(det) / p);
  rep.d_efficiency = static_cast<double>(BF(100) * root / n);
  return rep;
}

TuEquivalenceReport tu_equivalence_check(const ModelMatrix& X_F, double budget, int jobs) {
  if (!is_totally_unimodular(X_F.entries, 0, jobs))
    throw std::invalid_argument("tu_equivalence_check: matrix is not totally unimodular");
  const int n = X_F.n();
  const int p = X_F.p();
  if (budget <= 0) budget = default_subset_budget();
  if (binom_approx(n, p) > budget)
    throw CapacityError("tu_equivalence_check: C(n,p) exceeds budget", binom_approx(n, p),
                        budget);

  TuEquivalenceReport rep;
  rep.n = n;
  rep.p = p;
  rep.det_xtx = det_of(gram(X_F.entries));
  rep.saturated_count = count_saturated_rank_dispatch(X_F.entries, p, jobs);
  rep.total_count = binom_i64(n, p);
  rep.identity_holds = (rep.det_xtx == Bigint(rep.saturated_count));
  rep.robustness = Rational(rep.saturated_count, rep.total_count);
  EfficiencyReport eff = d_efficiency(X_F);
  rep.d_eff = eff.d_efficiency;
  return rep;
}

}  // namespace robust
