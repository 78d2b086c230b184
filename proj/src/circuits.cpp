#include "robust/circuits.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "robust/parallel.hpp"

#include <nlohmann/json.hpp>

#include "robust/elim.hpp"
#include "robust/exact_linalg.hpp"
#include "robust/matrix_io.hpp"

namespace robust {

using nlohmann::json;

VecZ Circuit::dense(int K) const {
  VecZ v = VecZ::Zero(K);
  for (std::size_t i = 0; i < support.size(); ++i) v(support[i]) = values[i];
  return v;
}

bool operator==(const Circuit& a, const Circuit& b) {
  return a.support == b.support && a.values == b.values;
}

bool circuit_less(const Circuit& a, const Circuit& b) {
  if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
  if (a.support != b.support) return a.support < b.support;
  return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(),
                                      b.values.end());
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::primal: return "primal";
    case Strategy::dual: return "dual";
    case Strategy::restriction: return "restriction";
    case Strategy::bounded: return "bounded";
  }
  return "?";
}

std::map<int, int> CircuitBasis::support_histogram() const {
  std::map<int, int> h;
  for (const Circuit& c : circuits) ++h[c.support_size()];
  return h;
}

double default_enumeration_budget() {
  if (const char* env = std::getenv("ROBUST_BUDGET"); env && *env) {
    const double b = std::atof(env);
    if (b > 0) return b;
  }
  return 5e7;
}

namespace {

// Column-wise fraction-free elimination state for the subset DFS. Pushed
// columns are kept in their insertion-time reduced form; reducing a fresh
// vector costs one Bareiss step per pivot.
template <class S>
struct ElimStack {
  int dim = 0;
  std::vector<std::vector<S>> red;
  std::vector<int> pivot_pos;
  std::vector<S> pivots;

  explicit ElimStack(int d) : dim(d) {}

  int depth() const { return static_cast<int>(red.size()); }

  std::vector<S> reduce(std::vector<S> v) const {
    S prev(1);
    for (std::size_t k = 0; k < red.size(); ++k) {
      const S d = pivots[k];
      const S f = v[static_cast<std::size_t>(pivot_pos[k])];
      const std::vector<S>& rk = red[k];
      for (int i = 0; i < dim; ++i) {
        auto& vi = v[static_cast<std::size_t>(i)];
        vi = (d * vi - f * rk[static_cast<std::size_t>(i)]) / prev;
      }
      prev = d;
    }
    return v;
  }

  static bool is_zero(const std::vector<S>& v) {
    for (const S& x : v)
      if (x != S(0)) return false;
    return true;
  }

  // v must be reduced and nonzero.
  void push(std::vector<S> v) {
    int pos = -1;
    for (int i = 0; i < dim; ++i)
      if (v[static_cast<std::size_t>(i)] != S(0)) {
        pos = i;
        break;
      }
    pivots.push_back(v[static_cast<std::size_t>(pos)]);
    pivot_pos.push_back(pos);
    red.push_back(std::move(v));
  }

  void pop() {
    red.pop_back();
    pivot_pos.pop_back();
    pivots.pop_back();
  }
};

struct FoundCircuits {
  std::unordered_map<Bitset128, Circuit, Bitset128Hash> by_support;

  void add(Circuit c) {
    by_support.emplace(c.mask, std::move(c));
  }
  void merge(FoundCircuits&& other) {
    for (auto& [mask, c] : other.by_support) by_support.emplace(mask, std::move(c));
  }
};

template <class S>
std::vector<S> column_of(const FlatMat<S>& a, int c) {
  std::vector<S> v(static_cast<std::size_t>(a.rows));
  for (int i = 0; i < a.rows; ++i) v[static_cast<std::size_t>(i)] = a(i, c);
  return v;
}

// Fundamental circuit of (B, c): kernel vector of A[pivot rows, B + {c}],
// solved fresh on that small full-row-rank system.
template <class S>
Circuit fundamental_circuit(const FlatMat<S>& a, const std::vector<int>& pivot_rows,
                            const std::vector<int>& chosen, int c) {
  const int s = static_cast<int>(chosen.size());
  std::vector<int> cols = chosen;
  cols.push_back(c);
  std::vector<S> kv;
  {
    FlatMat<S> m(s, s + 1);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j <= s; ++j) m(i, j) = a(pivot_rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    kv = kernel_vector_corank1(std::move(m));
  }
  Circuit circ;
  for (int j = 0; j <= s; ++j)
    if (kv[static_cast<std::size_t>(j)] != S(0)) {
      circ.support.push_back(cols[static_cast<std::size_t>(j)]);
      circ.values.push_back(to_big_scalar(kv[static_cast<std::size_t>(j)]));
    }
  // chosen is increasing and c > max(chosen), so support is already sorted
  for (int idx : circ.support) circ.mask.set(idx);
  return circ;
}

// DFS over independent column subsets in lexicographic order. At each node,
// extensions already known dependent on the path are skipped: the fundamental
// circuit of (B'', c) for B'' >= B equals the one of (B, c), so nothing is
// lost. max_depth = support bound - 1.
template <class S>
void primal_dfs(const FlatMat<S>& a, ElimStack<S>& elim, std::vector<int>& chosen, int first_col,
                Bitset128 skip, int max_depth, FoundCircuits& out) {
  const int K = a.cols;
  Bitset128 local_skip = skip;
  for (int c = first_col; c < K; ++c) {
    if (local_skip.test(c)) continue;
    std::vector<S> v = elim.reduce(column_of(a, c));
    if (ElimStack<S>::is_zero(v)) {
      Circuit circ = fundamental_circuit(a, elim.pivot_pos, chosen, c);
      out.add(std::move(circ));
      local_skip.set(c);
      continue;
    }
    if (elim.depth() + 1 <= max_depth) {
      elim.push(std::move(v));
      chosen.push_back(c);
      primal_dfs(a, elim, chosen, c + 1, local_skip, max_depth, out);
      chosen.pop_back();
      elim.pop();
    }
  }
}

template <class S>
FoundCircuits primal_enumerate(const MatZ& A, int bound, int jobs) {
  const FlatMat<S> a = flat_as<S>(A);
  const int K = a.cols;
  const int max_depth = bound - 1;

  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    FoundCircuits found;
    ElimStack<S> elim(a.rows);
    std::vector<int> chosen;
    for (int c0 = static_cast<int>(lo); c0 < static_cast<int>(hi); ++c0) {
      std::vector<S> v = column_of(a, c0);
      if (ElimStack<S>::is_zero(v)) {
        Circuit circ;
        circ.support = {c0};
        circ.values = {Bigint(1)};
        circ.mask.set(c0);
        found.add(std::move(circ));
        continue;
      }
      if (max_depth < 1) continue;
      elim.push(std::move(v));
      chosen.push_back(c0);
      primal_dfs(a, elim, chosen, c0 + 1, Bitset128{}, max_depth, found);
      chosen.pop_back();
      elim.pop();
    }
    return found;
  };

  return parallel_chunks<FoundCircuits>(
      K, jobs, FoundCircuits{}, run_range,
      [](FoundCircuits& acc, FoundCircuits part) { acc.merge(std::move(part)); });
}

// Dual strategy: hyperplanes of the row matroid of an integer kernel basis of
// A; circuit supports are their complements.
template <class S>
FoundCircuits dual_enumerate(const MatZ& A, const MatZ& kernel_rows, int jobs) {
  const FlatMat<S> b = flat_as<S>(kernel_rows);
  const FlatMat<S> a = flat_as<S>(A);
  const int K = b.rows;
  const int dual_rank = static_cast<int>(kernel_rows.cols());
  const int leaf_depth = dual_rank - 1;

  std::vector<S> brow(static_cast<std::size_t>(b.cols));
  auto row_of = [&](int i) {
    std::vector<S> v(static_cast<std::size_t>(b.cols));
    for (int j = 0; j < b.cols; ++j) v[static_cast<std::size_t>(j)] = b(i, j);
    return v;
  };

  using FlatSet = std::unordered_set<Bitset128, Bitset128Hash>;

  std::function<void(ElimStack<S>&, std::vector<int>&, int, FlatSet&)> dfs =
      [&](ElimStack<S>& elim, std::vector<int>& chosen, int first, FlatSet& flats) {
        if (elim.depth() == leaf_depth) {
          Bitset128 flat;
          for (int j = 0; j < K; ++j) {
            if (std::binary_search(chosen.begin(), chosen.end(), j)) {
              flat.set(j);
              continue;
            }
            if (ElimStack<S>::is_zero(elim.reduce(row_of(j)))) flat.set(j);
          }
          flats.insert(flat);
          return;
        }
        for (int c = first; c < K; ++c) {
          std::vector<S> v = elim.reduce(row_of(c));
          if (ElimStack<S>::is_zero(v)) continue;
          elim.push(std::move(v));
          chosen.push_back(c);
          dfs(elim, chosen, c + 1, flats);
          chosen.pop_back();
          elim.pop();
        }
      };

  FlatSet flats;
  if (leaf_depth == 0) {
    // rank-0 hyperplane: the set of zero rows (loops)
    Bitset128 flat;
    for (int j = 0; j < K; ++j) {
      bool zero = true;
      for (int l = 0; l < b.cols; ++l)
        if (b(j, l) != S(0)) zero = false;
      if (zero) flat.set(j);
    }
    flats.insert(flat);
  } else {
    flats = parallel_chunks<FlatSet>(
        K, jobs, FlatSet{},
        [&](std::int64_t lo, std::int64_t hi) {
          FlatSet part;
          ElimStack<S> elim(b.cols);
          std::vector<int> chosen;
          for (int c0 = static_cast<int>(lo); c0 < static_cast<int>(hi); ++c0) {
            std::vector<S> v = row_of(c0);
            if (ElimStack<S>::is_zero(v)) continue;
            elim.push(std::move(v));
            chosen.push_back(c0);
            dfs(elim, chosen, c0 + 1, part);
            chosen.pop_back();
            elim.pop();
          }
          return part;
        },
        [](FlatSet& acc, FlatSet part) { acc.merge(std::move(part)); });
  }

  FoundCircuits out;
  for (const Bitset128& flat : flats) {
    std::vector<int> support;
    for (int j = 0; j < K; ++j)
      if (!flat.test(j)) support.push_back(j);
    if (support.empty()) continue;
    FlatMat<S> sub(a.rows, static_cast<int>(support.size()));
    for (int i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < support.size(); ++j)
        sub(i, static_cast<int>(j)) = a(i, support[j]);
    std::vector<S> kv = kernel_vector_corank1(std::move(sub));
    Circuit circ;
    for (std::size_t j = 0; j < support.size(); ++j) {
      if (kv[j] == S(0))
        throw std::logic_error("dual strategy: kernel vector lacks full support");
      circ.support.push_back(support[j]);
      circ.values.push_back(to_big_scalar(kv[j]));
      circ.mask.set(support[j]);
    }
    out.add(std::move(circ));
  }
  return out;
}

// Every emitted circuit must satisfy A v = 0 exactly.
void verify_kernel_membership(const MatZ& A, const std::vector<Circuit>& circuits) {
  for (const Circuit& c : circuits) {
    for (Index r = 0; r < A.rows(); ++r) {
      Bigint acc(0);
      for (std::size_t j = 0; j < c.support.size(); ++j)
        acc += A(r, c.support[j]) * c.values[j];
      if (!acc.is_zero()) throw std::logic_error("circuit fails A v = 0");
    }
  }
}

}  // namespace

CircuitBasis compute_circuits(const MatZ& A, const CircuitOptions& opts) {
  const int K = static_cast<int>(A.cols());
  if (K > 128)
    throw CapacityError("compute_circuits: more than 128 design points", K, 128);
  const int rank = rank_of(A);
  const double budget = opts.budget > 0 ? opts.budget : default_enumeration_budget();

  CircuitBasis basis;
  basis.K = K;
  basis.rank = rank;
  basis.matrix_fingerprint = matrix_fingerprint(A);

  const int exhaustive_bound = rank + 1;
  int bound = exhaustive_bound;
  if (opts.support_bound) bound = std::min(bound, std::max(1, *opts.support_bound));
  basis.support_bound = bound;
  basis.exhaustive = bound >= exhaustive_bound;

  if (K == rank) {  // trivial kernel
    basis.strategy = Strategy::primal;
    return basis;
  }

  double primal_cost = 0;
  for (int s = 0; s <= bound - 1; ++s) primal_cost += binom_approx(K, s);
  double dual_cost = 0;
  for (int s = 0; s <= K - rank - 1; ++s) dual_cost += binom_approx(K, s);

  bool use_dual;
  switch (opts.pick) {
    case CircuitOptions::Pick::primal: use_dual = false; break;
    case CircuitOptions::Pick::dual: use_dual = true; break;
    default: use_dual = dual_cost < primal_cost; break;
  }
  const double predicted = use_dual ? dual_cost : primal_cost;
  if (predicted > budget && !opts.support_bound)
    throw CapacityError("compute_circuits: predicted subset count " +
                            std::to_string(predicted) + " exceeds budget; pass a support bound",
                        predicted, budget);

  FoundCircuits found;
  auto run = [&](auto tag) {
    using S = decltype(tag);
    return use_dual ? dual_enumerate<S>(A, [&] {
      const std::vector<VecZ> kb = kernel_basis_of(A);
      MatZ rows(K, static_cast<Index>(kb.size()));
      for (std::size_t j = 0; j < kb.size(); ++j) rows.col(static_cast<Index>(j)) = kb[j];
      return rows;
    }(), opts.jobs)
                    : primal_enumerate<S>(A, bound, opts.jobs);
  };
  try {
    found = run(CheckedI64{});
  } catch (const Int64Overflow&) {
    try {
      found = run(Checked128{});
    } catch (const Int64Overflow&) {
      found = run(Bigint{});
    }
  }

  basis.circuits.reserve(found.by_support.size());
  for (auto& [mask, c] : found.by_support) {
    if (use_dual || c.support_size() <= bound) basis.circuits.push_back(std::move(c));
  }
  if (use_dual && opts.support_bound) {
    std::erase_if(basis.circuits, [&](const Circuit& c) { return c.support_size() > bound; });
  }
  std::sort(basis.circuits.begin(), basis.circuits.end(), circuit_less);
  basis.strategy = use_dual ? Strategy::dual
                            : (basis.exhaustive ? Strategy::primal : Strategy::bounded);
  if (use_dual && !opts.support_bound) {
    basis.support_bound = exhaustive_bound;
    basis.exhaustive = true;
  }
  verify_kernel_membership(A, basis.circuits);
  return basis;
}

CircuitBasis circuits_of_model(const ModelMatrix& mm, const CircuitOptions& opts) {
  const MatZ A = mm.entries.transpose();
  return compute_circuits(A, opts);
}

CircuitBasis restrict_circuits(const CircuitBasis& basis, const Fraction& frac) {
  if (frac.has_replicates())
    throw std::invalid_argument("restrict_circuits: fraction has replicates");
  if (frac.parent_size != basis.K)
    throw std::invalid_argument("restrict_circuits: fraction does not match basis ambient size");

  Bitset128 fmask;
  std::unordered_map<int, int> position;
  for (std::size_t i = 0; i < frac.rows.size(); ++i) {
    fmask.set(frac.rows[i]);
    position[frac.rows[i]] = static_cast<int>(i);
  }

  CircuitBasis out;
  out.K = frac.size();
  out.rank = -1;
  out.support_bound = basis.support_bound;
  out.exhaustive = basis.exhaustive;
  out.strategy = Strategy::restriction;
  out.matrix_fingerprint = 0;
  for (const Circuit& c : basis.circuits) {
    if (!c.mask.subset_of(fmask)) continue;
    Circuit rc;
    rc.values = c.values;
    for (int idx : c.support) {
      const int pos = position.at(idx);
      rc.support.push_back(pos);
      rc.mask.set(pos);
    }
    out.circuits.push_back(std::move(rc));
  }
  std::sort(out.circuits.begin(), out.circuits.end(), circuit_less);
  return out;
}

std::vector<ColumnDeletionEntry> column_deletion_circuits(const ModelMatrix& X) {
  const int p = X.p();
  if (X.n() != p) throw std::invalid_argument("column_deletion_circuits: matrix not square");
  if (X.rank != p) throw std::invalid_argument("column_deletion_circuits: matrix is singular");

  std::vector<ColumnDeletionEntry> out;
  for (int j = 0; j < p; ++j) {
    MatZ rest(p, p - 1);
    for (int c = 0, t = 0; c < p; ++c) {
      if (c == j) continue;
      rest.col(t++) = X.entries.col(c);
    }
    const VecZ v = nullvector_1d(rest.transpose());
    ColumnDeletionEntry e;
    e.column = j;
    e.column_label = X.col_labels[static_cast<std::size_t>(j)];
    for (int i = 0; i < p; ++i)
      if (!v(i).is_zero()) {
        e.circuit.support.push_back(i);
        e.circuit.values.push_back(v(i));
        e.circuit.mask.set(i);
      }
    e.zero_count = p - e.circuit.support_size();
    out.push_back(std::move(e));
  }
  return out;
}

NestedModelReport nested_model_check(const ModelMatrix& X2, const std::vector<int>& dropped_cols,
                                     const CircuitOptions& opts) {
  const int p2 = X2.p();
  for (int c : dropped_cols)
    if (c < 0 || c >= p2)
      throw std::invalid_argument("nested_model_check: dropped column out of range");
  std::vector<char> dropped(static_cast<std::size_t>(p2), 0);
  for (int c : dropped_cols) dropped[static_cast<std::size_t>(c)] = 1;

  MatZ x1(X2.n(), p2 - static_cast<int>(dropped_cols.size()));
  MatZ xa(X2.n(), static_cast<Index>(dropped_cols.size()));
  for (int c = 0, t1 = 0, ta = 0; c < p2; ++c) {
    if (dropped[static_cast<std::size_t>(c)])
      xa.col(ta++) = X2.entries.col(c);
    else
      x1.col(t1++) = X2.entries.col(c);
  }

  CircuitOptions o = opts;
  o.support_bound.reset();  // both bases must be exhaustive
  const CircuitBasis c1 = compute_circuits(x1.transpose(), o);
  const CircuitBasis c2 = compute_circuits(X2.entries.transpose(), o);
  if (!c1.exhaustive || !c2.exhaustive)
    throw std::invalid_argument("nested_model_check: bases not exhaustive");

  std::unordered_map<Bitset128, const Circuit*, Bitset128Hash> c1_by_support;
  for (const Circuit& c : c1.circuits) c1_by_support[c.mask] = &c;
  std::unordered_map<Bitset128, const Circuit*, Bitset128Hash> c2_by_support;
  for (const Circuit& c : c2.circuits) c2_by_support[c.mask] = &c;

  auto in_kernel_of_dropped = [&](const Circuit& c) {
    for (Index col = 0; col < xa.cols(); ++col) {
      Bigint acc(0);
      for (std::size_t j = 0; j < c.support.size(); ++j)
        acc += xa(c.support[j], col) * c.values[j];
      if (!acc.is_zero()) return false;
    }
    return true;
  };

  NestedModelReport rep;
  // direction 1: C(X1) circuits inside ker(X2^t) must be C(X2) circuits
  for (const Circuit& u : c1.circuits) {
    if (!in_kernel_of_dropped(u)) continue;
    auto it = c2_by_support.find(u.mask);
    if (it == c2_by_support.end() || !(*it->second == u)) ++rep.forward_violations;
  }
  // direction 2: each C(X2) circuit equals a C(X1) circuit or strictly
  // contains the support of one with v^t X^(a) != 0
  for (const Circuit& u : c2.circuits) {
    auto it = c1_by_support.find(u.mask);
    if (it != c1_by_support.end() && *it->second == u) {
      ++rep.equal_count;
      continue;
    }
    bool witnessed = false;
    for (const Circuit& v : c1.circuits) {
      if (v.support_size() >= u.support_size()) continue;
      if (!v.mask.subset_of(u.mask)) continue;
      if (!in_kernel_of_dropped(v)) {
        witnessed = true;
        break;
      }
    }
    if (witnessed)
      ++rep.contains_smaller_count;
    else
      ++rep.violation_count;
  }
  return rep;
}

SymmetryGroup symmetry_group(const CandidateSet& cs) {
  const int K = cs.size();
  const int m = cs.factor_count();
  SymmetryGroup g;

  auto try_add = [&](auto&& transform) {
    std::vector<int> perm(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      std::vector<int> t(static_cast<std::size_t>(m));
      for (int f = 0; f < m; ++f) t[static_cast<std::size_t>(f)] = cs.level(i, f);
      transform(t);
      const int img = cs.find_point(t);
      if (img < 0) return;  // not a self-map of the candidate set
      perm[static_cast<std::size_t>(i)] = img;
    }
    g.generators.push_back(std::move(perm));
  };

  for (int f = 0; f < m; ++f) {
    const int s = cs.factors().levels[static_cast<std::size_t>(f)];
    // transposition of the first two levels
    try_add([&](std::vector<int>& t) {
      int& l = t[static_cast<std::size_t>(f)];
      if (l == 0) l = 1;
      else if (l == 1) l = 0;
    });
    if (s > 2) {
      // full cycle
      try_add([&](std::vector<int>& t) {
        int& l = t[static_cast<std::size_t>(f)];
        l = (l + 1) % s;
      });
    }
  }
  for (int f = 0; f < m; ++f)
    for (int h = f + 1; h < m; ++h) {
      if (cs.factors().levels[static_cast<std::size_t>(f)] !=
          cs.factors().levels[static_cast<std::size_t>(h)])
        continue;
      try_add([&](std::vector<int>& t) {
        std::swap(t[static_cast<std::size_t>(f)], t[static_cast<std::size_t>(h)]);
      });
    }
  return g;
}

namespace {

// Image of a circuit under a point permutation, re-canonicalized.
Circuit permute_circuit(const Circuit& c, const std::vector<int>& perm) {
  std::vector<std::pair<int, Bigint>> entries;
  entries.reserve(c.support.size());
  for (std::size_t j = 0; j < c.support.size(); ++j)
    entries.emplace_back(perm[static_cast<std::size_t>(c.support[j])], c.values[j]);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Circuit out;
  std::vector<Bigint> vals;
  for (auto& [idx, val] : entries) {
    out.support.push_back(idx);
    out.mask.set(idx);
    vals.push_back(val);
  }
  make_primitive_canonical(vals);
  out.values = std::move(vals);
  return out;
}

}  // namespace

std::vector<OrbitSummary> classify_circuits(const CircuitBasis& basis,
                                            const SymmetryGroup& group) {
  const int K = basis.K;
  for (const auto& perm : group.generators) {
    if (static_cast<int>(perm.size()) != K)
      throw std::invalid_argument("classify_circuits: generator size mismatch");
    std::vector<char> seen(static_cast<std::size_t>(K), 0);
    for (int x : perm) {
      if (x < 0 || x >= K || seen[static_cast<std::size_t>(x)])
        throw std::invalid_argument("classify_circuits: generator is not a permutation");
      seen[static_cast<std::size_t>(x)] = 1;
    }
  }

  std::unordered_map<Bitset128, int, Bitset128Hash> index_by_support;
  for (std::size_t i = 0; i < basis.circuits.size(); ++i)
    index_by_support[basis.circuits[i].mask] = static_cast<int>(i);

  auto lookup = [&](const Circuit& c) {
    auto it = index_by_support.find(c.mask);
    if (it == index_by_support.end() || !(basis.circuits[static_cast<std::size_t>(it->second)] == c))
      throw std::invalid_argument(
          "classify_circuits: group does not stabilize the circuit basis");
    return it->second;
  };

  std::vector<char> visited(basis.circuits.size(), 0);
  std::vector<OrbitSummary> orbits;
  for (std::size_t i = 0; i < basis.circuits.size(); ++i) {
    if (visited[i]) continue;
    std::vector<int> stack = {static_cast<int>(i)};
    visited[i] = 1;
    int size = 0;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& perm : group.generators) {
        const int img = lookup(permute_circuit(basis.circuits[static_cast<std::size_t>(cur)], perm));
        if (!visited[static_cast<std::size_t>(img)]) {
          visited[static_cast<std::size_t>(img)] = 1;
          stack.push_back(img);
        }
      }
    }
    OrbitSummary s;
    s.size = size;
    s.support_size = basis.circuits[i].support_size();
    s.representative = basis.circuits[i];
    orbits.push_back(std::move(s));
  }
  return orbits;
}

std::vector<CircuitClassSummary> pattern_classes(const CircuitBasis& basis) {
  auto pattern_of = [](const Circuit& c) {
    std::vector<Bigint> a = c.values;
    std::vector<Bigint> b;
    b.reserve(a.size());
    for (const Bigint& v : a) b.push_back(-v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()) ? a : b;
  };

  std::map<std::pair<int, std::vector<Bigint>>, CircuitClassSummary> classes;
  for (const Circuit& c : basis.circuits) {
    auto key = std::make_pair(c.support_size(), pattern_of(c));
    auto [it, inserted] = classes.try_emplace(key);
    CircuitClassSummary& cls = it->second;
    if (inserted) {
      cls.support_size = c.support_size();
      cls.pattern = key.second;
      cls.representative = c;  // basis order: first member is canonical
    }
    ++cls.size;
  }
  std::vector<CircuitClassSummary> out;
  out.reserve(classes.size());
  for (auto& [key, cls] : classes) out.push_back(std::move(cls));
  return out;
}

CircuitBasis minimal_support_subset(const CircuitBasis& basis) {
  if (basis.circuits.empty())
    throw std::invalid_argument("minimal_support_subset: empty basis");
  const int min_size = basis.circuits.front().support_size();  // canonical order
  CircuitBasis out = basis;
  std::erase_if(out.circuits,
                [&](const Circuit& c) { return c.support_size() != min_size; });
  return out;
}

void write_circuit_file(const CircuitBasis& basis, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write circuit file: " + path);
  out << basis.count() << " " << basis.K << "\n";
  for (const Circuit& c : basis.circuits) {
    int pos = 0;
    for (int j = 0; j < basis.K; ++j) {
      Bigint v(0);
      if (pos < c.support_size() && c.support[static_cast<std::size_t>(pos)] == j)
        v = c.values[static_cast<std::size_t>(pos++)];
      out << (j ? " " : "") << v;
    }
    out << "\n";
  }
  json meta;
  meta["fingerprint"] = fingerprint_hex(basis.matrix_fingerprint);
  meta["strategy"] = strategy_name(basis.strategy);
  if (basis.exhaustive)
    meta["support_bound"] = "exhaustive";
  else
    meta["support_bound"] = basis.support_bound;
  meta["count"] = basis.count();
  meta["K"] = basis.K;
  meta["rank"] = basis.rank;
  std::ofstream side(path + ".json");
  side << meta.dump(2) << "\n";
}

CircuitBasis read_circuit_file(const std::string& path) {
  const MatZ m = read_matrix_file(path);
  CircuitBasis basis;
  basis.K = static_cast<int>(m.cols());
  if (basis.K > 128) throw CapacityError("circuit file wider than 128 points", basis.K, 128);
  for (Index i = 0; i < m.rows(); ++i) {
    std::vector<Bigint> vals;
    std::vector<int> supp;
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) {
        supp.push_back(static_cast<int>(j));
        vals.push_back(m(i, j));
      }
    make_primitive_canonical(vals);
    Circuit c;
    c.support = std::move(supp);
    c.values = std::move(vals);
    for (int idx : c.support) c.mask.set(idx);
    basis.circuits.push_back(std::move(c));
  }
  std::sort(basis.circuits.begin(), basis.circuits.end(), circuit_less);

  std::ifstream side(path + ".json");
  if (side) {
    json meta = json::parse(side, nullptr, false);
    if (!meta.is_discarded()) {
      if (meta.contains("rank")) basis.rank = meta["rank"];
      if (meta.contains("support_bound")) {
        if (meta["support_bound"].is_string())
          basis.exhaustive = true;
        else
          basis.support_bound = meta["support_bound"];
      }
    }
  }
  return basis;
}

}  // namespace robust
