#include "robust/optimizer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "robust/elim.hpp"
#include "robust/rng.hpp"

namespace robust {

using nlohmann::json;

std::string ExchangeTrace::to_jsonl() const {
  std::ostringstream os;
  for (const ExchangeStepRecord& s : steps) {
    json j;
    j["iteration"] = s.iteration;
    j["removed"] = s.removed;
    j["added"] = s.added;
    j["active_before"] = s.active_before;
    j["active_after"] = s.active_after;
    json losses = json::array();
    for (const auto& [pt, l] : s.loss_snapshot) losses.push_back({pt, l.str()});
    j["loss"] = losses;
    os << j.dump() << "\n";
  }
  json tail;
  tail["termination"] =
      termination == Termination::no_reduction ? "no_reduction" : "max_iter";
  tail["iterations"] = steps.size();
  os << tail.dump() << "\n";
  return os.str();
}

CircuitBasis working_set(const CircuitBasis& basis, ExchangeConfig::Variant variant) {
  if (basis.rank < 0) throw std::invalid_argument("working_set: basis rank unknown");
  const int p = basis.rank;
  CircuitBasis ws = basis;
  if (variant == ExchangeConfig::Variant::reduced && !ws.circuits.empty()) {
    const int min_size = ws.circuits.front().support_size();
    std::erase_if(ws.circuits, [&](const Circuit& c) { return c.support_size() != min_size; });
  }
  std::erase_if(ws.circuits, [&](const Circuit& c) { return c.support_size() > p; });
  return ws;
}

namespace {

Bigint weight_of(int n, int p, int support_size) {
  return binom_big(n - support_size, p - support_size);
}

Bitset128 fraction_mask(const Fraction& frac) {
  Bitset128 m;
  for (int r : frac.rows) m.set(r);
  return m;
}

}  // namespace

LossTable loss_table(const Fraction& frac, const CircuitBasis& working) {
  if (working.rank < 0) throw std::invalid_argument("loss_table: working-set rank unknown");
  const int p = working.rank;
  const int n = frac.size();
  const Bitset128 fmask = fraction_mask(frac);

  LossTable table;
  for (std::size_t i = 0; i < working.circuits.size(); ++i) {
    const Circuit& c = working.circuits[i];
    if (c.support_size() <= p && c.mask.subset_of(fmask))
      table.active.push_back(static_cast<int>(i));
  }
  for (int r : frac.rows) {
    Bigint l(0);
    for (int ci : table.active) {
      const Circuit& c = working.circuits[static_cast<std::size_t>(ci)];
      if (c.mask.test(r)) l += weight_of(n, p, c.support_size());
    }
    table.losses.emplace_back(r, std::move(l));
  }
  return table;
}

Bigint loss(const Fraction& frac, const CircuitBasis& working, int point) {
  if (!std::binary_search(frac.rows.begin(), frac.rows.end(), point))
    throw std::invalid_argument("loss: point not in fraction");
  const LossTable table = loss_table(frac, working);
  for (const auto& [pt, l] : table.losses)
    if (pt == point) return l;
  return Bigint(0);
}

std::optional<ExchangeOutcome> exchange_step(const Fraction& frac, const CandidateSet& cs,
                                             const CircuitBasis& working,
                                             const ExchangeConfig& cfg, int iteration) {
  if (frac.has_replicates())
    throw std::invalid_argument("exchange_step: fraction has replicates");
  const int p = working.rank;
  const int n = frac.size();
  const Bitset128 fmask = fraction_mask(frac);

  const LossTable table = loss_table(frac, working);
  const int active_count = static_cast<int>(table.active.size());
  if (active_count == 0) return std::nullopt;
  if (frac.size() >= cs.size())
    throw std::invalid_argument("exchange_step: no points outside the fraction");

  Bigint max_loss(0);
  for (const auto& [pt, l] : table.losses)
    if (l > max_loss) max_loss = l;
  std::vector<int> worst;
  for (const auto& [pt, l] : table.losses)
    if (cfg.neighborhood == ExchangeConfig::Neighborhood::all_points || l == max_loss)
      worst.push_back(pt);
  if (cfg.neighborhood == ExchangeConfig::Neighborhood::single_worst) worst.resize(1);

  std::vector<int> outside;
  for (int i = 0; i < cs.size(); ++i)
    if (!fmask.test(i)) outside.push_back(i);

  Bigint active_weight(0);
  for (int ci : table.active)
    active_weight +=
        weight_of(n, p, working.circuits[static_cast<std::size_t>(ci)].support_size());

  const bool by_count = cfg.objective != ExchangeConfig::Objective::weighted_loss;
  const bool plateau_ok = cfg.objective == ExchangeConfig::Objective::count_then_weight;

  struct Best {
    bool found = false;
    int count = 0;
    Bigint weighted;
    std::uint64_t key = 0;
    int removed = -1, added = -1;
  } best;

  const bool first_improvement =
      cfg.acceptance == ExchangeConfig::Acceptance::first_improvement;

  // circuits contained in frac + {a} per outside point a; any candidate
  // fraction after one removal draws from these
  std::vector<std::vector<int>> grown_lists(outside.size());
  for (std::size_t ai = 0; ai < outside.size(); ++ai) {
    Bitset128 grown = fmask;
    grown.set(outside[ai]);
    for (std::size_t i = 0; i < working.circuits.size(); ++i) {
      const Circuit& c = working.circuits[i];
      if (c.support_size() <= p && c.mask.subset_of(grown))
        grown_lists[ai].push_back(static_cast<int>(i));
    }
  }

  for (int r : worst) {
    for (std::size_t ai = 0; ai < outside.size(); ++ai) {
      const int a = outside[ai];
      const std::vector<int>& candidates = grown_lists[ai];
      int count = 0;
      Bigint weighted(0);
      for (int ci : candidates) {
        const Circuit& c = working.circuits[static_cast<std::size_t>(ci)];
        if (c.mask.test(r)) continue;
        ++count;
        weighted += weight_of(n, p, c.support_size());
      }
      // strict reduction of the configured objective
      if (plateau_ok) {
        if (count > active_count || (count == active_count && !(weighted < active_weight)))
          continue;
      } else if (by_count ? count >= active_count : !(weighted < active_weight)) {
        continue;
      }
      std::uint64_t key;
      if (cfg.tie_rule == ExchangeConfig::TieRule::lexicographic) {
        key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r)) << 32) |
              static_cast<std::uint32_t>(a);
      } else {
        SplitMix64 mix(cfg.seed ^ (static_cast<std::uint64_t>(iteration) << 40) ^
                       (static_cast<std::uint64_t>(r) << 20) ^ static_cast<std::uint64_t>(a));
        key = mix.next();
      }
      bool better;
      if (!best.found) {
        better = true;
      } else if (by_count) {
        better = count < best.count ||
                 (count == best.count &&
                  (weighted < best.weighted || (weighted == best.weighted && key < best.key)));
      } else {
        better = weighted < best.weighted ||
                 (weighted == best.weighted &&
                  (count < best.count || (count == best.count && key < best.key)));
      }
      if (better) best = Best{true, count, weighted, key, r, a};
      if (first_improvement && best.found) break;
    }
    if (first_improvement && best.found) break;
  }
  if (!best.found) return std::nullopt;

  std::vector<int> new_rows;
  for (int r : frac.rows)
    if (r != best.removed) new_rows.push_back(r);
  new_rows.push_back(best.added);

  ExchangeOutcome out{Fraction::of(cs, std::move(new_rows)), {}};
  out.record.iteration = iteration;
  out.record.removed = best.removed;
  out.record.added = best.added;
  out.record.active_before = active_count;
  out.record.active_after = best.count;
  out.record.loss_snapshot = table.losses;
  return out;
}

std::pair<Fraction, ExchangeTrace> optimize(const Fraction& start, const CandidateSet& cs,
                                            const CircuitBasis& basis,
                                            const ExchangeConfig& cfg) {
  if (cfg.max_iter < 1) throw std::invalid_argument("optimize: max_iter must be >= 1");
  if (basis.K != cs.size())
    throw std::invalid_argument("optimize: basis does not cover the candidate set");
  if (basis.rank < 0) throw std::invalid_argument("optimize: basis rank unknown");
  // A bounded basis is allowed: the working set is then complete only up to
  // the bound (the oa40 case runs on its support-4 circuits).
  if (cfg.variant == ExchangeConfig::Variant::reduced && !basis.exhaustive &&
      basis.circuits.empty())
    throw std::invalid_argument(
        "optimize: reduced variant needs a nonempty bounded basis or an exhaustive one");

  const CircuitBasis ws = working_set(basis, cfg.variant);

  Fraction current = start;
  ExchangeTrace trace;
  trace.termination = ExchangeTrace::Termination::no_reduction;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    std::optional<ExchangeOutcome> step = exchange_step(current, cs, ws, cfg, it);
    if (!step) {
      trace.termination = ExchangeTrace::Termination::no_reduction;
      return {current, trace};
    }
    current = std::move(step->fraction);
    trace.steps.push_back(std::move(step->record));
  }
  trace.termination = ExchangeTrace::Termination::max_iter;
  return {current, trace};
}

}  // namespace robust
