#include "robust/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "robust/elim.hpp"
#include "robust/exact_linalg.hpp"
#include "robust/parallel.hpp"
#include "robust/robustness.hpp"

namespace robust {

std::string SimSummary::csv_header() {
  return "n,mean_rB,med_rB,mean_delta,med_delta,delta_p05,delta_p20";
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string SimSummary::csv_row(int n) const {
  std::ostringstream os;
  os << n << "," << fmt(mean_rB) << "," << fmt(median_rB) << "," << fmt(mean_delta) << ","
     << fmt(median_delta) << "," << fmt(delta_p05) << "," << fmt(delta_p20);
  return os.str();
}

Fraction sample_fraction(const CandidateSet& cs, int n, SplitMix64& rng) {
  const int K = cs.size();
  if (n < 1 || n > K) throw std::invalid_argument("sample_fraction: n out of range");
  std::vector<int> pool(static_cast<std::size_t>(K));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(K - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(n));
  return Fraction::of(cs, std::move(pool));
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("percentile: empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  const double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

SimSummary summarize(const std::vector<double>& deltas, const std::vector<double>& r_starts) {
  if (deltas.empty() || r_starts.empty())
    throw std::invalid_argument("summarize: empty sample");
  SimSummary s;
  s.mean_rB = std::accumulate(r_starts.begin(), r_starts.end(), 0.0) /
              static_cast<double>(r_starts.size());
  s.median_rB = percentile(r_starts, 0.5);
  s.mean_delta =
      std::accumulate(deltas.begin(), deltas.end(), 0.0) / static_cast<double>(deltas.size());
  s.median_delta = percentile(deltas, 0.5);
  s.delta_p05 = percentile(deltas, 0.05);
  s.delta_p20 = percentile(deltas, 0.20);
  return s;
}

CandidateSet resolve_design(const std::string& design_id, const std::string& data_dir) {
  if (design_id.rfind("full:", 0) == 0) {
    FactorSpec fs;
    std::stringstream ss(design_id.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) fs.levels.push_back(std::stoi(tok));
    return build_full_factorial(fs);
  }
  if (design_id.rfind("catalog:", 0) == 0) return catalog(design_id.substr(8), data_dir);
  throw std::invalid_argument("resolve_design: bad design id '" + design_id + "'");
}

SimResult run_simulation(const SimConfig& cfg, const CandidateSet& cs, const ModelMatrix& mm,
                         const CircuitBasis& basis) {
  const int p = mm.p();
  if (cfg.replicates < 1) throw std::invalid_argument("run_simulation: replicates must be >= 1");
  if (cfg.n < p || cfg.n > cs.size())
    throw std::invalid_argument("run_simulation: n must lie between p and K");
  if (!basis.complete_up_to(p))
    throw std::invalid_argument("run_simulation: basis not complete up to p");

  ExchangeConfig xcfg;
  xcfg.max_iter = cfg.max_iter;
  xcfg.variant = cfg.variant;
  xcfg.objective = cfg.objective;
  xcfg.tie_rule = cfg.tie_rule;
  xcfg.neighborhood = cfg.neighborhood;
  xcfg.acceptance = cfg.acceptance;
  xcfg.seed = cfg.seed;

  auto score = [&](const Fraction& f) {
    const ModelMatrix xf = submatrix(mm, f);
    const RobustnessReport rep =
        robustness(xf, &basis, RobustnessMethod::circuit_check, 0, 1);
    return static_cast<double>(bmp::numerator(rep.robustness).convert_to<double>() /
                               bmp::denominator(rep.robustness).convert_to<double>());
  };

  std::vector<ScatterRecord> scatter = parallel_chunks<std::vector<ScatterRecord>>(
      cfg.replicates, cfg.jobs, {},
      [&](std::int64_t lo, std::int64_t hi) {
        std::vector<ScatterRecord> part;
        part.reserve(static_cast<std::size_t>(hi - lo));
        for (std::int64_t i = lo; i < hi; ++i) {
          SplitMix64 rng(derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(i)));
          const Fraction start = sample_fraction(cs, cfg.n, rng);
          const double r_before = score(start);
          auto [final_frac, trace] = optimize(start, cs, basis, xcfg);
          const double r_after = score(final_frac);
          part.push_back({static_cast<int>(i), r_before, r_after});
        }
        return part;
      },
      [](std::vector<ScatterRecord>& acc, std::vector<ScatterRecord> part) {
        acc.insert(acc.end(), part.begin(), part.end());
      });

  std::vector<double> deltas, r_starts;
  deltas.reserve(scatter.size());
  r_starts.reserve(scatter.size());
  for (const ScatterRecord& r : scatter) {
    deltas.push_back(r.r_after - r.r_before);
    r_starts.push_back(r.r_before);
  }
  return SimResult{summarize(deltas, r_starts), std::move(scatter)};
}

SimResult run_simulation(const SimConfig& cfg) {
  const CandidateSet cs = resolve_design(cfg.design_id, cfg.data_dir);
  const ModelMatrix mm = model_matrix(cs, make_model(cs.factors(), cfg.model_id));
  CircuitOptions copts;
  copts.support_bound = mm.p();  // the working sets and scoring need <= p only
  copts.jobs = cfg.jobs;
  const CircuitBasis basis = circuits_of_model(mm, copts);
  return run_simulation(cfg, cs, mm, basis);
}

std::vector<DoptRecord> dopt_scatter(const CandidateSet& cs, const ModelSpec& spec, int n,
                                     int sample_size, std::uint64_t seed, bool sample_only,
                                     double exhaustive_budget, int jobs) {
  const ModelMatrix mm = model_matrix(cs, spec);
  const int p = mm.p();
  const int K = cs.size();
  if (n < p || n > K) throw std::invalid_argument("dopt_scatter: n out of range");

  CircuitOptions copts;
  copts.support_bound = p;
  copts.jobs = jobs;
  const CircuitBasis basis = circuits_of_model(mm, copts);

  auto score = [&](const Fraction& f) {
    const ModelMatrix xf = submatrix(mm, f);
    DoptRecord rec;
    rec.d_eff = d_efficiency(xf).d_efficiency;
    const RobustnessReport rep = robustness(xf, &basis, RobustnessMethod::circuit_check, 0, 1);
    rec.robustness = bmp::numerator(rep.robustness).convert_to<double>() /
                     bmp::denominator(rep.robustness).convert_to<double>();
    return rec;
  };

  std::vector<DoptRecord> out;
  if (!sample_only) {
    if (binom_approx(K, n) > exhaustive_budget)
      throw CapacityError("dopt_scatter: exhaustive D-optimal search above budget",
                          binom_approx(K, n), exhaustive_budget);
    std::vector<int> sel(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sel[static_cast<std::size_t>(i)] = i;
    Bigint best_det(-1);
    std::vector<int> best_sel;
    MatZ sub(n, p);
    do {
      for (int i = 0; i < n; ++i) sub.row(i) = mm.entries.row(sel[static_cast<std::size_t>(i)]);
      const Bigint d = det_of(gram(sub));
      if (d > best_det) {
        best_det = d;
        best_sel = sel;
      }
    } while (next_combination(sel, K));
    DoptRecord rec = score(Fraction::of(cs, best_sel));
    rec.is_d_optimal = true;
    out.push_back(rec);
  }

  SplitMix64 rng(seed);
  for (int i = 0; i < sample_size; ++i)
    out.push_back(score(sample_fraction(cs, n, rng)));
  return out;
}

void write_scatter_csv(const std::vector<ScatterRecord>& records, const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw std::invalid_argument("cannot write scatter file: " + path);
  outf << "replicate,r_before,r_after\n";
  for (const ScatterRecord& r : records)
    outf << r.replicate << "," << fmt(r.r_before) << "," << fmt(r.r_after) << "\n";
}

void write_dopt_csv(const std::vector<DoptRecord>& records, const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw std::invalid_argument("cannot write scatter file: " + path);
  outf << "kind,d_efficiency,robustness\n";
  for (const DoptRecord& r : records)
    outf << (r.is_d_optimal ? "d_optimal" : "sample") << "," << fmt(r.d_eff) << ","
         << fmt(r.robustness) << "\n";
}

}  // namespace robust
