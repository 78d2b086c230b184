#include "robust/design.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robust {

void FactorSpec::validate() const {
  if (levels.empty()) throw std::invalid_argument("FactorSpec: no factors");
  for (int s : levels)
    if (s < 2) throw std::invalid_argument("FactorSpec: every factor needs >= 2 levels");
}

CandidateSet::CandidateSet(FactorSpec factors, MatInt points, std::string name)
    : factors_(std::move(factors)), points_(std::move(points)), name_(std::move(name)) {
  factors_.validate();
  if (points_.cols() != factors_.factor_count())
    throw std::invalid_argument("CandidateSet: point width != factor count");
  for (Index i = 0; i < points_.rows(); ++i)
    for (Index f = 0; f < points_.cols(); ++f) {
      const int l = points_(i, f);
      if (l < 0 || l >= factors_.levels[static_cast<std::size_t>(f)])
        throw std::invalid_argument("CandidateSet: level out of range at point " +
                                    std::to_string(i));
    }
  // pairwise distinct
  std::vector<std::vector<int>> seen;
  seen.reserve(static_cast<std::size_t>(points_.rows()));
  for (Index i = 0; i < points_.rows(); ++i) {
    std::vector<int> t(points_.cols());
    for (Index f = 0; f < points_.cols(); ++f) t[static_cast<std::size_t>(f)] = points_(i, f);
    seen.push_back(std::move(t));
  }
  std::vector<std::vector<int>> sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("CandidateSet: duplicate points");
}

int CandidateSet::find_point(const std::vector<int>& tuple) const {
  if (lookup_.empty()) {
    lookup_.reserve(static_cast<std::size_t>(points_.rows()));
    for (Index i = 0; i < points_.rows(); ++i) {
      std::vector<int> t(points_.cols());
      for (Index f = 0; f < points_.cols(); ++f) t[static_cast<std::size_t>(f)] = points_(i, f);
      lookup_.emplace_back(std::move(t), static_cast<int>(i));
    }
    std::sort(lookup_.begin(), lookup_.end());
  }
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), tuple,
                             [](const auto& a, const std::vector<int>& b) { return a.first < b; });
  if (it == lookup_.end() || it->first != tuple) return -1;
  return it->second;
}

Fraction Fraction::of(const CandidateSet& cs, std::vector<int> rows) {
  for (int r : rows)
    if (r < 0 || r >= cs.size())
      throw std::out_of_range("Fraction: row index " + std::to_string(r) + " out of range");
  std::sort(rows.begin(), rows.end());
  return Fraction{cs.size(), std::move(rows)};
}

bool Fraction::has_replicates() const {
  return std::adjacent_find(rows.begin(), rows.end()) != rows.end();
}

CandidateSet build_full_factorial(const FactorSpec& factors) {
  factors.validate();
  long long total = 1;
  for (int s : factors.levels) {
    total *= s;
    if (total > kFullFactorialCap)
      throw CapacityError("build_full_factorial: point count exceeds cap",
                          static_cast<double>(total), static_cast<double>(kFullFactorialCap));
  }
  const int m = factors.factor_count();
  MatInt pts(static_cast<Index>(total), m);
  std::vector<int> tuple(static_cast<std::size_t>(m), 0);
  for (long long i = 0; i < total; ++i) {
    for (int f = 0; f < m; ++f) pts(static_cast<Index>(i), f) = tuple[static_cast<std::size_t>(f)];
    for (int f = m - 1; f >= 0; --f) {
      if (++tuple[static_cast<std::size_t>(f)] < factors.levels[static_cast<std::size_t>(f)]) break;
      tuple[static_cast<std::size_t>(f)] = 0;
    }
  }
  std::ostringstream name;
  name << "full:";
  for (int f = 0; f < m; ++f) name << (f ? "x" : "") << factors.levels[static_cast<std::size_t>(f)];
  return CandidateSet(factors, std::move(pts), name.str());
}

namespace {

MatInt rows_to_mat(const std::vector<std::vector<int>>& rows) {
  MatInt m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

// 4 treatments x 6 blocks, lambda = 1; points in row-major order of the
// incidence table so that the printed point numbering 1..12 maps to rows 0..11.
CandidateSet make_bibd_4x6() {
  const std::vector<std::vector<int>> pts = {
      {0, 0}, {0, 1}, {0, 2},
      {1, 0}, {1, 3}, {1, 4},
      {2, 1}, {2, 3}, {2, 5},
      {3, 2}, {3, 4}, {3, 5},
  };
  return CandidateSet(FactorSpec{{4, 6}}, rows_to_mat(pts), "bibd_4x6");
}

// Strength-2 OA with 18 runs for the 2x3x3x3 design.
CandidateSet make_oa18() {
  const int f1[] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  const int f2[] = {0, 0, 0, 1, 1, 1, 2, 2, 2, 0, 0, 0, 1, 1, 1, 2, 2, 2};
  const int f3[] = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2};
  const int f4[] = {0, 1, 2, 1, 2, 0, 2, 0, 1, 1, 2, 0, 2, 0, 1, 0, 1, 2};
  std::vector<std::vector<int>> pts(18);
  for (int i = 0; i < 18; ++i) pts[static_cast<std::size_t>(i)] = {f1[i], f2[i], f3[i], f4[i]};
  return CandidateSet(FactorSpec{{2, 3, 3, 3}}, rows_to_mat(pts), "oa18_2x3x3x3");
}

// 8-run Plackett-Burman design for 2^7; '+' is level 0 (so the plus_minus_one
// coding, level 0 -> +1, reproduces the printed array).
CandidateSet make_pb8() {
  const char* rows[] = {
      "+++++++",
      "++----+",
      "+-++---",
      "+---++-",
      "-++-+--",
      "-+-+-+-",
      "--+--++",
      "---++-+",
  };
  std::vector<std::vector<int>> pts(8, std::vector<int>(7));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 7; ++j) pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rows[i][j] == '+' ? 0 : 1;
  return CandidateSet(FactorSpec{{2, 2, 2, 2, 2, 2, 2}}, rows_to_mat(pts), "pb8_2pow7");
}

}  // namespace

std::string resolve_data_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("ROBUST_DATA_DIR"); env && *env) return env;
#ifdef ROBUST_DATA_DIR_DEFAULT
  return ROBUST_DATA_DIR_DEFAULT;
#else
  return "data";
#endif
}

std::vector<std::string> catalog_names() {
  return {"bibd_4x6", "oa18_2x3x3x3", "pb8_2pow7", "oa40_2pow20", "oa27_3pow4"};
}

CandidateSet catalog(const std::string& name, const std::string& data_dir) {
  if (name == "bibd_4x6") return make_bibd_4x6();
  if (name == "oa18_2x3x3x3") return make_oa18();
  if (name == "pb8_2pow7") return make_pb8();
  if (name == "oa40_2pow20" || name == "oa27_3pow4") {
    const std::string path = resolve_data_dir(data_dir) + "/" + name + ".csv";
    return read_candidate_csv(path, name);
  }
  throw std::invalid_argument("catalog: unknown name '" + name + "'");
}

CandidateSet read_candidate_csv(const std::string& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open candidate-set file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty candidate-set file: " + path);
  int m = 1;
  for (char c : line)
    if (c == ',') ++m;

  std::vector<std::vector<int>> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stoi(cell));
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("candidate-set row width mismatch in " + path);
    pts.push_back(std::move(row));
  }
  if (pts.empty()) throw std::invalid_argument("candidate-set file has no points: " + path);

  FactorSpec fs;
  fs.levels.assign(static_cast<std::size_t>(m), 0);
  for (const auto& p : pts)
    for (int f = 0; f < m; ++f)
      fs.levels[static_cast<std::size_t>(f)] =
          std::max(fs.levels[static_cast<std::size_t>(f)], p[static_cast<std::size_t>(f)] + 1);
  for (int& s : fs.levels) s = std::max(s, 2);
  return CandidateSet(fs, rows_to_mat(pts), name.empty() ? path : std::move(name));
}

void write_candidate_csv(const CandidateSet& cs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write candidate-set file: " + path);
  for (int f = 0; f < cs.factor_count(); ++f) out << (f ? "," : "") << "f" << (f + 1);
  out << "\n";
  for (int i = 0; i < cs.size(); ++i) {
    for (int f = 0; f < cs.factor_count(); ++f) out << (f ? "," : "") << cs.level(i, f);
    out << "\n";
  }
}

Fraction read_fraction_file(const CandidateSet& cs, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open fraction file: " + path);
  std::vector<int> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    int idx;
    while (ss >> idx) rows.push_back(idx);
  }
  if (rows.empty()) throw std::invalid_argument("fraction file has no rows: " + path);
  return Fraction::of(cs, std::move(rows));
}

void write_fraction_file(const Fraction& frac, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write fraction file: " + path);
  for (int r : frac.rows) out << r << "\n";
}

}  // namespace robust
