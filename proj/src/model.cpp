#include "robust/model.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "robust/exact_linalg.hpp"

namespace robust {

using nlohmann::json;

std::string coding_name(Coding c) {
  switch (c) {
    case Coding::indicator01: return "indicator01";
    case Coding::plus_minus_one: return "plus_minus_one";
    case Coding::monomial: return "monomial";
  }
  return "?";
}

Coding coding_from_name(const std::string& name) {
  if (name == "indicator01") return Coding::indicator01;
  if (name == "plus_minus_one" || name == "pm1") return Coding::plus_minus_one;
  if (name == "monomial") return Coding::monomial;
  throw std::invalid_argument("unknown coding '" + name + "'");
}

std::string ModelTerm::label() const {
  if (kind == Kind::intercept) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << "*";
    const TermPrimitive& t = parts[i];
    if (t.kind == TermPrimitive::Kind::indicator)
      os << "f" << (t.factor + 1) << "=" << t.level;
    else
      os << "f" << (t.factor + 1) << "^" << t.exponent;
  }
  return os.str();
}

void ModelSpec::validate(const FactorSpec& factors) const {
  if (terms.empty()) throw std::invalid_argument("ModelSpec: empty term list");
  int intercepts = 0;
  for (const ModelTerm& t : terms) {
    if (t.kind == ModelTerm::Kind::intercept) {
      ++intercepts;
      continue;
    }
    if (t.parts.empty()) throw std::invalid_argument("ModelSpec: term without primitives");
    if (t.kind == ModelTerm::Kind::primitive && t.parts.size() != 1)
      throw std::invalid_argument("ModelSpec: primitive term must hold one primitive");
    for (const TermPrimitive& pr : t.parts) {
      if (pr.factor < 0 || pr.factor >= factors.factor_count())
        throw std::invalid_argument("ModelSpec: factor index out of range");
      const int s = factors.levels[static_cast<std::size_t>(pr.factor)];
      if (pr.kind == TermPrimitive::Kind::indicator) {
        // indicator coding keeps levels 0..s-2 (drops the last level)
        if (pr.level < 0 || pr.level > s - 2)
          throw std::invalid_argument("ModelSpec: indicator level must lie in 0..s-2");
      } else {
        if (pr.exponent < 0)
          throw std::invalid_argument("ModelSpec: power exponent must be non-negative");
        if (static_cast<int>(numeric_levels.size()) <= pr.factor ||
            static_cast<int>(numeric_levels[static_cast<std::size_t>(pr.factor)].size()) != s)
          throw std::invalid_argument(
              "ModelSpec: power terms need explicit numeric levels for factor f" +
              std::to_string(pr.factor + 1));
      }
    }
  }
  if (intercepts > 1) throw std::invalid_argument("ModelSpec: more than one intercept");
  if (coding == Coding::plus_minus_one)
    for (int s : factors.levels)
      if (s != 2)
        throw std::invalid_argument("ModelSpec: plus_minus_one needs 2-level factors only");
}

namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

long long eval_primitive(const TermPrimitive& pr, const ModelSpec& spec,
                         const CandidateSet& cs, int point) {
  const int lvl = cs.level(point, pr.factor);
  if (pr.kind == TermPrimitive::Kind::indicator) {
    if (spec.coding == Coding::plus_minus_one) return lvl == pr.level ? 1 : -1;
    return lvl == pr.level ? 1 : 0;
  }
  const long long x =
      spec.numeric_levels[static_cast<std::size_t>(pr.factor)][static_cast<std::size_t>(lvl)];
  return ipow(x, pr.exponent);
}

long long eval_term(const ModelTerm& t, const ModelSpec& spec, const CandidateSet& cs,
                    int point) {
  if (t.kind == ModelTerm::Kind::intercept) return 1;
  long long v = 1;
  for (const TermPrimitive& pr : t.parts) v *= eval_primitive(pr, spec, cs, point);
  return v;
}

}  // namespace

ModelMatrix model_matrix(const CandidateSet& cs, const ModelSpec& spec) {
  spec.validate(cs.factors());
  ModelMatrix mm;
  const int K = cs.size();
  const int p = spec.term_count();
  mm.entries = MatZ(K, p);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < p; ++j)
      mm.entries(i, j) = Bigint(eval_term(spec.terms[static_cast<std::size_t>(j)], spec, cs, i));
  mm.row_labels.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) mm.row_labels[static_cast<std::size_t>(i)] = i;
  for (const ModelTerm& t : spec.terms) mm.col_labels.push_back(t.label());
  mm.rank = rank_of(mm.entries);
  return mm;
}

ModelMatrix submatrix(const ModelMatrix& mm, const Fraction& frac) {
  ModelMatrix out;
  out.entries = MatZ(frac.size(), mm.p());
  out.col_labels = mm.col_labels;
  for (int i = 0; i < frac.size(); ++i) {
    const int r = frac.rows[static_cast<std::size_t>(i)];
    if (r < 0 || r >= mm.n())
      throw std::out_of_range("submatrix: row index out of range");
    out.entries.row(i) = mm.entries.row(r);
    out.row_labels.push_back(mm.row_labels[static_cast<std::size_t>(r)]);
  }
  out.rank = rank_of(out.entries);
  return out;
}

namespace {

void add_main_effects(ModelSpec& spec, const FactorSpec& factors) {
  for (int f = 0; f < factors.factor_count(); ++f)
    for (int l = 0; l <= factors.levels[static_cast<std::size_t>(f)] - 2; ++l) {
      ModelTerm t;
      t.kind = ModelTerm::Kind::primitive;
      t.parts = {{TermPrimitive::Kind::indicator, f, l, 0}};
      spec.terms.push_back(std::move(t));
    }
}

// All pairwise products of the retained indicator columns of the given factors.
void add_interaction(ModelSpec& spec, const FactorSpec& factors, const std::vector<int>& fs) {
  std::vector<int> lvl(fs.size(), 0);
  while (true) {
    ModelTerm t;
    t.kind = ModelTerm::Kind::product;
    for (std::size_t i = 0; i < fs.size(); ++i)
      t.parts.push_back({TermPrimitive::Kind::indicator, fs[i], lvl[i], 0});
    spec.terms.push_back(std::move(t));
    std::size_t i = fs.size();
    while (i-- > 0) {
      if (++lvl[i] <= factors.levels[static_cast<std::size_t>(fs[i])] - 2) break;
      lvl[i] = 0;
      if (i == 0) return;
    }
  }
}

}  // namespace

ModelSpec make_model(const FactorSpec& factors, const std::string& shortcut, Coding coding,
                     std::vector<std::vector<long long>> numeric_levels) {
  factors.validate();
  ModelSpec spec;
  spec.coding = coding;
  spec.numeric_levels = std::move(numeric_levels);
  const int m = factors.factor_count();

  if (shortcut.rfind("poly:", 0) == 0) {
    if (m != 1)
      throw std::invalid_argument("poly:D models are univariate; got " + std::to_string(m) +
                                  " factors");
    const int degree = std::stoi(shortcut.substr(5));
    spec.coding = Coding::monomial;
    spec.terms.push_back(ModelTerm{});  // intercept
    for (int d = 1; d <= degree; ++d) {
      ModelTerm t;
      t.kind = ModelTerm::Kind::primitive;
      t.parts = {{TermPrimitive::Kind::power, 0, 0, d}};
      spec.terms.push_back(std::move(t));
    }
    spec.validate(factors);
    return spec;
  }

  std::string rest = shortcut;
  if (rest.rfind("main", 0) != 0)
    throw std::invalid_argument("unknown model shortcut '" + shortcut + "'");
  rest.erase(0, 4);
  spec.terms.push_back(ModelTerm{});  // intercept
  add_main_effects(spec, factors);

  while (!rest.empty()) {
    if (rest[0] != '+') throw std::invalid_argument("unknown model shortcut '" + shortcut + "'");
    rest.erase(0, 1);
    const auto next = rest.find('+');
    std::string piece = rest.substr(0, next);
    rest.erase(0, piece.size());
    if (piece == "2way" || piece == "3way") {
      for (int f = 0; f < m; ++f)
        for (int g = f + 1; g < m; ++g) add_interaction(spec, factors, {f, g});
      if (piece == "3way")
        for (int f = 0; f < m; ++f)
          for (int g = f + 1; g < m; ++g)
            for (int h = g + 1; h < m; ++h) add_interaction(spec, factors, {f, g, h});
    } else if (piece.rfind("int:", 0) == 0) {
      const std::string pair = piece.substr(4);
      const auto x = pair.find('x');
      if (x == std::string::npos)
        throw std::invalid_argument("interaction shortcut needs the form int:AxB");
      const int a = std::stoi(pair.substr(0, x)) - 1;  // 1-based factor labels
      const int b = std::stoi(pair.substr(x + 1)) - 1;
      if (a == b || a < 0 || b < 0 || a >= m || b >= m)
        throw std::invalid_argument("interaction factors out of range in '" + piece + "'");
      add_interaction(spec, factors, {std::min(a, b), std::max(a, b)});
    } else {
      throw std::invalid_argument("unknown model shortcut piece '" + piece + "'");
    }
  }
  spec.validate(factors);
  return spec;
}

namespace {

json primitive_to_json(const TermPrimitive& pr) {
  json j;
  if (pr.kind == TermPrimitive::Kind::indicator) {
    j["kind"] = "indicator";
    j["factor"] = pr.factor;
    j["level"] = pr.level;
  } else {
    j["kind"] = "power";
    j["factor"] = pr.factor;
    j["exponent"] = pr.exponent;
  }
  return j;
}

TermPrimitive primitive_from_json(const json& j) {
  TermPrimitive pr;
  const std::string kind = j.at("kind");
  pr.factor = j.at("factor");
  if (kind == "indicator") {
    pr.kind = TermPrimitive::Kind::indicator;
    pr.level = j.at("level");
  } else if (kind == "power") {
    pr.kind = TermPrimitive::Kind::power;
    pr.exponent = j.at("exponent");
  } else {
    throw std::invalid_argument("model json: unknown primitive kind '" + kind + "'");
  }
  return pr;
}

}  // namespace

std::string model_to_json_text(const ModelSpec& spec) {
  json j;
  j["coding"] = coding_name(spec.coding);
  j["terms"] = json::array();
  for (const ModelTerm& t : spec.terms) {
    json tj;
    switch (t.kind) {
      case ModelTerm::Kind::intercept:
        tj["kind"] = "intercept";
        break;
      case ModelTerm::Kind::primitive:
        tj = primitive_to_json(t.parts[0]);
        break;
      case ModelTerm::Kind::product:
        tj["kind"] = "product";
        tj["parts"] = json::array();
        for (const TermPrimitive& pr : t.parts) tj["parts"].push_back(primitive_to_json(pr));
        break;
    }
    j["terms"].push_back(tj);
  }
  if (!spec.numeric_levels.empty()) j["numeric_levels"] = spec.numeric_levels;
  return j.dump(2);
}

ModelSpec model_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ModelSpec spec;
  spec.coding = coding_from_name(j.at("coding"));
  for (const json& tj : j.at("terms")) {
    ModelTerm t;
    const std::string kind = tj.at("kind");
    if (kind == "intercept") {
      t.kind = ModelTerm::Kind::intercept;
    } else if (kind == "product") {
      t.kind = ModelTerm::Kind::product;
      for (const json& pj : tj.at("parts")) t.parts.push_back(primitive_from_json(pj));
    } else {
      t.kind = ModelTerm::Kind::primitive;
      t.parts.push_back(primitive_from_json(tj));
    }
    spec.terms.push_back(std::move(t));
  }
  if (j.contains("numeric_levels")) {
    for (const json& row : j.at("numeric_levels")) {
      std::vector<long long> lv;
      for (const json& x : row) {
        if (!x.is_number_integer())
          throw std::invalid_argument("model json: numeric levels must be integers");
        lv.push_back(x.get<long long>());
      }
      spec.numeric_levels.push_back(std::move(lv));
    }
  }
  return spec;
}

ModelSpec read_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model spec: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json_text(ss.str());
}

void write_model_json(const ModelSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write model spec: " + path);
  out << model_to_json_text(spec) << "\n";
}

}  // namespace robust
