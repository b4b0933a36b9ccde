#include "poisson/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "poisson/catalog.hpp"
#include "poisson/errors.hpp"

namespace poisson {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ValidationError(field, field + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& item : obj.items())
    if (!known.count(item.key()))
      invalid(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(field, "missing required field");
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(field, "expected a finite number");
  return v;
}

int as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) invalid(field, "expected an integer");
  return j.get<int>();
}

// Bounds may be numbers, "inf"/"-inf" strings, or null (meaning unbounded on
// that side).
double as_bound(const json& j, const std::string& field, double unbounded) {
  if (j.is_null()) return unbounded;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity" || s == "+Infinity") return kInf;
    if (s == "-inf" || s == "-Infinity") return -kInf;
    invalid(field, "expected a number, \"inf\" or \"-inf\"");
  }
  if (!j.is_number()) invalid(field, "expected a number");
  return j.get<double>();
}

Vector as_vector(const json& j, const std::string& field, int expected_size) {
  if (!j.is_array()) invalid(field, "expected an array");
  if (expected_size >= 0 && static_cast<int>(j.size()) != expected_size)
    invalid(field, "expected " + std::to_string(expected_size) + " entries, got " + std::to_string(j.size()));
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = as_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Vector as_bounds(const json& j, const std::string& field, int n, double unbounded) {
  if (!j.is_array()) invalid(field, "expected an array");
  if (static_cast<int>(j.size()) != n)
    invalid(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = as_bound(j[i], field + "[" + std::to_string(i) + "]", unbounded);
  return v;
}

std::map<std::string, double> as_params(const json& j, const std::string& field) {
  if (!j.is_object()) invalid(field, "expected an object");
  std::map<std::string, double> out;
  for (const auto& item : j.items()) out[item.key()] = as_number(item.value(), field + "." + item.key());
  return out;
}

const std::map<std::string, std::vector<std::string>>& factor_parameters() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"constant", {"c"}},         {"linear", {"kappa"}}, {"affine", {"a", "b"}},
      {"exponential", {"a", "b"}}, {"power", {"c", "p"}},
  };
  return table;
}

FactorConfig parse_factor(const json& j, const std::string& field) {
  if (!j.is_object()) invalid(field, "expected an object");
  reject_unknown_keys(j, {"kind", "params", "validity"}, field);
  const json& kind = require(j, "kind", field + ".kind");
  if (!kind.is_string()) invalid(field + ".kind", "expected a string");
  FactorConfig f;
  f.kind = kind.get<std::string>();
  auto it = factor_parameters().find(f.kind);
  if (it == factor_parameters().end()) invalid(field + ".kind", "unknown factor kind '" + f.kind + "'");
  f.params = as_params(require(j, "params", field + ".params"), field + ".params");
  for (const auto& name : it->second)
    if (!f.params.count(name)) invalid(field + ".params." + name, "missing required parameter");
  for (const auto& [name, value] : f.params)
    if (std::find(it->second.begin(), it->second.end(), name) == it->second.end())
      invalid(field + ".params." + name, "unknown parameter for a " + f.kind + " factor");
  if (auto v = j.find("validity"); v != j.end()) {
    if (!v->is_array() || v->size() != 2) invalid(field + ".validity", "expected [lower, upper]");
    f.validity = Interval{as_bound((*v)[0], field + ".validity[0]", -kInf),
                          as_bound((*v)[1], field + ".validity[1]", kInf)};
    if (!(f.validity->lower < f.validity->upper)) invalid(field + ".validity", "empty interval");
  }
  return f;
}

HamiltonianConfig parse_hamiltonian_json(const json& j, int n) {
  const std::string field = "hamiltonian";
  if (!j.is_object()) invalid(field, "expected an object");
  reject_unknown_keys(j, {"kind", "coefficients", "weights", "index"}, field);
  const json& kind = require(j, "kind", field + ".kind");
  if (!kind.is_string()) invalid(field + ".kind", "expected a string");
  HamiltonianConfig h;
  h.kind = kind.get<std::string>();
  if (h.kind == "linear") {
    h.coefficients = as_vector(require(j, "coefficients", field + ".coefficients"), field + ".coefficients", n);
  } else if (h.kind == "quadratic-diagonal") {
    auto w = j.find("weights");
    h.coefficients = w == j.end() ? Vector::Ones(n) : as_vector(*w, field + ".weights", n);
  } else if (h.kind == "coordinate") {
    h.index = as_int(require(j, "index", field + ".index"), field + ".index");
    if (h.index < 1 || h.index > n) invalid(field + ".index", "must lie in 1.." + std::to_string(n));
  } else {
    invalid(field + ".kind", "unknown hamiltonian kind '" + h.kind + "'");
  }
  return h;
}

std::vector<StructureEntry> parse_structure(const json& j, int n) {
  if (!j.is_array() || j.empty()) invalid("structure", "expected a nonempty array");
  std::vector<StructureEntry> out;
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < j.size(); ++e) {
    const std::string field = "structure[" + std::to_string(e) + "]";
    const json& entry = j[e];
    if (!entry.is_object()) invalid(field, "expected an object");
    reject_unknown_keys(entry, {"i", "j", "terms"}, field);
    StructureEntry s;
    s.i = as_int(require(entry, "i", field + ".i"), field + ".i");
    s.j = as_int(require(entry, "j", field + ".j"), field + ".j");
    if (s.i < 1 || s.j > n || !(s.i < s.j)) invalid(field, "need 1 <= i < j <= n");
    if (!seen.insert({s.i, s.j}).second) invalid(field, "duplicate entry");
    const json& terms = require(entry, "terms", field + ".terms");
    if (!terms.is_array()) invalid(field + ".terms", "expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tf = field + ".terms[" + std::to_string(t) + "]";
      if (!terms[t].is_object()) invalid(tf, "expected an object");
      reject_unknown_keys(terms[t], {"coeff", "powers"}, tf);
      Monomial m;
      m.coeff = as_number(require(terms[t], "coeff", tf + ".coeff"), tf + ".coeff");
      const json& powers = require(terms[t], "powers", tf + ".powers");
      if (!powers.is_array() || static_cast<int>(powers.size()) != n)
        invalid(tf + ".powers", "expected " + std::to_string(n) + " exponents");
      for (std::size_t l = 0; l < powers.size(); ++l) {
        const int p = as_int(powers[l], tf + ".powers[" + std::to_string(l) + "]");
        if (p < 0) invalid(tf + ".powers[" + std::to_string(l) + "]", "exponents must be nonnegative");
        m.powers.push_back(p);
      }
      s.terms.push_back(std::move(m));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void line_and_column(std::string_view text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

BoxDomain domain_for(const SystemConfig& c, const BoxDomain& fallback) {
  const Vector lower = c.lower ? *c.lower : fallback.lower();
  const Vector upper = c.upper ? *c.upper : fallback.upper();
  if (c.sample_box) return BoxDomain(lower, upper, BoxDomain(c.sample_box->first, c.sample_box->second));
  if (!c.lower && !c.upper && fallback.has_sample_region() && !fallback.bounded())
    return BoxDomain(lower, upper, fallback.sample_region());
  return BoxDomain(lower, upper);
}

FactorFunction make_factor(const FactorConfig& f) {
  const auto& p = f.params;
  FactorFunction::Kind kind;
  if (f.kind == "constant") kind = factor_kind::Constant{p.at("c")};
  else if (f.kind == "linear") kind = factor_kind::Linear{p.at("kappa")};
  else if (f.kind == "affine") kind = factor_kind::Affine{p.at("a"), p.at("b")};
  else if (f.kind == "exponential") kind = factor_kind::Exponential{p.at("a"), p.at("b")};
  else kind = factor_kind::Power{p.at("c"), p.at("p")};
  return f.validity ? FactorFunction(kind, *f.validity) : FactorFunction(kind);
}

double monomial(const Monomial& m, const Vector& x) {
  double v = m.coeff;
  for (std::size_t l = 0; l < m.powers.size(); ++l)
    for (int k = 0; k < m.powers[l]; ++k) v *= x[static_cast<Eigen::Index>(l)];
  return v;
}

}  // namespace

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::string field, const std::string& what)
    : std::runtime_error(what), field_(std::move(field)) {}

SystemConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 1, column = 1;
    line_and_column(text, e.byte, line, column);
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(line, column, what);
  }
  if (!root.is_object()) invalid("(root)", "expected a JSON object");
  reject_unknown_keys(root,
                      {"version", "name", "catalog", "n", "r", "B", "factors", "structure", "domain",
                       "sample_box", "hamiltonian", "x0"},
                      "");

  SystemConfig c;
  c.version = as_int(require(root, "version", "version"), "version");
  if (c.version != kConfigVersion)
    invalid("version", "unsupported version " + std::to_string(c.version));

  if (auto cat = root.find("catalog"); cat != root.end()) {
    for (const char* key : {"n", "r", "B", "factors", "structure"})
      if (root.contains(key))
        invalid(key, "a catalog reference excludes explicit n, r, B, factors and structure");
    if (!cat->is_object()) invalid("catalog", "expected an object");
    reject_unknown_keys(*cat, {"name", "params"}, "catalog");
    const json& name = require(*cat, "name", "catalog.name");
    if (!name.is_string()) invalid("catalog.name", "expected a string");
    CatalogRef ref{name.get<std::string>(), {}};
    if (auto params = cat->find("params"); params != cat->end()) ref.params = as_params(*params, "catalog.params");
    try {
      const CatalogEntry entry = make_catalog_entry(ref.name, ref.params);
      c.n = entry.spec.dim();
      c.r = entry.spec.rank();
      c.B = entry.spec.B();
    } catch (const Error& e) {
      invalid("catalog", e.what());
    }
    c.name = ref.name;
    c.catalog = std::move(ref);
  } else {
    c.n = as_int(require(root, "n", "n"), "n");
    if (c.n < 2) invalid("n", "dimension must be at least 2");
    const bool structure = root.contains("structure");
    if (structure) {
      for (const char* key : {"r", "B", "factors"})
        if (root.contains(key)) invalid(key, "a structure field excludes r, B and factors");
      c.structure = parse_structure(root["structure"], c.n);
    } else {
      c.r = as_int(require(root, "r", "r"), "r");
      if (c.r % 2 != 0) invalid("r", "rank must be even");
      if (c.r < 0 || c.r > c.n) invalid("r", "rank must lie in 0..n");
      const json& B = require(root, "B", "B");
      if (!B.is_array() || static_cast<int>(B.size()) != c.n * c.n)
        invalid("B", "expected a row-major array of n^2 = " + std::to_string(c.n * c.n) + " entries" +
                         (B.is_array() ? ", got " + std::to_string(B.size()) : ""));
      c.B.resize(c.n, c.n);
      for (int i = 0; i < c.n * c.n; ++i)
        c.B(i / c.n, i % c.n) = as_number(B[i], "B[" + std::to_string(i) + "]");
      const json& factors = require(root, "factors", "factors");
      if (!factors.is_array()) invalid("factors", "expected an array");
      if (static_cast<int>(factors.size()) != c.r)
        invalid("factors", "expected r = " + std::to_string(c.r) + " factors, got " + std::to_string(factors.size()));
      for (std::size_t i = 0; i < factors.size(); ++i)
        c.factors.push_back(parse_factor(factors[i], "factors[" + std::to_string(i) + "]"));
    }
    c.name = "custom";
  }
  if (auto name = root.find("name"); name != root.end()) {
    if (!name->is_string()) invalid("name", "expected a string");
    c.name = name->get<std::string>();
  }

  if (auto dom = root.find("domain"); dom != root.end()) {
    if (!dom->is_object()) invalid("domain", "expected an object");
    reject_unknown_keys(*dom, {"lower", "upper"}, "domain");
    c.lower = as_bounds(require(*dom, "lower", "domain.lower"), "domain.lower", c.n, -kInf);
    c.upper = as_bounds(require(*dom, "upper", "domain.upper"), "domain.upper", c.n, kInf);
    for (int i = 0; i < c.n; ++i)
      if (!((*c.lower)[i] < (*c.upper)[i])) invalid("domain", "empty box in coordinate " + std::to_string(i + 1));
  }
  if (auto box = root.find("sample_box"); box != root.end()) {
    if (!box->is_object()) invalid("sample_box", "expected an object");
    reject_unknown_keys(*box, {"lower", "upper"}, "sample_box");
    Vector lo = as_vector(require(*box, "lower", "sample_box.lower"), "sample_box.lower", c.n);
    Vector hi = as_vector(require(*box, "upper", "sample_box.upper"), "sample_box.upper", c.n);
    for (int i = 0; i < c.n; ++i)
      if (!(lo[i] < hi[i])) invalid("sample_box", "empty box in coordinate " + std::to_string(i + 1));
    c.sample_box = std::make_pair(std::move(lo), std::move(hi));
  }
  if (auto h = root.find("hamiltonian"); h != root.end()) c.hamiltonian = parse_hamiltonian_json(*h, c.n);
  if (auto x0 = root.find("x0"); x0 != root.end()) c.x0 = as_vector(*x0, "x0", c.n);
  return c;
}

SystemConfig catalog_config(const std::string& name, const std::map<std::string, double>& params) {
  json root{{"version", kConfigVersion}, {"catalog", {{"name", name}, {"params", params}}}};
  return parse_config(root.dump());
}

MultiseparableSpec spec_from_config(const SystemConfig& c) {
  if (c.is_structure_field())
    throw ValidationError("structure", "structure: a polynomial field is not a multiseparable spec");
  if (c.is_catalog()) {
    MultiseparableSpec spec = make_catalog_entry(c.catalog->name, c.catalog->params).spec;
    if (!c.lower && !c.upper && !c.sample_box) return spec;
    std::vector<FactorFunction> factors = spec.factors();
    return build_spec(spec.dim(), spec.rank(), spec.B(), std::move(factors), domain_for(c, spec.domain()));
  }
  std::vector<FactorFunction> factors;
  for (std::size_t i = 0; i < c.factors.size(); ++i) {
    try {
      factors.push_back(make_factor(c.factors[i]));
    } catch (const Error& e) {
      invalid("factors[" + std::to_string(i) + "]", e.what());
    }
  }
  const BoxDomain whole(Vector::Constant(c.n, -kInf), Vector::Constant(c.n, kInf));
  return build_spec(c.n, c.r, c.B, std::move(factors), domain_for(c, whole));
}

StructureField field_from_config(const SystemConfig& c) {
  if (!c.is_structure_field()) return StructureField::from_spec(spec_from_config(c));
  const int n = c.n;
  const BoxDomain whole(Vector::Constant(n, -kInf), Vector::Constant(n, kInf));
  auto evaluator = [n, entries = c.structure](const Vector& x) {
    Matrix J = Matrix::Zero(n, n);
    for (const auto& e : entries) {
      double v = 0.0;
      for (const auto& m : e.terms) v += monomial(m, x);
      J(e.i - 1, e.j - 1) = v;
      J(e.j - 1, e.i - 1) = -v;
    }
    return J;
  };
  return StructureField::generic(n, evaluator, domain_for(c, whole));
}

Hamiltonian build_hamiltonian(const HamiltonianConfig& h, int n) {
  if (h.kind == "linear") return ScalarField::linear(h.coefficients);
  if (h.kind == "quadratic-diagonal") return ScalarField::quadratic_diagonal(h.coefficients);
  if (h.kind == "coordinate") return ScalarField::coordinate(n, h.index);
  throw ValidationError("hamiltonian.kind", "hamiltonian.kind: unknown kind '" + h.kind + "'");
}

HamiltonianConfig parse_hamiltonian(std::string_view text, int n) {
  // "quadratic-diagonal[:w1,w2,...]", "linear:c1,c2,...", "coordinate:i" or
  // a JSON object.
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      throw ParseError(1, static_cast<int>(e.byte), "malformed hamiltonian JSON");
    }
    return parse_hamiltonian_json(j, n);
  }
  const auto colon = text.find(':');
  const std::string kind(text.substr(0, colon));
  json j{{"kind", kind}};
  if (colon != std::string_view::npos) {
    std::vector<double> values;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string item(rest.substr(0, comma));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) invalid("hamiltonian", "cannot read number '" + item + "'");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (kind == "coordinate") {
      if (values.size() != 1 || values[0] != std::floor(values[0])) invalid("hamiltonian.index", "expected one integer");
      j["index"] = static_cast<int>(values[0]);
    } else if (kind == "linear") {
      j["coefficients"] = values;
    } else {
      j["weights"] = values;
    }
  }
  return parse_hamiltonian_json(j, n);
}

}  // namespace poisson
