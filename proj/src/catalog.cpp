#include "poisson/catalog.hpp"

#include <cmath>
#include <limits>

#include "poisson/errors.hpp"

namespace poisson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kParameterTolerance = 1e-12;

using Pattern = std::vector<std::vector<PatternEntry>>;

Pattern zero_pattern(int n) { return Pattern(n, std::vector<PatternEntry>(n)); }

void set_skew(Pattern& pattern, int i, int j, PatternEntry entry) {
  pattern[i][j] = entry;
  entry.sign = -entry.sign;
  pattern[j][i] = entry;
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params, std::initializer_list<const char*> known,
                    const std::string& system) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + key + "' for " + system);
  }
}

int integer_param(double v, const std::string& key) {
  if (!std::isfinite(v) || v != std::round(v))
    throw Error(ErrorCode::InvalidArgument, "parameter " + key + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

MultiseparableSpec kermack_mckendrick(double R, double kappa1, double kappa2) {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  if (!(std::abs(kappa1 * kappa2 - R) <= kParameterTolerance))
    throw Error(ErrorCode::ParameterMismatch, "kappa1 * kappa2 must equal R");

  Matrix B(3, 3);
  B << 1, 0, 0,
       0, 1, 0,
       1, 1, 1;
  const Vector lower = Vector::Zero(3);
  const Vector upper = Vector::Constant(3, kInf);
  BoxDomain domain(lower, upper, BoxDomain(Vector::Constant(3, 0.25), Vector::Constant(3, 2.0)));
  return build_spec(3, 2, B, {FactorFunction::linear(kappa1), FactorFunction::linear(kappa2)},
                    std::move(domain));
}

MultiseparableSpec toda(int N) {
  if (N < 2) throw Error(ErrorCode::InvalidN, "Toda lattice needs N >= 2");
  const int n = 2 * N - 1;
  Matrix B = Matrix::Zero(n, n);
  for (int i = 0; i < N - 1; ++i) {
    B(2 * i, i) = -1.0;
    for (int j = 0; j <= i; ++j) B(2 * i + 1, N - 1 + j) = 1.0;
  }
  for (int j = 0; j < N; ++j) B(n - 1, N - 1 + j) = 1.0;

  std::vector<FactorFunction> factors;
  for (int i = 0; i < N - 1; ++i) {
    factors.push_back(FactorFunction::linear(-1.0));
    factors.push_back(FactorFunction::constant(1.0));
  }

  Vector lower(n), upper(n), sample_lower(n), sample_upper(n);
  for (int i = 0; i < n; ++i) {
    const bool alpha = i < N - 1;
    lower[i] = alpha ? 0.0 : -kInf;
    upper[i] = kInf;
    sample_lower[i] = alpha ? 0.25 : -1.0;
    sample_upper[i] = alpha ? 2.0 : 1.0;
  }
  BoxDomain domain(lower, upper, BoxDomain(sample_lower, sample_upper));
  return build_spec(n, n - 1, B, std::move(factors), std::move(domain));
}

MultiseparableSpec constant_symplectic(int s, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidRank, "dimension must be at least 2");
  if (s < 0 || 2 * s > n) throw Error(ErrorCode::InvalidRank, "need 0 <= 2s <= n");
  std::vector<FactorFunction> factors(2 * s, FactorFunction::constant(1.0));
  BoxDomain domain(Vector::Constant(n, -kInf), Vector::Constant(n, kInf),
                   BoxDomain(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)));
  return build_spec(n, 2 * s, Matrix::Identity(n, n), std::move(factors), std::move(domain));
}

double PatternEntry::evaluate(const Vector& x, double R) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Unit: return sign;
    case Kind::Alpha: return sign * x[alpha - 1];
    case Kind::RX1X2: return sign * R * x[0] * x[1];
  }
  return 0.0;
}

Matrix CatalogEntry::expected_structure(const Vector& x) const {
  const int n = static_cast<int>(pattern.size());
  const double R = param(params, "R", 1.0);
  Matrix J(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J(i, j) = pattern[i][j].evaluate(x, R);
  return J;
}

std::vector<std::string> catalog_names() { return {"kmk", "toda", "symplectic"}; }

CatalogEntry make_catalog_entry(const std::string& name, const std::map<std::string, double>& params) {
  using Kind = PatternEntry::Kind;
  if (name == "kmk") {
    reject_unknown(params, {"R", "kappa1", "kappa2"}, name);
    const double R = param(params, "R", 1.0);
    const double k1 = params.count("kappa1")  ? params.at("kappa1")
                      : params.count("kappa2") ? R / params.at("kappa2")
                                               : 1.0;
    const double k2 = param(params, "kappa2", R / k1);
    Pattern pattern = zero_pattern(3);
    set_skew(pattern, 0, 1, {Kind::RX1X2, 1.0, 0});
    set_skew(pattern, 0, 2, {Kind::RX1X2, -1.0, 0});
    set_skew(pattern, 1, 2, {Kind::RX1X2, 1.0, 0});
    return CatalogEntry{name,
                        {{"R", R}, {"kappa1", k1}, {"kappa2", k2}},
                        kermack_mckendrick(R, k1, k2),
                        std::move(pattern),
                        2,
                        {Vector::Ones(3)}};
  }
  if (name == "toda") {
    reject_unknown(params, {"N"}, name);
    const int N = integer_param(param(params, "N", 3.0), "N");
    MultiseparableSpec spec = toda(N);
    const int n = 2 * N - 1;
    Pattern pattern = zero_pattern(n);
    for (int i = 0; i < N - 1; ++i) {
      set_skew(pattern, i, i + N - 1, {Kind::Alpha, -1.0, i + 1});
      set_skew(pattern, i, i + N, {Kind::Alpha, 1.0, i + 1});
    }
    Vector casimir = Vector::Zero(n);
    casimir.tail(N).setOnes();
    return CatalogEntry{name, {{"N", static_cast<double>(N)}}, std::move(spec), std::move(pattern),
                        n - 1, {casimir}};
  }
  if (name == "symplectic") {
    reject_unknown(params, {"s", "n"}, name);
    const int s = integer_param(param(params, "s", 1.0), "s");
    const int n = integer_param(param(params, "n", 3.0), "n");
    MultiseparableSpec spec = constant_symplectic(s, n);
    Pattern pattern = zero_pattern(n);
    for (int p = 0; p < s; ++p) set_skew(pattern, 2 * p, 2 * p + 1, {Kind::Unit, 1.0, 0});
    std::vector<Vector> cas;
    for (int p = 2 * s; p < n; ++p) cas.push_back(Vector::Unit(n, p));
    return CatalogEntry{name,
                        {{"s", static_cast<double>(s)}, {"n", static_cast<double>(n)}},
                        std::move(spec),
                        std::move(pattern),
                        2 * s,
                        std::move(cas)};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown catalog system '" + name + "'");
}

}  // namespace poisson
