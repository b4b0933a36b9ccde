#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "poisson/dynamics.hpp"
#include "poisson/spec.hpp"
#include "poisson/structure_field.hpp"

namespace poisson {

/// Malformed JSON. Line and column are one-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed JSON that does not describe a valid system. `field` is a path
/// such as "factors[1].kind".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct FactorConfig {
  std::string kind;  // constant, linear, affine, exponential, power
  std::map<std::string, double> params;
  std::optional<Interval> validity;
};

struct CatalogRef {
  std::string name;
  std::map<std::string, double> params;
};

struct HamiltonianConfig {
  std::string kind;     // linear, quadratic-diagonal, coordinate
  Vector coefficients;  // linear coefficients or quadratic weights
  int index = 0;        // one-based, for coordinate
};

/// One monomial c * prod_l x_l^{powers_l} of a polynomial structure entry.
struct Monomial {
  double coeff = 0.0;
  std::vector<int> powers;
};

/// Polynomial entry J_ij (i < j, one-based); J_ji = -J_ij.
struct StructureEntry {
  int i = 0;
  int j = 0;
  std::vector<Monomial> terms;
};

/// A system description. Exactly one of: a catalog reference, an explicit
/// multiseparable spec (B, factors), or a polynomial structure field.
struct SystemConfig {
  int version = 1;
  std::string name;  // catalog name, or the "name" field, or "custom"
  std::optional<CatalogRef> catalog;

  int n = 0;
  int r = 0;
  Matrix B;  // n x n, from a row-major array
  std::vector<FactorConfig> factors;
  std::vector<StructureEntry> structure;

  std::optional<Vector> lower;
  std::optional<Vector> upper;
  std::optional<std::pair<Vector, Vector>> sample_box;

  std::optional<HamiltonianConfig> hamiltonian;
  std::optional<Vector> x0;

  bool is_catalog() const { return catalog.has_value(); }
  bool is_structure_field() const { return !structure.empty(); }
};

inline constexpr int kConfigVersion = 1;

SystemConfig parse_config(std::string_view text);

SystemConfig catalog_config(const std::string& name, const std::map<std::string, double>& params);

/// The multiseparable spec the config describes. Throws ValidationError for
/// polynomial structure configs; library errors propagate.
MultiseparableSpec spec_from_config(const SystemConfig& config);

/// The field to verify: analytic partials for specs, finite differences for
/// polynomial structures.
StructureField field_from_config(const SystemConfig& config);

Hamiltonian build_hamiltonian(const HamiltonianConfig& config, int n);
HamiltonianConfig parse_hamiltonian(std::string_view text, int n);

}  // namespace poisson
