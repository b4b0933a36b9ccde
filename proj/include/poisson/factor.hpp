#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "poisson/types.hpp"

namespace poisson {

namespace factor_kind {

struct Constant {
  double c;
};

struct Linear {
  double kappa;
};

/// a*y + b
struct Affine {
  double a;
  double b;
};

/// a*exp(b*y)
struct Exponential {
  double a;
  double b;
};

/// c*y^p on y > 0
struct Power {
  double c;
  double p;
};

/// User-supplied factor. `primitive`, when present, is any G with G' = 1/phi;
/// otherwise the reciprocal antiderivative is computed by quadrature.
struct Custom {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> primitive;
};

}  // namespace factor_kind

/// Result of a nonvanishing check on an interval.
struct NonvanishingCheck {
  bool ok = true;
  bool heuristic = false;       // true when certified by sampling only
  std::optional<double> witness;  // a point where the factor fails
};

/// A univariate C^1 factor phi(y) that is nonvanishing on its validity
/// interval. Provides the value, the derivative, F(y) = int_anchor^y dt/phi(t)
/// and the inverse of F.
class FactorFunction {
 public:
  using Kind = std::variant<factor_kind::Constant, factor_kind::Linear, factor_kind::Affine,
                            factor_kind::Exponential, factor_kind::Power, factor_kind::Custom>;

  explicit FactorFunction(Kind kind);
  FactorFunction(Kind kind, Interval validity);

  static FactorFunction constant(double c) { return FactorFunction(factor_kind::Constant{c}); }
  static FactorFunction linear(double kappa) { return FactorFunction(factor_kind::Linear{kappa}); }
  static FactorFunction affine(double a, double b) {
    return FactorFunction(factor_kind::Affine{a, b});
  }
  static FactorFunction exponential(double a, double b) {
    return FactorFunction(factor_kind::Exponential{a, b});
  }
  static FactorFunction power(double c, double p) {
    return FactorFunction(factor_kind::Power{c, p});
  }
  static FactorFunction custom(factor_kind::Custom custom, Interval validity);

  const Kind& kind() const noexcept { return kind_; }
  const Interval& validity() const noexcept { return validity_; }
  bool is_custom() const noexcept;
  bool has_closed_form_antiderivative() const noexcept;

  /// "constant", "linear", "affine", "exponential", "power" or "custom".
  std::string kind_name() const;
  /// Named parameters, e.g. {"kappa": 2} for a linear factor. Empty for custom.
  std::map<std::string, double> parameters() const;

  double value(double y) const;
  double derivative(double y) const;

  /// F(y) = int_anchor^y dt / phi(t). Throws OutOfValidity when y or anchor
  /// is outside the validity interval or the segment crosses a zero of phi.
  double reciprocal_antiderivative(double y, double anchor) const;

  /// The y with F(y) = z. Throws OutOfRange when z is not attained.
  double invert_antiderivative(double z, double anchor) const;

  /// Image of an interval under F, using the monotone limits of F at the
  /// interval endpoints. Unknown limits (custom factors) come back infinite.
  Interval antiderivative_image(const Interval& ys, double anchor) const;

  /// Checks that phi has no zero on the open interval `ys` and that `ys`
  /// lies inside the validity interval. Analytic for built-in kinds; custom
  /// factors are sampled at 1000 interior points plus the finite endpoints.
  NonvanishingCheck check_nonvanishing(const Interval& ys) const;

  /// Location of the single zero of a built-in factor, if it has one.
  std::optional<double> zero() const;

 private:
  void require_valid(double y, const char* what) const;
  void require_segment(double y, double anchor) const;
  double closed_form_antiderivative(double y, double anchor) const;
  double numeric_antiderivative(double y, double anchor) const;
  double numeric_inverse(double z, double anchor) const;

  Kind kind_;
  Interval validity_;
};

}  // namespace poisson
