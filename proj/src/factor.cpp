#include "poisson/factor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "poisson/errors.hpp"

namespace poisson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVanishTolerance = 1e-12;
constexpr double kQuadratureTolerance = 1e-12;
constexpr double kInverseTolerance = 1e-12;
constexpr int kInverseTableSize = 64;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Interval default_validity(const FactorFunction::Kind& kind) {
  if (std::holds_alternative<factor_kind::Power>(kind)) return {0.0, kInf};
  return whole_line();
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void validate_parameters(const FactorFunction::Kind& kind) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  std::visit(Overloaded{
                 [&](const factor_kind::Constant& k) {
                   if (k.c == 0.0 || !std::isfinite(k.c)) fail("constant factor must be nonzero");
                 },
                 [&](const factor_kind::Linear& k) {
                   if (k.kappa == 0.0 || !std::isfinite(k.kappa))
                     fail("linear factor needs a nonzero slope");
                 },
                 [&](const factor_kind::Affine& k) {
                   if (!std::isfinite(k.a) || !std::isfinite(k.b) || (k.a == 0.0 && k.b == 0.0))
                     fail("affine factor is identically zero");
                 },
                 [&](const factor_kind::Exponential& k) {
                   if (k.a == 0.0 || !std::isfinite(k.a) || !std::isfinite(k.b))
                     fail("exponential factor needs a nonzero amplitude");
                 },
                 [&](const factor_kind::Power& k) {
                   if (k.c == 0.0 || !std::isfinite(k.c) || !std::isfinite(k.p))
                     fail("power factor needs a nonzero coefficient");
                 },
                 [&](const factor_kind::Custom& k) {
                   if (!k.value || !k.derivative)
                     fail("custom factor needs value and derivative functions");
                 },
             },
             kind);
}

// Maps t in (0,1) onto an open interval, possibly unbounded.
double spread(const Interval& ys, double t) {
  if (std::isfinite(ys.lower) && std::isfinite(ys.upper)) return ys.lower + t * ys.width();
  if (std::isfinite(ys.lower)) return ys.lower + t / (1.0 - t);
  if (std::isfinite(ys.upper)) return ys.upper - (1.0 - t) / t;
  return std::tan(std::numbers::pi * (t - 0.5));
}

}  // namespace

FactorFunction::FactorFunction(Kind kind) : FactorFunction(kind, default_validity(kind)) {}

FactorFunction::FactorFunction(Kind kind, Interval validity)
    : kind_(std::move(kind)), validity_(validity) {
  validate_parameters(kind_);
  if (!(validity_.lower < validity_.upper))
    throw Error(ErrorCode::InvalidArgument, "factor validity interval is empty");
  const Interval natural = default_validity(kind_);
  if (validity_.lower < natural.lower || validity_.upper > natural.upper)
    throw Error(ErrorCode::InvalidArgument, "validity interval exceeds the factor's natural domain");
}

FactorFunction FactorFunction::custom(factor_kind::Custom custom, Interval validity) {
  return FactorFunction(Kind(std::move(custom)), validity);
}

bool FactorFunction::is_custom() const noexcept {
  return std::holds_alternative<factor_kind::Custom>(kind_);
}

bool FactorFunction::has_closed_form_antiderivative() const noexcept {
  if (const auto* c = std::get_if<factor_kind::Custom>(&kind_)) return static_cast<bool>(c->primitive);
  return true;
}

std::string FactorFunction::kind_name() const {
  return std::visit(Overloaded{
                        [](const factor_kind::Constant&) { return std::string("constant"); },
                        [](const factor_kind::Linear&) { return std::string("linear"); },
                        [](const factor_kind::Affine&) { return std::string("affine"); },
                        [](const factor_kind::Exponential&) { return std::string("exponential"); },
                        [](const factor_kind::Power&) { return std::string("power"); },
                        [](const factor_kind::Custom&) { return std::string("custom"); },
                    },
                    kind_);
}

std::map<std::string, double> FactorFunction::parameters() const {
  return std::visit(
      Overloaded{
          [](const factor_kind::Constant& k) { return std::map<std::string, double>{{"c", k.c}}; },
          [](const factor_kind::Linear& k) {
            return std::map<std::string, double>{{"kappa", k.kappa}};
          },
          [](const factor_kind::Affine& k) {
            return std::map<std::string, double>{{"a", k.a}, {"b", k.b}};
          },
          [](const factor_kind::Exponential& k) {
            return std::map<std::string, double>{{"a", k.a}, {"b", k.b}};
          },
          [](const factor_kind::Power& k) {
            return std::map<std::string, double>{{"c", k.c}, {"p", k.p}};
          },
          [](const factor_kind::Custom&) { return std::map<std::string, double>{}; },
      },
      kind_);
}

void FactorFunction::require_valid(double y, const char* what) const {
  if (!std::isfinite(y) || !validity_.contains(y)) {
    throw Error(ErrorCode::OutOfValidity, std::string(what) + " " + format(y) +
                                              " is outside the validity interval (" +
                                              format(validity_.lower) + ", " +
                                              format(validity_.upper) + ") of a " + kind_name() +
                                              " factor");
  }
}

void FactorFunction::require_segment(double y, double anchor) const {
  require_valid(y, "argument");
  require_valid(anchor, "anchor");
  if (auto z = zero()) {
    if (std::min(y, anchor) <= *z && *z <= std::max(y, anchor)) {
      throw Error(ErrorCode::OutOfValidity, "segment [" + format(std::min(y, anchor)) + ", " +
                                                format(std::max(y, anchor)) +
                                                "] contains the zero " + format(*z) +
                                                " of a " + kind_name() + " factor");
    }
  }
}

double FactorFunction::value(double y) const {
  require_valid(y, "argument");
  return std::visit(Overloaded{
                        [](const factor_kind::Constant& k) { return k.c; },
                        [y](const factor_kind::Linear& k) { return k.kappa * y; },
                        [y](const factor_kind::Affine& k) { return k.a * y + k.b; },
                        [y](const factor_kind::Exponential& k) { return k.a * std::exp(k.b * y); },
                        [y](const factor_kind::Power& k) { return k.c * std::pow(y, k.p); },
                        [y](const factor_kind::Custom& k) { return k.value(y); },
                    },
                    kind_);
}

double FactorFunction::derivative(double y) const {
  require_valid(y, "argument");
  return std::visit(
      Overloaded{
          [](const factor_kind::Constant&) { return 0.0; },
          [](const factor_kind::Linear& k) { return k.kappa; },
          [](const factor_kind::Affine& k) { return k.a; },
          [y](const factor_kind::Exponential& k) { return k.a * k.b * std::exp(k.b * y); },
          [y](const factor_kind::Power& k) {
            return k.p == 0.0 ? 0.0 : k.c * k.p * std::pow(y, k.p - 1.0);
          },
          [y](const factor_kind::Custom& k) { return k.derivative(y); },
      },
      kind_);
}

std::optional<double> FactorFunction::zero() const {
  if (std::holds_alternative<factor_kind::Linear>(kind_)) return 0.0;
  if (const auto* k = std::get_if<factor_kind::Affine>(&kind_); k && k->a != 0.0)
    return -k->b / k->a;
  return std::nullopt;
}

// Also used at interval endpoints, where y may be infinite or sit on the
// zero of phi; IEEE arithmetic then yields the one-sided limit of F.
double FactorFunction::closed_form_antiderivative(double y, double anchor) const {
  return std::visit(
      Overloaded{
          [&](const factor_kind::Constant& k) { return (y - anchor) / k.c; },
          [&](const factor_kind::Linear& k) { return std::log(y / anchor) / k.kappa; },
          [&](const factor_kind::Affine& k) {
            if (k.a == 0.0) return (y - anchor) / k.b;
            return std::log((k.a * y + k.b) / (k.a * anchor + k.b)) / k.a;
          },
          [&](const factor_kind::Exponential& k) {
            if (k.b == 0.0) return (y - anchor) / k.a;
            return -std::expm1(-k.b * (y - anchor)) * std::exp(-k.b * anchor) / (k.a * k.b);
          },
          [&](const factor_kind::Power& k) {
            if (k.p == 1.0) return std::log(y / anchor) / k.c;
            const double q = 1.0 - k.p;
            return (std::pow(y, q) - std::pow(anchor, q)) / (k.c * q);
          },
          [&](const factor_kind::Custom& k) { return k.primitive(y) - k.primitive(anchor); },
      },
      kind_);
}

double FactorFunction::numeric_antiderivative(double y, double anchor) const {
  if (y == anchor) return 0.0;
  const auto& custom = std::get<factor_kind::Custom>(kind_);
  auto integrand = [&](double t) { return 1.0 / custom.value(t); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Boost measures tolerance relative to the L1 norm; convert the absolute target.
  double error = 0.0;
  double l1 = 0.0;
  GK::integrate(integrand, anchor, y, 0, 0.0, &error, &l1);
  const double rel_tol =
      std::clamp(0.25 * kQuadratureTolerance / std::max(l1, std::numeric_limits<double>::min()),
                 4.0 * std::numeric_limits<double>::epsilon(), 1e-6);
  const double result = GK::integrate(integrand, anchor, y, 15, rel_tol, &error);
  const double allowed =
      kQuadratureTolerance + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(result);
  if (!std::isfinite(result) || !(error <= allowed)) {
    throw Error(ErrorCode::QuadratureFailure,
                "quadrature of 1/phi on [" + format(anchor) + ", " + format(y) +
                    "] did not reach tolerance (error estimate " + format(error) + ")");
  }
  return result;
}

double FactorFunction::reciprocal_antiderivative(double y, double anchor) const {
  require_segment(y, anchor);
  if (has_closed_form_antiderivative()) return closed_form_antiderivative(y, anchor);
  return numeric_antiderivative(y, anchor);
}

double FactorFunction::invert_antiderivative(double z, double anchor) const {
  require_valid(anchor, "anchor");
  if (!std::isfinite(z)) throw Error(ErrorCode::OutOfRange, "antiderivative value is not finite");
  if (is_custom()) return numeric_inverse(z, anchor);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double y = std::visit(
      Overloaded{
          [&](const factor_kind::Constant& k) { return anchor + k.c * z; },
          [&](const factor_kind::Linear& k) { return anchor * std::exp(k.kappa * z); },
          [&](const factor_kind::Affine& k) {
            if (k.a == 0.0) return anchor + k.b * z;
            return ((k.a * anchor + k.b) * std::exp(k.a * z) - k.b) / k.a;
          },
          [&](const factor_kind::Exponential& k) {
            if (k.b == 0.0) return anchor + k.a * z;
            const double arg = -k.a * k.b * z * std::exp(k.b * anchor);
            if (!(arg > -1.0)) return nan;
            return anchor - std::log1p(arg) / k.b;
          },
          [&](const factor_kind::Power& k) {
            if (k.p == 1.0) return anchor * std::exp(k.c * z);
            const double q = 1.0 - k.p;
            const double base = std::pow(anchor, q) + k.c * q * z;
            if (!(base > 0.0)) return nan;
            return std::pow(base, 1.0 / q);
          },
          [&](const factor_kind::Custom&) { return nan; },
      },
      kind_);

  bool ok = std::isfinite(y) && validity_.contains(y);
  if (ok) {
    if (auto z0 = zero()) ok = (y - *z0) * (anchor - *z0) > 0.0;
  }
  if (!ok) {
    throw Error(ErrorCode::OutOfRange, "value " + format(z) +
                                           " is outside the range of the reciprocal "
                                           "antiderivative of a " +
                                           kind_name() + " factor");
  }
  return y;
}

double FactorFunction::numeric_inverse(double z, double anchor) const {
  auto F = [&](double y) { return reciprocal_antiderivative(y, anchor); };
  auto dF = [&](double y) { return 1.0 / value(y); };
  if (z == 0.0) return anchor;

  // F is increasing where phi > 0, decreasing where phi < 0. Walk from the
  // anchor in the direction that moves F toward z until it is bracketed.
  const double sign = value(anchor) > 0.0 ? 1.0 : -1.0;
  const double direction = (z > 0.0 ? 1.0 : -1.0) * sign;

  double near = anchor;
  double far = anchor;
  double step = 1.0;
  bool bracketed = false;
  for (int i = 0; i < 200 && !bracketed; ++i) {
    double candidate = anchor + direction * step;
    const double edge = direction > 0 ? validity_.upper : validity_.lower;
    if (std::isfinite(edge) && direction * (candidate - edge) >= 0.0) {
      // approach the validity edge geometrically, never touching it
      candidate = far + 0.5 * (edge - far);
      if (candidate == far) break;
    }
    near = far;
    far = candidate;
    const double f = F(far);
    if ((f - z) * (z > 0.0 ? 1.0 : -1.0) >= 0.0) bracketed = true;
    step *= 2.0;
  }
  if (!bracketed) {
    throw Error(ErrorCode::OutOfRange,
                "value " + format(z) + " is outside the range of the custom antiderivative");
  }

  // Coarse monotone table over the bracket; pick the cell containing z.
  double lo = std::min(near, far);
  double hi = std::max(near, far);
  std::array<double, kInverseTableSize> ys{};
  std::array<double, kInverseTableSize> fs{};
  for (int i = 0; i < kInverseTableSize; ++i) {
    ys[i] = lo + (hi - lo) * i / (kInverseTableSize - 1);
    fs[i] = (ys[i] == anchor) ? 0.0 : F(ys[i]);
  }
  for (int i = 0; i + 1 < kInverseTableSize; ++i) {
    if ((fs[i] - z) * (fs[i + 1] - z) <= 0.0) {
      lo = ys[i];
      hi = ys[i + 1];
      break;
    }
  }

  // Safeguarded Newton: fall back to bisection whenever the step leaves
  // the bracket.
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = F(y) - z;
    if (std::abs(r) <= kInverseTolerance) return y;
    // left of the root iff F(y) is on the side of z that F starts from
    if (r * sign < 0.0) {
      lo = y;
    } else {
      hi = y;
    }
    double next = y - r / dF(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == y || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(y)) {
      if (std::abs(F(next) - z) <= 10.0 * kInverseTolerance) return next;
      break;
    }
    y = next;
  }
  throw Error(ErrorCode::NoConvergence,
              "inversion of the custom antiderivative did not converge for " + format(z));
}

Interval FactorFunction::antiderivative_image(const Interval& ys, double anchor) const {
  auto limit = [&](double y) {
    if (has_closed_form_antiderivative() && !is_custom()) {
      return closed_form_antiderivative(y, anchor);
    }
    if (std::isfinite(y) && validity_.contains(y)) return reciprocal_antiderivative(y, anchor);
    return std::numeric_limits<double>::quiet_NaN();
  };
  double a = limit(ys.lower);
  double b = limit(ys.upper);
  if (std::isnan(a) || std::isnan(b)) return whole_line();
  return {std::min(a, b), std::max(a, b)};
}

NonvanishingCheck FactorFunction::check_nonvanishing(const Interval& ys) const {
  NonvanishingCheck check;
  if (ys.lower < validity_.lower) {
    check.ok = false;
    check.witness = validity_.lower;
    return check;
  }
  if (ys.upper > validity_.upper) {
    check.ok = false;
    check.witness = validity_.upper;
    return check;
  }
  if (!is_custom()) {
    if (auto z = zero(); z && ys.contains(*z)) {
      check.ok = false;
      check.witness = *z;
    }
    return check;
  }

  check.heuristic = true;
  const auto& custom = std::get<factor_kind::Custom>(kind_);
  double prev_y = std::numeric_limits<double>::quiet_NaN();
  double prev_v = 0.0;
  auto probe = [&](double y) {
    const double v = custom.value(y);
    if (!std::isfinite(v) || std::abs(v) <= kVanishTolerance) {
      check.ok = false;
      check.witness = y;
    } else if (!std::isnan(prev_y) && (v > 0.0) != (prev_v > 0.0)) {
      double a = prev_y, b = y;
      for (int i = 0; i < 100 && a != b; ++i) {
        const double m = 0.5 * (a + b);
        if ((custom.value(m) > 0.0) == (prev_v > 0.0)) a = m;
        else b = m;
      }
      check.ok = false;
      check.witness = 0.5 * (a + b);
    }
    prev_y = y;
    prev_v = v;
    return check.ok;
  };
  constexpr int kSamples = 1000;
  if (std::isfinite(ys.lower) && validity_.contains(ys.lower) && !probe(ys.lower)) return check;
  for (int i = 1; i <= kSamples; ++i) {
    if (!probe(spread(ys, static_cast<double>(i) / (kSamples + 1)))) return check;
  }
  if (std::isfinite(ys.upper) && validity_.contains(ys.upper)) probe(ys.upper);
  return check;
}

}  // namespace poisson
