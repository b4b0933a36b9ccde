#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "poisson/darboux.hpp"
#include "poisson/spec.hpp"

namespace poisson {

/// Scalar function on phase space with a gradient. When no analytic gradient
/// is given, central differences are used.
class ScalarField {
 public:
  using Value = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  explicit ScalarField(Value value, Gradient gradient = {});

  /// c . x
  static ScalarField linear(Vector coefficients);
  /// (1/2) sum_i w_i x_i^2
  static ScalarField quadratic_diagonal(Vector weights);
  /// x_i, one-based i
  static ScalarField coordinate(int n, int i);

  double value(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const;
  bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }

  /// max_i |analytic - central difference| of the gradient at x; 0 when the
  /// gradient is already numerical.
  double gradient_defect(const Vector& x) const;

 private:
  Value value_;
  Gradient gradient_;
};

using Hamiltonian = ScalarField;

/// x' = J(x) grad H(x).
Vector vector_field(const MultiseparableSpec& spec, const Hamiltonian& H, const Vector& x);

/// {f, g}(x) = grad f^T J(x) grad g.
double bracket(const MultiseparableSpec& spec, const ScalarField& f, const ScalarField& g,
               const Vector& x);

enum class Method { RK4, ImplicitMidpoint };

/// States and invariant drift along a trajectory. Row k holds the state at
/// times[k]; drifts are relative to the initial state.
struct TrajectoryRecord {
  int dim = 0;
  int rank = 0;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> energy_drift;
  std::vector<Vector> casimir_drift;  // n - r entries per row
  std::vector<double> step_sizes;     // 0 for the initial row
  bool domain_exit = false;
  double exit_time = 0.0;  // last valid time when domain_exit is set

  double max_energy_drift() const;
  double max_casimir_drift() const;
};

inline constexpr int kMaxNewtonIterations = 50;
inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr long long kDenseDiagnosticSteps = 1'000'000;

/// Integrates x' = J grad H in x-coordinates. A state leaving the domain
/// truncates the record and sets domain_exit. Implicit midpoint throws
/// MaxNewtonIters if its Newton solve stalls.
TrajectoryRecord integrate_direct(const MultiseparableSpec& spec, const Hamiltonian& H,
                                  const Vector& x0, double dt, long long steps,
                                  Method method = Method::RK4);

/// Integrates in Darboux coordinates z, where the bracket is the constant
/// canonical matrix: implicit midpoint on the first r coordinates with the
/// Casimir coordinates held fixed, each state mapped back through the chart.
TrajectoryRecord integrate_canonical(const MultiseparableSpec& spec, const DarbouxChart& chart,
                                     const Hamiltonian& H, const Vector& x0, double dt,
                                     long long steps);
TrajectoryRecord integrate_canonical(const MultiseparableSpec& spec, const Hamiltonian& H,
                                     const Vector& x0, double dt, long long steps);

/// CSV with header t,x1..xn,dH,dC_{r+1}..dC_n; 17 significant digits,
/// '.' decimal separator regardless of locale.
void write_csv(const TrajectoryRecord& record, std::ostream& out);

}  // namespace poisson
