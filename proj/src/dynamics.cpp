#include "poisson/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "poisson/errors.hpp"

namespace poisson {

namespace {

Vector numeric_gradient(const ScalarField::Value& f, const Vector& x) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    probe[i] = x[i] + h;
    const double plus = f(probe);
    probe[i] = x[i] - h;
    const double minus = f(probe);
    probe[i] = x[i];
    g[i] = (plus - minus) / (2.0 * h);
  }
  return g;
}

using Flow = std::function<Vector(const Vector&)>;

// Solves u1 = u0 + dt * f((u0 + u1) / 2) by Newton with a finite-difference
// Jacobian of f.
Vector implicit_midpoint_step(const Flow& f, const Vector& u0, double dt) {
  const auto m = u0.size();
  Vector u1 = u0 + dt * f(u0);
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Vector mid = 0.5 * (u0 + u1);
    const Vector fm = f(mid);
    const Vector G = u1 - u0 - dt * fm;
    const double scale = std::max(1.0, u1.cwiseAbs().maxCoeff());
    if (G.cwiseAbs().maxCoeff() <= kNewtonTolerance * scale) return u1;

    Matrix Df(m, m);
    Vector probe = mid;
    for (Eigen::Index l = 0; l < m; ++l) {
      const double h = 1e-7 * (1.0 + std::abs(mid[l]));
      probe[l] = mid[l] + h;
      const Vector plus = f(probe);
      probe[l] = mid[l] - h;
      const Vector minus = f(probe);
      probe[l] = mid[l];
      Df.col(l) = (plus - minus) / (2.0 * h);
    }
    const Matrix jac = Matrix::Identity(m, m) - 0.5 * dt * Df;
    u1 -= jac.partialPivLu().solve(G);
  }
  const Vector G = u1 - u0 - dt * f(0.5 * (u0 + u1));
  if (G.cwiseAbs().maxCoeff() <= kNewtonTolerance * std::max(1.0, u1.cwiseAbs().maxCoeff()))
    return u1;
  throw Error(ErrorCode::MaxNewtonIters, "implicit midpoint Newton solve did not converge in " +
                                             std::to_string(kMaxNewtonIterations) + " iterations");
}

Vector rk4_step(const Flow& f, const Vector& x, double dt) {
  const Vector k1 = f(x);
  const Vector k2 = f(x + 0.5 * dt * k1);
  const Vector k3 = f(x + 0.5 * dt * k2);
  const Vector k4 = f(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

class Recorder {
 public:
  Recorder(const MultiseparableSpec& spec, const Hamiltonian& H, const Vector& x0, long long steps)
      : spec_(spec), H_(H), H0_(H.value(x0)), C0_(casimir_values(x0)) {
    record_.dim = spec.dim();
    record_.rank = spec.rank();
    stride_ = steps <= kDenseDiagnosticSteps ? 1 : (steps + kDenseDiagnosticSteps - 1) / kDenseDiagnosticSteps;
    push(0.0, x0, 0.0);
  }

  void step(long long k, long long steps, double t, const Vector& x, double dt) {
    if (k % stride_ == 0 || k == steps) push(t, x, dt);
  }

  void exit(double last_valid_time) {
    record_.domain_exit = true;
    record_.exit_time = last_valid_time;
  }

  TrajectoryRecord finish() { return std::move(record_); }

 private:
  Vector casimir_values(const Vector& x) const {
    return spec_.B().bottomRows(spec_.dim() - spec_.rank()) * x;
  }

  void push(double t, const Vector& x, double dt) {
    record_.times.push_back(t);
    record_.states.push_back(x);
    record_.energy_drift.push_back(H_.value(x) - H0_);
    record_.casimir_drift.push_back(casimir_values(x) - C0_);
    record_.step_sizes.push_back(dt);
  }

  const MultiseparableSpec& spec_;
  const Hamiltonian& H_;
  double H0_;
  Vector C0_;
  long long stride_ = 1;
  TrajectoryRecord record_;
};

void require_start(const MultiseparableSpec& spec, const Vector& x0, double dt, long long steps) {
  if (x0.size() != spec.dim()) throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  if (!spec.domain().contains(x0)) throw Error(ErrorCode::OutOfDomain, "initial state lies outside the domain");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "step count must be nonnegative");
}

}  // namespace

ScalarField::ScalarField(Value value, Gradient gradient)
    : value_(std::move(value)), gradient_(std::move(gradient)) {
  if (!value_) throw Error(ErrorCode::InvalidArgument, "scalar field needs a value function");
}

ScalarField ScalarField::linear(Vector coefficients) {
  return ScalarField([c = coefficients](const Vector& x) { return c.dot(x); },
                     [c = coefficients](const Vector&) { return c; });
}

ScalarField ScalarField::quadratic_diagonal(Vector weights) {
  return ScalarField(
      [w = weights](const Vector& x) { return 0.5 * (w.array() * x.array().square()).sum(); },
      [w = weights](const Vector& x) -> Vector { return w.cwiseProduct(x); });
}

ScalarField ScalarField::coordinate(int n, int i) {
  if (i < 1 || i > n) throw Error(ErrorCode::IndexOutOfRange, "coordinate index out of range");
  Vector e = Vector::Zero(n);
  e[i - 1] = 1.0;
  return linear(std::move(e));
}

Vector ScalarField::gradient(const Vector& x) const {
  return gradient_ ? gradient_(x) : numeric_gradient(value_, x);
}

double ScalarField::gradient_defect(const Vector& x) const {
  if (!gradient_) return 0.0;
  return (gradient_(x) - numeric_gradient(value_, x)).cwiseAbs().maxCoeff();
}

Vector vector_field(const MultiseparableSpec& spec, const Hamiltonian& H, const Vector& x) {
  return spec.evaluate(x) * H.gradient(x);
}

double bracket(const MultiseparableSpec& spec, const ScalarField& f, const ScalarField& g,
               const Vector& x) {
  return f.gradient(x).dot(spec.evaluate(x) * g.gradient(x));
}

double TrajectoryRecord::max_energy_drift() const {
  double m = 0.0;
  for (double d : energy_drift) m = std::max(m, std::abs(d));
  return m;
}

double TrajectoryRecord::max_casimir_drift() const {
  double m = 0.0;
  for (const Vector& d : casimir_drift)
    if (d.size()) m = std::max(m, d.cwiseAbs().maxCoeff());
  return m;
}

TrajectoryRecord integrate_direct(const MultiseparableSpec& spec, const Hamiltonian& H,
                                  const Vector& x0, double dt, long long steps, Method method) {
  require_start(spec, x0, dt, steps);
  Recorder recorder(spec, H, x0, steps);
  const Flow f = [&](const Vector& x) { return vector_field(spec, H, x); };

  Vector x = x0;
  for (long long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    Vector next;
    try {
      next = method == Method::RK4 ? rk4_step(f, x, dt) : implicit_midpoint_step(f, x, dt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MaxNewtonIters) throw;
      recorder.exit(t_prev);
      break;
    }
    if (!spec.domain().contains(next)) {
      recorder.exit(t_prev);
      break;
    }
    x = std::move(next);
    recorder.step(k, steps, static_cast<double>(k) * dt, x, dt);
  }
  return recorder.finish();
}

TrajectoryRecord integrate_canonical(const MultiseparableSpec& spec, const DarbouxChart& chart,
                                     const Hamiltonian& H, const Vector& x0, double dt,
                                     long long steps) {
  require_start(spec, x0, dt, steps);
  const int r = spec.rank();
  Recorder recorder(spec, H, x0, steps);

  const Vector z0 = chart.forward(x0);
  Vector z = z0;

  // Flow on the symplectic block: z'_{2p} = dK/dz_{2p+1}, z'_{2p+1} = -dK/dz_{2p}
  // with K = H o chart^-1 and the Casimir coordinates frozen.
  const Flow f = [&](const Vector& active) {
    Vector full = z;
    full.head(r) = active;
    const Vector x = chart.inverse(full);
    const Vector grad_z = chart.inverse_jacobian(full).transpose() * H.gradient(x);
    Vector out(r);
    for (int p = 0; p < r / 2; ++p) {
      out[2 * p] = grad_z[2 * p + 1];
      out[2 * p + 1] = -grad_z[2 * p];
    }
    return out;
  };

  Vector x = x0;
  for (long long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    if (r > 0) {
      try {
        const Vector active = implicit_midpoint_step(f, z.head(r), dt);
        if (active != z.head(r)) {
          z.head(r) = active;
          x = chart.inverse(z);
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::MaxNewtonIters) throw;
        recorder.exit(t_prev);
        break;
      }
    }
    if (!spec.domain().contains(x)) {
      recorder.exit(t_prev);
      break;
    }
    recorder.step(k, steps, static_cast<double>(k) * dt, x, dt);
  }
  return recorder.finish();
}

TrajectoryRecord integrate_canonical(const MultiseparableSpec& spec, const Hamiltonian& H,
                                     const Vector& x0, double dt, long long steps) {
  return integrate_canonical(spec, darboux_chart(spec), H, x0, dt, steps);
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "t";
  for (int i = 1; i <= record.dim; ++i) out << ",x" << i;
  out << ",dH";
  for (int p = record.rank + 1; p <= record.dim; ++p) out << ",dC" << p;
  out << '\n';
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    put_number(out, record.times[k]);
    for (int i = 0; i < record.dim; ++i) {
      out << ',';
      put_number(out, record.states[k][i]);
    }
    out << ',';
    put_number(out, record.energy_drift[k]);
    for (Eigen::Index p = 0; p < record.casimir_drift[k].size(); ++p) {
      out << ',';
      put_number(out, record.casimir_drift[k][p]);
    }
    out << '\n';
  }
}

}  // namespace poisson
