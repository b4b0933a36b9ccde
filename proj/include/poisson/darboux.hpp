#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "poisson/errors.hpp"
#include "poisson/spec.hpp"
#include "poisson/structure_field.hpp"

namespace poisson {

/// Coefficient vectors of the linear Casimirs C_p(x) = B_p . x, p = r+1..n.
std::vector<Vector> casimirs(const MultiseparableSpec& spec);

/// y = B x.
Vector linear_chart(const MultiseparableSpec& spec, const Vector& x);
/// x = A y.
Vector inverse_linear_chart(const MultiseparableSpec& spec, const Vector& y);

/// Anchor per factor: midpoint of Omega_i* when bounded, else 0 when it lies
/// in Omega_i*, else one unit inside the finite end of Omega_i*.
std::vector<double> default_anchors(const MultiseparableSpec& spec);

/// z_i = int_{anchor_i}^{y_i} dt / phi_i(t) for i <= r, z_i = y_i otherwise.
Vector quadrature_chart(const MultiseparableSpec& spec, const std::vector<double>& anchors,
                        const Vector& y);
Vector inverse_quadrature_chart(const MultiseparableSpec& spec, const std::vector<double>& anchors,
                                const Vector& z);

/// Congruence J* = M J M^T for the Jacobian M = dy/dx.
Matrix pushforward(const Matrix& J, const Matrix& jacobian);

using MapJacobian = std::function<Matrix(const Vector&)>;
/// J*(y) at y = map(x): the field at x pushed through map_jacobian(x).
Matrix pushforward(const StructureField& field, const MapJacobian& map_jacobian, const Vector& x);

/// Central-difference Jacobian of a map; oracle for the analytic chart
/// Jacobians.
Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& map, const Vector& x);

/// Image of the domain under the charts. The y-image B.Omega is a
/// parallelotope: membership is tested exactly through A, and its bounding
/// box is kept per coordinate. The z-box follows from monotonicity of each
/// z_i(y_i).
struct ChartImage {
  std::vector<Interval> y_bounds;
  std::vector<Interval> z_bounds;
};

/// Composite diffeomorphism x -> y = Bx -> z(y) taking a multiseparable
/// structure to the constant canonical form.
class DarbouxChart {
 public:
  const MultiseparableSpec& spec() const noexcept { return *spec_; }
  const std::vector<double>& anchors() const noexcept { return anchors_; }
  const std::vector<double>& inverse_anchors() const noexcept { return inverse_anchors_; }
  const ChartImage& image() const noexcept { return image_; }
  int blocks() const noexcept { return spec_->rank() / 2; }

  Vector forward(const Vector& x) const;
  Vector inverse(const Vector& z) const;

  /// dz/dx = diag(1/phi_i(y_i), 1, ...) B, analytic.
  Matrix jacobian(const Vector& x) const;
  /// dx/dz = A diag(phi_i(y_i), 1, ...) at the preimage of z.
  Matrix inverse_jacobian(const Vector& z) const;

  /// r/2 blocks [[0,1],[-1,0]] followed by zero rows and columns.
  Matrix canonical_matrix() const;

  bool contains_y(const Vector& y) const;
  bool contains_z(const Vector& z) const;

  /// True when forward() is exactly the identity (B = I and z = y).
  bool is_identity() const;

  /// Copy whose inverse map uses different anchors. Only useful to build a
  /// deliberately inconsistent chart in tests.
  DarbouxChart with_inverse_anchors(std::vector<double> anchors) const;

 private:
  friend DarbouxChart darboux_chart(const MultiseparableSpec&, std::optional<std::vector<double>>);
  DarbouxChart(std::shared_ptr<const MultiseparableSpec> spec, std::vector<double> anchors);

  std::shared_ptr<const MultiseparableSpec> spec_;
  std::vector<double> anchors_;
  std::vector<double> inverse_anchors_;
  ChartImage image_;
};

inline constexpr double kRoundTripTolerance = 1e-10;

/// Builds the chart and checks the round trip x -> z -> x on 100 samples of
/// the domain. Throws CertificationFailure if the round trip misses
/// kRoundTripTolerance (scaled by max(1, |x|_inf)), EmptyDomainSample if the
/// domain cannot be sampled.
DarbouxChart darboux_chart(const MultiseparableSpec& spec,
                           std::optional<std::vector<double>> anchors = std::nullopt);

struct CanonicalReport {
  double max_deviation = 0.0;
  std::array<int, 2> worst_entry{1, 1};  // one-based
  Vector worst_point;
  double max_round_trip = 0.0;
  int samples = 0;
  double tolerance = 0.0;
  bool pass = true;
};

class CertificationFailure : public Error {
 public:
  CertificationFailure(CanonicalReport report, const std::string& what)
      : Error(ErrorCode::CertificationFailure, what), report_(std::move(report)) {}
  const CanonicalReport& report() const noexcept { return report_; }

 private:
  CanonicalReport report_;
};

/// At each sample x: z = forward(x), x' = inverse(z), and J(x') pushed
/// through the analytic Jacobian at x must match the canonical matrix
/// entrywise within `tolerance`, with the round trip within
/// kRoundTripTolerance. Throws CertificationFailure otherwise.
CanonicalReport certify_canonical(const MultiseparableSpec& spec, const DarbouxChart& chart,
                                  int num_points, double tolerance, std::uint64_t seed = 0);

}  // namespace poisson
